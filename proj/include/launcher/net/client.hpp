#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "launcher/lab/experiment.hpp"
#include "launcher/launcher_state.hpp"
#include "launcher/net/protocol.hpp"

namespace launcher::net {

struct Endpoint
{
    std::string host = "127.0.0.1";
    std::uint16_t port = default_tcp_port;

    /// "host:port", "[v6]:port" or just "port". Throws RangeError.
    static Endpoint parse(std::string_view text);
    std::string to_string() const;
};

/// LAUNCHER_ENDPOINT if set, otherwise the default local endpoint.
Endpoint endpoint_from_env();

inline constexpr std::chrono::milliseconds default_timeout{500};

/// Server acknowledgement of a launch request.
struct LaunchTicket
{
    std::int64_t request_id = 0;
    double release_estimate_s = 0.0; ///< server monotonic clock
    double delay_s = 0.0;            ///< estimated time from acknowledgement to release
    bool best_effort = false;
};

/// Synchronous client for the control server. Requests carry strictly
/// increasing ids; events that arrive while waiting for a reply are kept
/// for later. No call blocks longer than its timeout plus one frame.
/// Retrying is the caller's job: a launch is not idempotent.
///
/// Single owner; not thread-safe.
class Session
{
public:
    /// Connects or throws NetworkError / TimeoutError.
    explicit Session(const Endpoint& endpoint, std::chrono::milliseconds timeout = default_timeout);
    ~Session();
    Session(Session&&) noexcept;
    Session& operator=(Session&&) noexcept;

    std::chrono::milliseconds timeout() const noexcept;
    void set_timeout(std::chrono::milliseconds t);

    /// Sends {"id", "cmd", payload...} and returns the matching response.
    /// Throws TimeoutError, RequestRejected (ok = false) or NetworkError.
    nlohmann::json request(std::string_view cmd, nlohmann::json payload = nlohmann::json::object());

    LauncherState ping();
    LauncherState get_state();
    LauncherState set_wheels(const WheelActuation& wheels);
    LauncherState set_orientation(double azimuth_deg, double altitude_deg);
    /// Orientation first, then wheels. Wheels are checked before anything is
    /// sent, so a rejection leaves the server state as it was.
    LauncherState set_state(const WheelActuation& wheels, double azimuth_deg, double altitude_deg);
    LauncherState configure(std::optional<double> stroke_gain, std::optional<RampUp> ramp_up,
                            std::optional<double> pinch_diameter_mm);
    /// Every field of `state`.
    LauncherState apply(const LauncherState& state);

    LaunchTicket launch(bool with_trajectory = false);
    LaunchTicket launch_at_monotonic(double t_monotonic_s, bool with_trajectory = false);
    LaunchTicket launch_at_unix(double t_unix_s, bool with_trajectory = false);
    /// Waits for the launch to conclude, up to its estimated delay + 0.5 s
    /// + the session timeout. Throws FeedStarvedError or TimeoutError.
    Event wait_launch(const LaunchTicket& ticket);
    Event launch_and_wait(bool with_trajectory = false);

    void stir();
    void shutdown();

    /// Next buffered or incoming event, waiting at most `wait`.
    std::optional<Event> next_event(std::chrono::milliseconds wait);

    /// State from the most recent response.
    const LauncherState& last_state() const noexcept;
    std::int64_t last_id() const noexcept;
    /// Server monotonic time reported by the last ping.
    double server_time() const noexcept;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Experiments over the network: each launch waits for the tracked flight.
class ClientLaunchSource final : public lab::LaunchSource
{
public:
    explicit ClientLaunchSource(Session& session) : session_(session) {}

    void set_state(const LauncherState& state) override { session_.apply(state); }
    /// Throws FormatError when the server has no tracker to report the flight.
    Trajectory launch() override;

private:
    Session& session_;
    long count_ = 0;
};

} // namespace launcher::net
