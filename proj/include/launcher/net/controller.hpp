#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "launcher/net/backend.hpp"
#include "launcher/net/protocol.hpp"

namespace launcher::net {

/// When the reservoir stirrer runs without being asked.
enum class SupervisionMode {
    off,
    sensor,       ///< after consecutive supervision ticks with an empty channel
    after_launch, ///< once after every release
};

std::string_view to_string(SupervisionMode m);
/// Throws RangeError for an unknown name.
SupervisionMode parse_supervision_mode(std::string_view name);

struct ControllerConfig
{
    SupervisionMode supervision = SupervisionMode::sensor;
    double supervision_period = 0.1; ///< s; 10 Hz
    int empty_ticks_before_stir = 2;
    std::size_t max_pending_launches = 64;
};

using SessionId = std::uint64_t;
/// Outbound frames addressed here go to every connected session.
inline constexpr SessionId all_sessions = 0;

struct Outbound
{
    SessionId to = all_sessions;
    nlohmann::json frame;
};

struct ControllerStats
{
    std::uint64_t launches_requested = 0;
    std::uint64_t launched = 0;
    std::uint64_t feed_starved = 0;
    std::uint64_t stirs = 0;
    std::uint64_t clogs_resolved = 0;
};

/// The authoritative launcher state machine. It never reads a clock: every
/// call carries the current monotonic time, so the same code runs against
/// the wall clock in the server and against a simulated clock in tests.
/// Feed control passes run on a fixed grid of backend ticks from the
/// construction time; supervision runs on every n-th pass.
///
/// Not thread-safe; the server owns it from one thread.
class Controller
{
public:
    Controller(std::unique_ptr<Backend> backend, ControllerConfig cfg, double now);

    /// Decodes and handles one frame. Always returns exactly one response;
    /// undecodable frames yield an error response with a null id.
    /// `unix_offset` is wall-clock minus monotonic time, used for t_unix_s.
    nlohmann::json handle_frame(std::string_view frame, SessionId from, double now,
                                double unix_offset = 0.0);
    nlohmann::json handle(const Request& req, SessionId from, double now, double unix_offset = 0.0);

    /// Runs every control pass due up to `now`.
    void advance(double now);
    double next_tick_time() const noexcept;

    /// Event frames produced since the last call.
    std::vector<Outbound> take_outbox();

    /// State, feed diagnostics and counters for consoles.
    nlohmann::json snapshot(double now) const;

    bool shutdown_requested() const noexcept { return shutdown_; }
    const LauncherState& state() const noexcept { return state_; }
    const ControllerStats& stats() const noexcept { return stats_; }
    std::size_t pending_launches() const noexcept;
    const ControllerConfig& config() const noexcept { return cfg_; }
    Backend& backend() noexcept { return *backend_; }

private:
    struct Launch
    {
        std::int64_t request_id = 0;
        SessionId session = all_sessions;
        double start = 0.0; ///< when the ramp-up (or the stroke, if none) begins
        std::optional<double> target;
        bool with_trajectory = false;
        bool stroking = false;
        double stroke_at = 0.0;
    };

    nlohmann::json dispatch(const Request& req, SessionId from, double now);
    nlohmann::json enqueue_launch(const Request& req, SessionId from, double now,
                                  std::optional<double> target);
    void apply(const LauncherState& next);
    double lead_time() const;
    double expected_release(double start) const;
    void run_tick(std::uint64_t k);
    void start_launch(double t);
    void supervise();
    void emit(SessionId to, const Event& e);
    double tick_time(std::uint64_t k) const noexcept;

    std::unique_ptr<Backend> backend_;
    ControllerConfig cfg_;
    LauncherState state_;
    double t0_;
    double tick_;
    std::uint64_t next_tick_ = 0;
    std::uint64_t ticks_per_supervision_;
    double unix_offset_ = 0.0;

    std::deque<Launch> pending_; ///< ordered by start time
    std::optional<Launch> active_;
    int empty_ticks_ = 0;
    bool shutdown_ = false;
    ControllerStats stats_;
    std::vector<Outbound> outbox_;
};

} // namespace launcher::net
