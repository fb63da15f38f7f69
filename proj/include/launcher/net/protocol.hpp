#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "launcher/launcher_state.hpp"
#include "launcher/trajectory.hpp"

namespace launcher::net {

inline constexpr std::uint16_t default_tcp_port = 5555;
inline constexpr std::uint16_t default_gateway_port = 8080;
/// Longest accepted frame; a connection sending more without a newline is dropped.
inline constexpr std::size_t max_frame_bytes = 64 * 1024;

enum class Command {
    ping,
    get_state,
    set_wheels,
    set_orientation,
    configure,
    launch,
    launch_at,
    stir,
    shutdown
};

std::optional<Command> parse_command(std::string_view name);
std::string_view to_string(Command c);

/// One decoded frame. `body` keeps the whole object so payload fields can
/// be read next to "id" and "cmd".
struct Request
{
    std::int64_t id = 0;
    Command command = Command::ping;
    nlohmann::json body;
};

/// Decodes one newline-free frame. Throws FormatError for anything that is
/// not a JSON object with an integer "id" and a known string "cmd". When
/// the id could be read before the failure it is stored in `id_out` so the
/// error response can echo it.
Request parse_request(std::string_view frame, std::optional<std::int64_t>& id_out);

/// Compact single-line JSON. Invalid UTF-8 in echoed strings is replaced
/// rather than failing the frame.
std::string serialize(const nlohmann::json& j);

nlohmann::json ok_response(std::int64_t id, const LauncherState& state);
/// `id` is null when the frame carried no readable id.
nlohmann::json error_response(std::optional<std::int64_t> id, const std::string& message,
                              const LauncherState& state);

enum class EventType { launched, feed_starved, clog_resolved };

std::string_view to_string(EventType t);
EventType parse_event_type(std::string_view name);

struct EventLanding
{
    double x = 0.0;
    double y = 0.0;
    double t = 0.0;
    bool on_table = false;
};

/// Asynchronous notification. Travels as {"event": {...}} without an id;
/// `request_id` names the launch request it concludes.
struct Event
{
    EventType type = EventType::launched;
    std::optional<std::int64_t> request_id;
    double t_monotonic_s = 0.0; ///< server monotonic clock
    double t_unix_s = 0.0;
    std::optional<double> target_s;  ///< requested release time (launch_at), monotonic
    std::optional<EventLanding> landing;
    std::optional<Trajectory> trajectory;
};

nlohmann::json event_frame(const Event& e);
/// Reads the object under "event". Throws FormatError on a malformed event.
Event parse_event(const nlohmann::json& event);

/// Samples as [[t, x, y, z], ...].
nlohmann::json samples_to_json(const Trajectory& traj);
Trajectory samples_from_json(const nlohmann::json& j);

} // namespace launcher::net
