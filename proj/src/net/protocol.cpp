#include "launcher/net/protocol.hpp"

#include <array>
#include <limits>
#include <utility>

#include "launcher/error.hpp"

namespace launcher::net {

namespace {

constexpr std::array<std::pair<Command, std::string_view>, 9> command_names{{
    {Command::ping, "ping"},
    {Command::get_state, "get_state"},
    {Command::set_wheels, "set_wheels"},
    {Command::set_orientation, "set_orientation"},
    {Command::configure, "configure"},
    {Command::launch, "launch"},
    {Command::launch_at, "launch_at"},
    {Command::stir, "stir"},
    {Command::shutdown, "shutdown"},
}};

constexpr std::array<std::pair<EventType, std::string_view>, 3> event_names{{
    {EventType::launched, "launched"},
    {EventType::feed_starved, "feed_starved"},
    {EventType::clog_resolved, "clog_resolved"},
}};

std::optional<std::int64_t> read_id(const nlohmann::json& j)
{
    if (j.is_number_integer() && !j.is_number_unsigned())
        return j.get<std::int64_t>();
    if (j.is_number_unsigned()) {
        const auto u = j.get<std::uint64_t>();
        if (u <= static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
            return static_cast<std::int64_t>(u);
    }
    return std::nullopt;
}

double number_at(const nlohmann::json& j, const char* key)
{
    const auto it = j.find(key);
    if (it == j.end() || !it->is_number())
        throw FormatError(std::string("event field ") + key + " must be a number");
    return it->get<double>();
}

} // namespace

std::optional<Command> parse_command(std::string_view name)
{
    for (const auto& [c, n] : command_names)
        if (n == name)
            return c;
    return std::nullopt;
}

std::string_view to_string(Command c)
{
    for (const auto& [k, n] : command_names)
        if (k == c)
            return n;
    return "unknown";
}

Request parse_request(std::string_view frame, std::optional<std::int64_t>& id_out)
{
    id_out.reset();
    if (frame.size() > max_frame_bytes)
        throw FormatError("frame exceeds " + std::to_string(max_frame_bytes) + " bytes");
    nlohmann::json j = nlohmann::json::parse(frame, nullptr, false);
    if (j.is_discarded())
        throw FormatError("malformed JSON");
    if (!j.is_object())
        throw FormatError("request must be a JSON object");
    const auto id_it = j.find("id");
    if (id_it == j.end())
        throw FormatError("request has no id");
    const auto id = read_id(*id_it);
    if (!id)
        throw FormatError("id must be an integer");
    id_out = id;
    const auto cmd_it = j.find("cmd");
    if (cmd_it == j.end() || !cmd_it->is_string())
        throw FormatError("request has no string cmd");
    const auto cmd = parse_command(cmd_it->get<std::string>());
    if (!cmd)
        throw FormatError("unknown command '" + cmd_it->get<std::string>() + "'");
    return Request{*id, *cmd, std::move(j)};
}

std::string serialize(const nlohmann::json& j)
{
    return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

nlohmann::json ok_response(std::int64_t id, const LauncherState& state)
{
    return {{"id", id}, {"ok", true}, {"state", state}};
}

nlohmann::json error_response(std::optional<std::int64_t> id, const std::string& message,
                              const LauncherState& state)
{
    nlohmann::json r = {{"id", nullptr}, {"ok", false}, {"state", state}, {"error", message}};
    if (id)
        r["id"] = *id;
    return r;
}

std::string_view to_string(EventType t)
{
    for (const auto& [k, n] : event_names)
        if (k == t)
            return n;
    return "unknown";
}

EventType parse_event_type(std::string_view name)
{
    for (const auto& [k, n] : event_names)
        if (n == name)
            return k;
    throw FormatError("unknown event type '" + std::string(name) + "'");
}

nlohmann::json event_frame(const Event& e)
{
    nlohmann::json ev = {{"type", to_string(e.type)},
                         {"request_id", nullptr},
                         {"t_monotonic_s", e.t_monotonic_s},
                         {"t_unix_s", e.t_unix_s}};
    if (e.request_id)
        ev["request_id"] = *e.request_id;
    if (e.target_s)
        ev["target_s"] = *e.target_s;
    if (e.type == EventType::launched) {
        ev["landing"] = nullptr;
        if (e.landing)
            ev["landing"] = {{"x", e.landing->x},
                             {"y", e.landing->y},
                             {"t", e.landing->t},
                             {"on_table", e.landing->on_table}};
    }
    if (e.trajectory)
        ev["trajectory"] = samples_to_json(*e.trajectory);
    return {{"event", std::move(ev)}};
}

Event parse_event(const nlohmann::json& j)
{
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
        throw FormatError("event must be an object with a string type");
    Event e;
    e.type = parse_event_type(j["type"].get<std::string>());
    if (const auto it = j.find("request_id"); it != j.end() && !it->is_null()) {
        e.request_id = read_id(*it);
        if (!e.request_id)
            throw FormatError("event request_id must be an integer");
    }
    e.t_monotonic_s = number_at(j, "t_monotonic_s");
    e.t_unix_s = number_at(j, "t_unix_s");
    if (j.contains("target_s"))
        e.target_s = number_at(j, "target_s");
    if (const auto it = j.find("landing"); it != j.end() && !it->is_null()) {
        EventLanding l;
        l.x = number_at(*it, "x");
        l.y = number_at(*it, "y");
        l.t = number_at(*it, "t");
        if (!it->contains("on_table") || !(*it)["on_table"].is_boolean())
            throw FormatError("landing.on_table must be a boolean");
        l.on_table = (*it)["on_table"].get<bool>();
        e.landing = l;
    }
    if (const auto it = j.find("trajectory"); it != j.end())
        e.trajectory = samples_from_json(*it);
    return e;
}

nlohmann::json samples_to_json(const Trajectory& traj)
{
    nlohmann::json out = nlohmann::json::array();
    for (const auto& s : traj.samples)
        out.push_back({s.t, s.position.x(), s.position.y(), s.position.z()});
    return out;
}

Trajectory samples_from_json(const nlohmann::json& j)
{
    if (!j.is_array())
        throw FormatError("trajectory must be an array of [t, x, y, z]");
    Trajectory traj;
    traj.samples.reserve(j.size());
    for (const auto& row : j) {
        if (!row.is_array() || row.size() != 4)
            throw FormatError("trajectory sample must be [t, x, y, z]");
        for (const auto& v : row)
            if (!v.is_number())
                throw FormatError("trajectory sample values must be numbers");
        traj.samples.push_back(
            {row[0].get<double>(),
             Vec3{row[1].get<double>(), row[2].get<double>(), row[3].get<double>()}});
    }
    return traj;
}

} // namespace launcher::net
