#include "launcher/net/client.hpp"

#include <charconv>
#include <cstdlib>
#include <deque>

#include <boost/asio.hpp>

#include "launcher/error.hpp"

namespace launcher::net {

namespace {

namespace asio = boost::asio;
using asio::ip::tcp;
using Clock = std::chrono::steady_clock;

constexpr auto launch_margin = std::chrono::milliseconds(500);

std::uint16_t parse_port(std::string_view text)
{
    unsigned value = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || end != text.data() + text.size() || value == 0 || value > 65535)
        throw RangeError("invalid port '" + std::string(text) + "'");
    return static_cast<std::uint16_t>(value);
}

} // namespace

Endpoint Endpoint::parse(std::string_view text)
{
    Endpoint ep;
    if (text.empty())
        throw RangeError("empty endpoint");
    if (text.front() == '[') {
        const auto close = text.find(']');
        if (close == std::string_view::npos || close + 1 >= text.size() || text[close + 1] != ':')
            throw RangeError("invalid endpoint '" + std::string(text) + "'");
        ep.host = std::string(text.substr(1, close - 1));
        ep.port = parse_port(text.substr(close + 2));
        return ep;
    }
    const auto colon = text.rfind(':');
    if (colon == std::string_view::npos) {
        ep.port = parse_port(text);
        return ep;
    }
    if (colon == 0)
        throw RangeError("invalid endpoint '" + std::string(text) + "'");
    ep.host = std::string(text.substr(0, colon));
    ep.port = parse_port(text.substr(colon + 1));
    return ep;
}

std::string Endpoint::to_string() const
{
    const bool v6 = host.find(':') != std::string::npos;
    return (v6 ? "[" + host + "]" : host) + ":" + std::to_string(port);
}

Endpoint endpoint_from_env()
{
    if (const char* env = std::getenv("LAUNCHER_ENDPOINT"); env && *env)
        return Endpoint::parse(env);
    return {};
}

struct Session::Impl
{
    asio::io_context io;
    tcp::socket socket{io};
    asio::streambuf buffer;
    std::deque<Event> events;
    std::chrono::milliseconds timeout;
    std::int64_t next_id = 1;
    LauncherState last_state;
    double server_time = 0.0;

    explicit Impl(std::chrono::milliseconds t) : timeout(t) {}

    // Runs the io_context until `done` or the deadline; a timed-out
    // operation is cancelled and drained so the socket stays usable.
    template <class Done>
    bool run_until(Clock::time_point deadline, Done done)
    {
        io.restart();
        while (!done() && Clock::now() < deadline)
            io.run_one_until(deadline);
        if (done())
            return true;
        boost::system::error_code ignore;
        socket.cancel(ignore);
        io.restart();
        io.run();
        return false;
    }

    void connect(const Endpoint& ep)
    {
        const auto deadline = Clock::now() + timeout;
        tcp::resolver resolver(io);
        boost::system::error_code ec;
        const auto results = resolver.resolve(ep.host, std::to_string(ep.port), ec);
        if (ec)
            throw NetworkError("cannot resolve " + ep.to_string() + ": " + ec.message());
        std::optional<boost::system::error_code> result;
        asio::async_connect(socket, results,
                            [&](boost::system::error_code e, const tcp::endpoint&) { result = e; });
        if (!run_until(deadline, [&] { return result.has_value(); }))
            throw TimeoutError("connect to " + ep.to_string() + " timed out");
        if (*result)
            throw NetworkError("cannot connect to " + ep.to_string() + ": " + result->message());
        socket.set_option(tcp::no_delay(true), ec);
    }

    void write_frame(const std::string& frame, Clock::time_point deadline)
    {
        std::optional<boost::system::error_code> result;
        asio::async_write(socket, asio::buffer(frame),
                          [&](boost::system::error_code e, std::size_t) { result = e; });
        if (!run_until(deadline, [&] { return result.has_value(); }))
            throw TimeoutError("send timed out");
        if (*result)
            throw NetworkError("send failed: " + result->message());
    }

    /// One frame, or nullopt at the deadline.
    std::optional<nlohmann::json> read_frame(Clock::time_point deadline)
    {
        for (;;) {
            std::optional<boost::system::error_code> result;
            std::size_t n = 0;
            asio::async_read_until(socket, buffer, '\n',
                                   [&](boost::system::error_code e, std::size_t len) {
                                       result = e;
                                       n = len;
                                   });
            if (!run_until(deadline, [&] { return result.has_value(); }))
                return std::nullopt;
            if (*result)
                throw NetworkError("connection lost: " + result->message());
            const auto data = buffer.data();
            std::string line(asio::buffers_begin(data), asio::buffers_begin(data) + n - 1);
            buffer.consume(n);
            auto j = nlohmann::json::parse(line, nullptr, false);
            if (j.is_discarded() || !j.is_object())
                throw FormatError("server sent a malformed frame");
            return j;
        }
    }

    /// Keeps events for later; true when the frame was one.
    bool stash_event(const nlohmann::json& j)
    {
        if (j.contains("id"))
            return false;
        if (const auto it = j.find("event"); it != j.end())
            events.push_back(parse_event(*it));
        return true;
    }

    nlohmann::json request(std::string_view cmd, nlohmann::json payload)
    {
        if (!payload.is_object())
            throw FormatError("request payload must be a JSON object");
        const std::int64_t id = next_id++;
        payload["id"] = id;
        payload["cmd"] = cmd;
        const auto deadline = Clock::now() + timeout;
        write_frame(serialize(payload) + "\n", deadline);
        for (;;) {
            auto j = read_frame(deadline);
            if (!j)
                throw TimeoutError("no reply to " + std::string(cmd) + " #" + std::to_string(id)
                                   + " within " + std::to_string(timeout.count()) + " ms");
            if (stash_event(*j))
                continue;
            // Replies to requests that timed out earlier are skipped.
            if (!(*j)["id"].is_number_integer() || (*j)["id"].get<std::int64_t>() != id)
                continue;
            if (const auto it = j->find("state"); it != j->end())
                last_state = it->get<LauncherState>();
            if (!j->value("ok", false))
                throw RequestRejected(j->value("error", std::string("request rejected")));
            return std::move(*j);
        }
    }
};

Session::Session(const Endpoint& endpoint, std::chrono::milliseconds timeout)
    : impl_(std::make_unique<Impl>(timeout))
{
    impl_->connect(endpoint);
}

Session::~Session() = default;
Session::Session(Session&&) noexcept = default;
Session& Session::operator=(Session&&) noexcept = default;

std::chrono::milliseconds Session::timeout() const noexcept
{
    return impl_->timeout;
}

void Session::set_timeout(std::chrono::milliseconds t)
{
    if (t.count() <= 0)
        throw RangeError("timeout must be positive");
    impl_->timeout = t;
}

nlohmann::json Session::request(std::string_view cmd, nlohmann::json payload)
{
    return impl_->request(cmd, std::move(payload));
}

LauncherState Session::ping()
{
    const auto r = request("ping");
    impl_->server_time = r.value("t_monotonic_s", 0.0);
    return impl_->last_state;
}

LauncherState Session::get_state()
{
    request("get_state");
    return impl_->last_state;
}

LauncherState Session::set_wheels(const WheelActuation& w)
{
    request("set_wheels", {{"bottom", w.bottom}, {"top_left", w.top_left}, {"top_right", w.top_right}});
    return impl_->last_state;
}

LauncherState Session::set_orientation(double azimuth_deg, double altitude_deg)
{
    request("set_orientation", {{"azimuth_deg", azimuth_deg}, {"altitude_deg", altitude_deg}});
    return impl_->last_state;
}

LauncherState Session::set_state(const WheelActuation& wheels, double azimuth_deg,
                                 double altitude_deg)
{
    try {
        validate_actuation(wheels.bottom, "bottom");
        validate_actuation(wheels.top_left, "top_left");
        validate_actuation(wheels.top_right, "top_right");
    } catch (const RangeError& e) {
        throw RequestRejected(e.what());
    }
    set_orientation(azimuth_deg, altitude_deg);
    return set_wheels(wheels);
}

LauncherState Session::configure(std::optional<double> stroke_gain, std::optional<RampUp> ramp_up,
                                 std::optional<double> pinch_diameter_mm)
{
    nlohmann::json payload = nlohmann::json::object();
    if (stroke_gain)
        payload["stroke_gain"] = *stroke_gain;
    if (ramp_up)
        payload["ramp_up_time"] = *ramp_up;
    if (pinch_diameter_mm)
        payload["pinch_diameter_mm"] = *pinch_diameter_mm;
    request("configure", std::move(payload));
    return impl_->last_state;
}

LauncherState Session::apply(const LauncherState& s)
{
    try {
        s.validate();
    } catch (const RangeError& e) {
        throw RequestRejected(e.what());
    }
    configure(s.stroke_gain, s.ramp_up, s.pinch_diameter_mm);
    return set_state(s.wheels, s.azimuth_deg, s.altitude_deg);
}

namespace {

LaunchTicket ticket_from(const nlohmann::json& r)
{
    LaunchTicket t;
    t.request_id = r.at("id").get<std::int64_t>();
    const auto& l = r.at("launch");
    t.release_estimate_s = l.at("release_estimate_s").get<double>();
    t.delay_s = l.at("delay_s").get<double>();
    t.best_effort = l.at("best_effort").get<bool>();
    return t;
}

nlohmann::json launch_payload(bool with_trajectory)
{
    nlohmann::json p = nlohmann::json::object();
    if (with_trajectory)
        p["trajectory"] = true;
    return p;
}

} // namespace

LaunchTicket Session::launch(bool with_trajectory)
{
    return ticket_from(request("launch", launch_payload(with_trajectory)));
}

LaunchTicket Session::launch_at_monotonic(double t_monotonic_s, bool with_trajectory)
{
    auto p = launch_payload(with_trajectory);
    p["t_monotonic_s"] = t_monotonic_s;
    return ticket_from(request("launch_at", std::move(p)));
}

LaunchTicket Session::launch_at_unix(double t_unix_s, bool with_trajectory)
{
    auto p = launch_payload(with_trajectory);
    p["t_unix_s"] = t_unix_s;
    return ticket_from(request("launch_at", std::move(p)));
}

Event Session::wait_launch(const LaunchTicket& ticket)
{
    const auto delay = std::chrono::duration_cast<Clock::duration>(
        std::chrono::duration<double>(std::max(0.0, ticket.delay_s)));
    const auto deadline = Clock::now() + delay + launch_margin + impl_->timeout;
    const auto concludes = [&](const Event& e) {
        return e.request_id == ticket.request_id
               && (e.type == EventType::launched || e.type == EventType::feed_starved);
    };
    for (;;) {
        auto& q = impl_->events;
        if (const auto it = std::find_if(q.begin(), q.end(), concludes); it != q.end()) {
            Event e = std::move(*it);
            q.erase(it);
            if (e.type == EventType::feed_starved)
                throw FeedStarvedError("launch #" + std::to_string(ticket.request_id)
                                       + " found the supply channel empty");
            return e;
        }
        auto j = impl_->read_frame(deadline);
        if (!j)
            throw TimeoutError("launch #" + std::to_string(ticket.request_id) + " not reported in time");
        impl_->stash_event(*j);
    }
}

Event Session::launch_and_wait(bool with_trajectory)
{
    return wait_launch(launch(with_trajectory));
}

void Session::stir()
{
    request("stir");
}

void Session::shutdown()
{
    request("shutdown");
}

std::optional<Event> Session::next_event(std::chrono::milliseconds wait)
{
    const auto deadline = Clock::now() + wait;
    for (;;) {
        if (!impl_->events.empty()) {
            Event e = std::move(impl_->events.front());
            impl_->events.pop_front();
            return e;
        }
        auto j = impl_->read_frame(deadline);
        if (!j)
            return std::nullopt;
        impl_->stash_event(*j);
    }
}

const LauncherState& Session::last_state() const noexcept
{
    return impl_->last_state;
}

std::int64_t Session::last_id() const noexcept
{
    return impl_->next_id - 1;
}

double Session::server_time() const noexcept
{
    return impl_->server_time;
}

Trajectory ClientLaunchSource::launch()
{
    Event e = session_.launch_and_wait(true);
    if (!e.trajectory)
        throw FormatError("server reported no tracked flight for the launch");
    Trajectory traj = std::move(*e.trajectory);
    traj.id = "remote-" + std::to_string(count_++);
    traj.control = session_.last_state();
    return traj;
}

} // namespace launcher::net
