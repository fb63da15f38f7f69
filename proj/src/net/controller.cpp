#include "launcher/net/controller.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "launcher/error.hpp"
#include "launcher/lab/landing.hpp"

namespace launcher::net {

namespace {

constexpr double time_eps = 1e-9;

double required_number(const nlohmann::json& body, const char* key)
{
    const auto it = body.find(key);
    if (it == body.end())
        throw FormatError(std::string("missing field ") + key);
    if (!it->is_number())
        throw FormatError(std::string(key) + " must be a number");
    return it->get<double>();
}

/// Rejects payload fields the command does not define, so a misspelt
/// field cannot silently fall back to a default.
void allow_fields(const nlohmann::json& body, std::initializer_list<std::string_view> allowed)
{
    for (const auto& [key, value] : body.items()) {
        if (key == "id" || key == "cmd")
            continue;
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw FormatError("unexpected field " + key);
    }
}

bool optional_flag(const nlohmann::json& body, const char* key)
{
    const auto it = body.find(key);
    if (it == body.end())
        return false;
    if (!it->is_boolean())
        throw FormatError(std::string(key) + " must be a boolean");
    return it->get<bool>();
}

} // namespace

std::string_view to_string(SupervisionMode m)
{
    switch (m) {
    case SupervisionMode::off:
        return "off";
    case SupervisionMode::sensor:
        return "sensor";
    case SupervisionMode::after_launch:
        return "after_launch";
    }
    return "unknown";
}

SupervisionMode parse_supervision_mode(std::string_view name)
{
    for (auto m : {SupervisionMode::off, SupervisionMode::sensor, SupervisionMode::after_launch})
        if (to_string(m) == name)
            return m;
    throw RangeError("supervision mode must be off, sensor or after_launch");
}

Controller::Controller(std::unique_ptr<Backend> backend, ControllerConfig cfg, double now)
    : backend_(std::move(backend)), cfg_(cfg), t0_(now)
{
    if (!backend_)
        throw RangeError("controller needs a backend");
    tick_ = backend_->tick();
    if (!(tick_ > 0.0))
        throw RangeError("backend tick must be positive");
    if (!(cfg_.supervision_period >= tick_))
        throw RangeError("supervision period must be at least one feed tick");
    if (cfg_.empty_ticks_before_stir < 1)
        throw RangeError("empty_ticks_before_stir must be at least 1");
    ticks_per_supervision_ =
        static_cast<std::uint64_t>(std::llround(cfg_.supervision_period / tick_));
    backend_->apply_state(state_);
}

double Controller::tick_time(std::uint64_t k) const noexcept
{
    return t0_ + static_cast<double>(k) * tick_;
}

double Controller::next_tick_time() const noexcept
{
    return tick_time(next_tick_);
}

std::size_t Controller::pending_launches() const noexcept
{
    return pending_.size() + (active_ ? 1 : 0);
}

std::vector<Outbound> Controller::take_outbox()
{
    std::vector<Outbound> out;
    out.swap(outbox_);
    return out;
}

nlohmann::json Controller::handle_frame(std::string_view frame, SessionId from, double now,
                                        double unix_offset)
{
    std::optional<std::int64_t> id;
    Request req;
    try {
        req = parse_request(frame, id);
    } catch (const FormatError& e) {
        advance(now);
        return error_response(id, e.what(), state_);
    }
    return handle(req, from, now, unix_offset);
}

nlohmann::json Controller::handle(const Request& req, SessionId from, double now,
                                  double unix_offset)
{
    unix_offset_ = unix_offset;
    advance(now);
    try {
        return dispatch(req, from, now);
    } catch (const Error& e) {
        return error_response(req.id, e.what(), state_);
    } catch (const nlohmann::json::exception& e) {
        return error_response(req.id, e.what(), state_);
    }
}

void Controller::apply(const LauncherState& next)
{
    next.validate();
    backend_->apply_state(next);
    state_ = next;
}

nlohmann::json Controller::dispatch(const Request& req, SessionId from, double now)
{
    const auto& body = req.body;
    switch (req.command) {
    case Command::ping: {
        allow_fields(body, {});
        auto r = ok_response(req.id, state_);
        r["pong"] = true;
        r["t_monotonic_s"] = now;
        r["t_unix_s"] = now + unix_offset_;
        return r;
    }
    case Command::get_state: {
        allow_fields(body, {});
        auto r = ok_response(req.id, state_);
        r["t_monotonic_s"] = now;
        return r;
    }
    case Command::set_wheels: {
        allow_fields(body, {"bottom", "top_left", "top_right"});
        LauncherState next = state_;
        next.wheels = {required_number(body, "bottom"), required_number(body, "top_left"),
                       required_number(body, "top_right")};
        apply(next);
        return ok_response(req.id, state_);
    }
    case Command::set_orientation: {
        allow_fields(body, {"azimuth_deg", "altitude_deg"});
        LauncherState next = state_;
        next.azimuth_deg = required_number(body, "azimuth_deg");
        next.altitude_deg = required_number(body, "altitude_deg");
        apply(next);
        return ok_response(req.id, state_);
    }
    case Command::configure: {
        allow_fields(body, {"stroke_gain", "ramp_up_time", "pinch_diameter_mm"});
        LauncherState next = state_;
        if (body.contains("stroke_gain"))
            next.stroke_gain = required_number(body, "stroke_gain");
        if (body.contains("pinch_diameter_mm"))
            next.pinch_diameter_mm = required_number(body, "pinch_diameter_mm");
        if (const auto it = body.find("ramp_up_time"); it != body.end()) {
            if (it->is_string() && it->get<std::string>() == "continuous")
                next.ramp_up = RampUp::continuous();
            else if (it->is_number())
                next.ramp_up = RampUp::seconds(it->get<double>());
            else
                throw FormatError("ramp_up_time must be seconds or \"continuous\"");
        }
        const bool spin_up = next.ramp_up.is_continuous() && !state_.ramp_up.is_continuous();
        apply(next);
        // Continuous mode keeps the wheels turning from now on.
        if (spin_up)
            backend_->start_ramp(now);
        return ok_response(req.id, state_);
    }
    case Command::launch:
        allow_fields(body, {"trajectory"});
        return enqueue_launch(req, from, now, std::nullopt);
    case Command::launch_at: {
        allow_fields(body, {"t_monotonic_s", "t_unix_s", "trajectory"});
        const bool mono = body.contains("t_monotonic_s");
        const bool wall = body.contains("t_unix_s");
        if (mono == wall)
            throw FormatError("launch_at needs exactly one of t_monotonic_s and t_unix_s");
        const double target = mono ? required_number(body, "t_monotonic_s")
                                   : required_number(body, "t_unix_s") - unix_offset_;
        if (target < now)
            throw RangeError("launch_at target is " + std::to_string(now - target)
                             + " s in the past");
        return enqueue_launch(req, from, now, target);
    }
    case Command::stir:
        allow_fields(body, {});
        backend_->stir();
        ++stats_.stirs;
        return ok_response(req.id, state_);
    case Command::shutdown:
        allow_fields(body, {});
        shutdown_ = true;
        return ok_response(req.id, state_);
    }
    throw FormatError("unhandled command");
}

double Controller::lead_time() const
{
    return state_.ramp_up.duration() + backend_->stroke_duration(state_.stroke_gain);
}

// Release time of a launch starting at `start`, given the launches already
// ahead of it. Starts snap to the next control pass.
double Controller::expected_release(double start) const
{
    const auto snap = [this](double t) {
        const double k = std::ceil((t - t0_) / tick_ - time_eps);
        return t0_ + std::max(0.0, k) * tick_;
    };
    const double lead = lead_time();
    double free_at = -std::numeric_limits<double>::infinity();
    if (active_)
        free_at = active_->stroke_at + backend_->stroke_duration(state_.stroke_gain) + tick_;
    for (const auto& p : pending_) {
        if (p.start > start)
            break;
        free_at = snap(std::max(p.start, free_at)) + lead + tick_;
    }
    return snap(std::max(start, free_at)) + lead;
}

nlohmann::json Controller::enqueue_launch(const Request& req, SessionId from, double now,
                                          std::optional<double> target)
{
    if (pending_launches() >= cfg_.max_pending_launches)
        throw RangeError("launch queue is full");
    Launch l;
    l.request_id = req.id;
    l.session = from;
    l.target = target;
    l.with_trajectory = optional_flag(req.body, "trajectory");
    bool best_effort = false;
    l.start = now;
    if (target) {
        const double ideal = *target - lead_time();
        if (ideal >= now)
            l.start = ideal;
        else
            best_effort = true;
    }
    const double release = expected_release(l.start);
    if (target && std::abs(release - *target) > 0.05)
        best_effort = true;

    const auto pos = std::upper_bound(pending_.begin(), pending_.end(), l.start,
                                      [](double s, const Launch& p) { return s < p.start; });
    pending_.insert(pos, l);
    ++stats_.launches_requested;

    auto r = ok_response(req.id, state_);
    r["launch"] = {{"start_s", l.start},
                   {"release_estimate_s", release},
                   {"delay_s", release - now},
                   {"best_effort", best_effort}};
    if (target)
        r["launch"]["target_s"] = *target;
    return r;
}

void Controller::advance(double now)
{
    // The counter moves first so a pass that throws is not repeated.
    while (tick_time(next_tick_) <= now + time_eps)
        run_tick(next_tick_++);
}

void Controller::start_launch(double t)
{
    active_ = pending_.front();
    pending_.pop_front();
    if (state_.ramp_up.is_continuous()) {
        active_->stroke_at = t;
    } else {
        backend_->start_ramp(t);
        active_->stroke_at = t + state_.ramp_up.duration();
    }
}

void Controller::run_tick(std::uint64_t k)
{
    const double t = tick_time(k);
    if (!active_ && !pending_.empty() && pending_.front().start <= t + time_eps)
        start_launch(t);
    bool stroke = false;
    if (active_ && !active_->stroking && active_->stroke_at <= t + time_eps) {
        active_->stroking = true;
        stroke = true;
    }

    for (const auto kind : backend_->feed_tick(t, stroke)) {
        Event e;
        e.t_monotonic_s = t;
        e.t_unix_s = t + unix_offset_;
        switch (kind) {
        case FeedEventKind::ball_released: {
            e.type = EventType::launched;
            SessionId to = all_sessions;
            if (active_) {
                e.request_id = active_->request_id;
                e.target_s = active_->target;
                to = active_->session;
            }
            if (const auto traj = backend_->last_trajectory()) {
                try {
                    const auto lp = lab::estimate_landing(*traj);
                    e.landing = EventLanding{lp.x, lp.y, lp.t_land, lp.valid};
                } catch (const Error&) {
                    // No rebound seen: the ball missed the table.
                }
                if (active_ && active_->with_trajectory)
                    e.trajectory = *traj;
            }
            ++stats_.launched;
            active_.reset();
            emit(to, e);
            if (cfg_.supervision == SupervisionMode::after_launch) {
                backend_->stir();
                ++stats_.stirs;
            }
            break;
        }
        case FeedEventKind::feed_starved: {
            e.type = EventType::feed_starved;
            SessionId to = all_sessions;
            if (active_) {
                e.request_id = active_->request_id;
                e.target_s = active_->target;
                to = active_->session;
            }
            ++stats_.feed_starved;
            active_.reset();
            emit(to, e);
            break;
        }
        case FeedEventKind::clog_resolved:
            e.type = EventType::clog_resolved;
            ++stats_.clogs_resolved;
            emit(all_sessions, e);
            break;
        }
    }

    if (k % ticks_per_supervision_ == 0)
        supervise();
}

void Controller::supervise()
{
    if (cfg_.supervision != SupervisionMode::sensor)
        return;
    if (backend_->read_sensor()) {
        empty_ticks_ = 0;
        return;
    }
    if (++empty_ticks_ >= cfg_.empty_ticks_before_stir) {
        backend_->stir();
        ++stats_.stirs;
        empty_ticks_ = 0;
    }
}

void Controller::emit(SessionId to, const Event& e)
{
    outbox_.push_back({to, event_frame(e)});
}

nlohmann::json Controller::snapshot(double now) const
{
    return {{"state", state_},
            {"t_monotonic_s", now},
            {"t_unix_s", now + unix_offset_},
            {"sensor_filled", backend_->read_sensor()},
            {"feed", backend_->diagnostics()},
            {"supervision", to_string(cfg_.supervision)},
            {"pending_launches", pending_launches()},
            {"launching", active_.has_value()},
            {"counters",
             {{"launches_requested", stats_.launches_requested},
              {"launched", stats_.launched},
              {"feed_starved", stats_.feed_starved},
              {"stirs", stats_.stirs},
              {"clogs_resolved", stats_.clogs_resolved}}}};
}

} // namespace launcher::net
