#include "launcher/sim/flight.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "launcher/error.hpp"

namespace launcher::sim {

namespace {

struct Body
{
    Vec3 p;
    Vec3 v;
};

class Dynamics
{
public:
    Dynamics(const SimConfig& cfg, const Vec3& omega_rev)
        : gravity_(0.0, 0.0, -cfg.gravity), omega_(2.0 * std::numbers::pi * omega_rev)
    {
        const double area = std::numbers::pi * cfg.ball_radius * cfg.ball_radius;
        drag_ = 0.5 * cfg.air_density * cfg.drag_coefficient * area / cfg.ball_mass;
        magnus_ = cfg.magnus_coefficient * cfg.air_density * area * cfg.ball_radius / cfg.ball_mass;
    }

    Vec3 acceleration(const Vec3& v) const
    {
        return gravity_ - drag_ * v.norm() * v + magnus_ * omega_.cross(v);
    }

    Body step(const Body& b, double h) const
    {
        const Vec3 k1p = b.v;
        const Vec3 k1v = acceleration(b.v);
        const Vec3 k2p = b.v + 0.5 * h * k1v;
        const Vec3 k2v = acceleration(k2p);
        const Vec3 k3p = b.v + 0.5 * h * k2v;
        const Vec3 k3v = acceleration(k3p);
        const Vec3 k4p = b.v + h * k3v;
        const Vec3 k4v = acceleration(k4p);
        return {b.p + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p),
                b.v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)};
    }

private:
    Vec3 gravity_;
    Vec3 omega_; // rad/s
    double drag_ = 0.0;
    double magnus_ = 0.0;
};

// Step size in (0, h] at which the body reaches the plane z = level.
double time_to_plane(const Dynamics& dyn, const Body& from, double h, double level)
{
    double lo = 0.0;
    double hi = h;
    for (int i = 0; i < 60 && hi - lo > 1e-13; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (dyn.step(from, mid).p.z() >= level)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

bool over_table(const Vec3& p, const SimConfig& cfg)
{
    return p.x() >= 0.0 && p.x() <= cfg.table_length && std::abs(p.y()) <= 0.5 * cfg.table_width;
}

} // namespace

Vec3 Flight::position_at(double t) const
{
    if (states.empty())
        throw IntegrationError("empty flight");
    if (t <= states.front().t)
        return states.front().position;
    if (t >= states.back().t)
        return states.back().position;
    auto hi = std::upper_bound(states.begin(), states.end(), t,
                               [](double x, const FlightState& s) { return x < s.t; });
    const auto& b = *hi;
    const auto& a = *std::prev(hi);
    const double h = b.t - a.t;
    const double s = (t - a.t) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * a.position + (s3 - 2 * s2 + s) * h * a.velocity_out
           + (-2 * s3 + 3 * s2) * b.position + (s3 - s2) * h * b.velocity_in;
}

Trajectory Flight::to_trajectory(std::string id, const LauncherState& control,
                                 double launcher_distance) const
{
    Trajectory out;
    out.id = std::move(id);
    out.control = control;
    out.launcher_distance_to_table = launcher_distance;
    out.samples.reserve(states.size());
    for (const auto& s : states)
        out.samples.push_back({s.t, s.position});
    return out;
}

Flight simulate_flight(const LaunchOutcome& outcome, const SimConfig& cfg)
{
    if (!outcome.v0.allFinite() || !outcome.omega0.allFinite()
        || !outcome.release_position.allFinite())
        throw IntegrationError("non-finite launch outcome");

    const Dynamics dyn(cfg, outcome.omega0);
    const double dt = cfg.integration_step;
    const double level = cfg.table_height;

    Flight flight;
    flight.omega = outcome.omega0;
    Body body{outcome.release_position, outcome.v0};
    double t = 0.0;
    flight.states.push_back({t, body.p, body.v, body.v});
    std::optional<double> contact_time;

    const auto steps = static_cast<long>(std::ceil(cfg.max_flight_time / dt));
    for (long k = 1; k <= steps; ++k) {
        Body next = dyn.step(body, dt);
        double t_next = t + dt;
        if (!next.p.allFinite() || !next.v.allFinite())
            throw IntegrationError("non-finite state at t = " + std::to_string(t_next));

        if (!flight.crossing && body.p.z() >= level && next.p.z() < level) {
            const double hc = time_to_plane(dyn, body, dt, level);
            Body at = dyn.step(body, hc);
            at.p.z() = level;
            PlaneCrossing c{t + hc, at.p, at.v, over_table(at.p, cfg)};
            flight.crossing = c;
            if (c.on_table) {
                const Vec3 v_out{cfg.restitution_xy * at.v.x(), cfg.restitution_xy * at.v.y(),
                                 -cfg.restitution_z * at.v.z()};
                flight.states.push_back({c.t, at.p, at.v, v_out});
                contact_time = c.t;
                const double rest = dt - hc;
                next = rest > 0.0 ? dyn.step(Body{at.p, v_out}, rest) : Body{at.p, v_out};
                if (rest <= 0.0) {
                    body = next;
                    t = t_next;
                    continue;
                }
            }
        }

        flight.states.push_back({t_next, next.p, next.v, next.v});
        body = next;
        t = t_next;

        if (contact_time && t >= *contact_time + cfg.post_contact_time)
            break;
        if (body.p.z() < 0.0 || std::abs(body.p.x()) > 10.0 || std::abs(body.p.y()) > 5.0)
            break;
    }
    return flight;
}

} // namespace launcher::sim
