#include "launcher/lab/landing.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "launcher/error.hpp"

namespace launcher::lab {

namespace {

struct Line
{
    double intercept = 0.0; // at t = 0
    double slope = 0.0;
    double sse = 0.0; // sum of squared residuals
};

// Least-squares z(t) over samples [first, first + count).
Line fit_height(const std::vector<BallSample>& s, std::size_t first, std::size_t count)
{
    double t_mean = 0.0;
    double z_mean = 0.0;
    for (std::size_t i = first; i < first + count; ++i) {
        t_mean += s[i].t;
        z_mean += s[i].position.z();
    }
    t_mean /= count;
    z_mean /= count;
    double stt = 0.0;
    double stz = 0.0;
    for (std::size_t i = first; i < first + count; ++i) {
        const double dt = s[i].t - t_mean;
        stt += dt * dt;
        stz += dt * (s[i].position.z() - z_mean);
    }
    Line l;
    l.slope = stz / stt;
    l.intercept = z_mean - l.slope * t_mean;
    for (std::size_t i = first; i < first + count; ++i) {
        const double r = s[i].position.z() - (l.intercept + l.slope * s[i].t);
        l.sse += r * r;
    }
    return l;
}

} // namespace

LandingPoint estimate_landing(const Trajectory& traj, int window, const TableRegion& region)
{
    if (window < 2)
        throw RangeError("landing fit window must be at least 2 samples");
    const auto& s = traj.samples;
    const auto w = static_cast<std::size_t>(window);
    if (s.size() < 2 * w)
        throw NoReboundError("trajectory " + traj.id + " too short for a rebound");

    // The lowest sample may lie on either side of the contact, so both
    // splits around it are fitted and the one with the smaller residual wins.
    std::optional<std::size_t> rebound;
    Line before, after;
    for (std::size_t i = w - 1; i + w < s.size() && !rebound; ++i) {
        const double z = s[i].position.z();
        bool lowest = true;
        for (std::size_t j = i + 1 - w; j <= i + w && lowest; ++j)
            lowest = j == i || s[j].position.z() >= z;
        if (!lowest)
            continue;
        before = fit_height(s, i + 1 - w, w);
        after = fit_height(s, i + 1, w);
        if (i >= w) {
            const Line b2 = fit_height(s, i - w, w);
            const Line a2 = fit_height(s, i, w);
            if (b2.sse + a2.sse < before.sse + after.sse) {
                before = b2;
                after = a2;
            }
        }
        if (before.slope < -min_rebound_speed && after.slope > min_rebound_speed)
            rebound = i;
    }
    if (!rebound)
        throw NoReboundError("trajectory " + traj.id + " has no rebound");
    const std::size_t lowest = *rebound;

    LandingPoint lp;
    const double slope_gap = before.slope - after.slope;
    if (std::abs(slope_gap) < 1e-6)
        return lp;
    lp.t_land = (after.intercept - before.intercept) / slope_gap;

    const double t_lo = s[lowest - (lowest > 0 ? 1 : 0)].t;
    const double t_hi = s[lowest + 1].t;
    if (!(lp.t_land >= t_lo && lp.t_land <= t_hi))
        return lp;

    std::size_t k = lowest > 0 ? lowest - 1 : 0;
    while (k + 1 < s.size() && s[k + 1].t < lp.t_land)
        ++k;
    const auto& a = s[k];
    const auto& b = s[k + 1];
    const double f = (lp.t_land - a.t) / (b.t - a.t);
    lp.x = a.position.x() + f * (b.position.x() - a.position.x());
    lp.y = a.position.y() + f * (b.position.y() - a.position.y());
    lp.valid = region.in_relaxed(lp.x, lp.y);
    return lp;
}

} // namespace launcher::lab
