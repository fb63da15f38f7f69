#include "launcher/lab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "launcher/error.hpp"

namespace launcher::lab {

namespace {

struct Moments
{
    std::size_t n = 0;
    double mean_x = 0.0, mean_y = 0.0, sigma_x = 0.0, sigma_y = 0.0;
};

template <typename Pick>
Moments moments(std::size_t count, Pick pick)
{
    Moments m;
    m.n = count;
    for (std::size_t i = 0; i < count; ++i) {
        m.mean_x += pick(i).x;
        m.mean_y += pick(i).y;
    }
    m.mean_x /= static_cast<double>(count);
    m.mean_y /= static_cast<double>(count);
    double sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        sxx += (pick(i).x - m.mean_x) * (pick(i).x - m.mean_x);
        syy += (pick(i).y - m.mean_y) * (pick(i).y - m.mean_y);
    }
    m.sigma_x = std::sqrt(sxx / static_cast<double>(count));
    m.sigma_y = std::sqrt(syy / static_cast<double>(count));
    return m;
}

std::vector<LandingPoint> valid_only(std::span<const LandingPoint> landings)
{
    std::vector<LandingPoint> v;
    for (const auto& l : landings)
        if (l.valid)
            v.push_back(l);
    return v;
}

double resampled_sigma_avg(const std::vector<LandingPoint>& pts, std::mt19937_64& rng)
{
    std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
    std::vector<std::size_t> idx(pts.size());
    for (auto& i : idx)
        i = pick(rng);
    const Moments m = moments(idx.size(), [&](std::size_t i) -> const LandingPoint& { return pts[idx[i]]; });
    return 0.5 * (m.sigma_x + m.sigma_y);
}

} // namespace

AccuracyStats stats_from_sigmas(double sigma_x, double sigma_y, std::size_t n)
{
    AccuracyStats s;
    s.n = n;
    s.sigma_x = sigma_x;
    s.sigma_y = sigma_y;
    s.sigma_norm = std::hypot(sigma_x, sigma_y);
    s.area_sigma = std::numbers::pi * sigma_x * sigma_y;
    return s;
}

AccuracyStats compute_stats(std::span<const LandingPoint> landings)
{
    const auto pts = valid_only(landings);
    if (pts.size() < 2)
        throw RangeError("accuracy statistics need at least two valid landings, got "
                         + std::to_string(pts.size()));
    const Moments m = moments(pts.size(), [&](std::size_t i) -> const LandingPoint& { return pts[i]; });
    AccuracyStats s = stats_from_sigmas(m.sigma_x, m.sigma_y, m.n);
    s.mean_x = m.mean_x;
    s.mean_y = m.mean_y;
    return s;
}

Interval bootstrap_sigma_avg_difference(std::span<const LandingPoint> a,
                                        std::span<const LandingPoint> b, double confidence,
                                        int resamples, std::uint64_t seed)
{
    const auto pa = valid_only(a);
    const auto pb = valid_only(b);
    if (pa.size() < 2 || pb.size() < 2)
        throw RangeError("bootstrap needs at least two valid landings per series");
    if (!(confidence > 0.0 && confidence < 1.0) || resamples < 1)
        throw RangeError("bootstrap confidence must lie in (0, 1) with at least one resample");
    std::mt19937_64 rng(seed);
    std::vector<double> diffs(static_cast<std::size_t>(resamples));
    for (auto& d : diffs)
        d = resampled_sigma_avg(pa, rng) - resampled_sigma_avg(pb, rng);
    std::sort(diffs.begin(), diffs.end());
    const double tail = 0.5 * (1.0 - confidence);
    const auto at = [&](double q) {
        const double pos = q * static_cast<double>(diffs.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const auto hi = std::min(lo + 1, diffs.size() - 1);
        return diffs[lo] + (pos - static_cast<double>(lo)) * (diffs[hi] - diffs[lo]);
    };
    return {at(tail), at(1.0 - tail)};
}

} // namespace launcher::lab
