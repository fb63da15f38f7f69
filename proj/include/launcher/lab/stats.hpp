#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "launcher/lab/landing.hpp"

namespace launcher::lab {

/// Landing scatter of one measurement series. Standard deviations are
/// population deviations (divide by n).
struct AccuracyStats
{
    std::size_t n = 0;
    double mean_x = 0.0;
    double mean_y = 0.0;
    double sigma_x = 0.0;
    double sigma_y = 0.0;
    double sigma_norm = 0.0; ///< sqrt(sigma_x^2 + sigma_y^2)
    double area_sigma = 0.0; ///< pi * sigma_x * sigma_y

    /// (sigma_x + sigma_y) / 2, the per-series average plotted against the
    /// swept system parameter.
    double sigma_avg() const noexcept { return 0.5 * (sigma_x + sigma_y); }
};

/// Uses valid landings only; RangeError when fewer than two remain.
AccuracyStats compute_stats(std::span<const LandingPoint> landings);

/// Norm and area from per-axis deviations.
AccuracyStats stats_from_sigmas(double sigma_x, double sigma_y, std::size_t n = 0);

struct Interval
{
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double v) const noexcept { return lo <= v && v <= hi; }
};

/// Percentile bootstrap interval of sigma_avg(a) - sigma_avg(b).
Interval bootstrap_sigma_avg_difference(std::span<const LandingPoint> a,
                                        std::span<const LandingPoint> b, double confidence,
                                        int resamples, std::uint64_t seed);

} // namespace launcher::lab
