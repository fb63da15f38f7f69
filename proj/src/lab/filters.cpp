#include "launcher/lab/filters.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "launcher/error.hpp"

namespace launcher::lab {

namespace {

// Indices of the k samples closest in time to sample i, excluding i.
// Ties go to the earlier sample.
std::vector<std::size_t> nearest_in_time(const std::vector<BallSample>& s, std::size_t i,
                                         std::size_t k)
{
    std::vector<std::size_t> out;
    out.reserve(k);
    std::ptrdiff_t left = static_cast<std::ptrdiff_t>(i) - 1;
    std::size_t right = i + 1;
    while (out.size() < k && (left >= 0 || right < s.size())) {
        const bool take_left =
            left >= 0
            && (right >= s.size() || s[i].t - s[static_cast<std::size_t>(left)].t <= s[right].t - s[i].t);
        if (take_left)
            out.push_back(static_cast<std::size_t>(left--));
        else
            out.push_back(right++);
    }
    return out;
}

// Distance of sample i from the quadratic-in-time fit through `nb`,
// evaluated at the time of sample i.
double fit_deviation(const std::vector<BallSample>& s, std::size_t i, const std::vector<std::size_t>& nb)
{
    // Time centred on sample i and scaled for conditioning.
    constexpr double scale = 0.05;
    Eigen::MatrixXd a(nb.size(), 3);
    Eigen::MatrixXd rhs(nb.size(), 3);
    for (std::size_t r = 0; r < nb.size(); ++r) {
        const double tau = (s[nb[r]].t - s[i].t) / scale;
        a(r, 0) = 1.0;
        a(r, 1) = tau;
        a(r, 2) = tau * tau;
        rhs.row(r) = s[nb[r]].position.transpose();
    }
    const Eigen::MatrixXd coeff = a.colPivHouseholderQr().solve(rhs);
    const Vec3 predicted = coeff.row(0).transpose();
    return (s[i].position - predicted).norm();
}

// One-sided fits need enough support to extrapolate a single step.
constexpr std::size_t min_one_sided = 8;

// Smallest deviation of sample i from the fit through its 15 nearest-in-time
// neighbours and from the one-sided fits through up to 15 samples before
// and after it. At the table contact the velocity has a kink that no single
// parabola follows; the fit from the side the sample belongs to still does,
// while an outlier is far from all three.
double neighbourhood_deviation(const std::vector<BallSample>& s, std::size_t i)
{
    const auto k = static_cast<std::size_t>(position_jump_neighbours);
    double dev = fit_deviation(s, i, nearest_in_time(s, i, k));

    std::vector<std::size_t> before, after;
    for (std::size_t j = i; j > 0 && before.size() < k; --j)
        before.push_back(j - 1);
    for (std::size_t j = i + 1; j < s.size() && after.size() < k; ++j)
        after.push_back(j);
    if (before.size() >= min_one_sided)
        dev = std::min(dev, fit_deviation(s, i, before));
    if (after.size() >= min_one_sided)
        dev = std::min(dev, fit_deviation(s, i, after));
    return dev;
}

} // namespace

bool filter_time_jump(const Trajectory& traj)
{
    const auto& s = traj.samples;
    for (std::size_t i = 1; i < s.size(); ++i)
        if (s[i].t - s[i - 1].t > max_time_gap)
            return false;
    return true;
}

std::vector<double> position_deviations(const Trajectory& traj)
{
    const auto& s = traj.samples;
    std::vector<double> dev(s.size(), 0.0);
    if (s.size() < static_cast<std::size_t>(position_jump_neighbours) + 1)
        return dev;
    for (std::size_t i = 0; i < s.size(); ++i)
        dev[i] = neighbourhood_deviation(s, i);
    return dev;
}

PositionJumpResult filter_position_jump(const Trajectory& traj)
{
    PositionJumpResult out;
    out.trajectory = traj;
    if (traj.samples.size() < static_cast<std::size_t>(position_jump_neighbours) + 1) {
        out.too_short = true;
        return out;
    }
    const auto dev = position_deviations(traj);
    out.trajectory.samples.clear();
    for (std::size_t i = 0; i < dev.size(); ++i) {
        if (dev[i] > max_position_jump)
            out.removed.push_back(i);
        else
            out.trajectory.samples.push_back(traj.samples[i]);
    }
    return out;
}

Trajectory filter_region(const Trajectory& traj, const TableRegion& region)
{
    Trajectory out = traj;
    out.samples.clear();
    for (const auto& s : traj.samples)
        if (region.in_relaxed(s.position.x(), s.position.y()))
            out.samples.push_back(s);
    return out;
}

ReboundResult filter_rebound(const Trajectory& traj, bool keep_misses, const TableRegion& region,
                             int window)
{
    ReboundResult r;
    try {
        r.landing = estimate_landing(traj, window, region);
        r.verdict = r.landing.valid && region.on_table(r.landing.x, r.landing.y)
                        ? ReboundVerdict::on_table
                        : ReboundVerdict::off_table;
    } catch (const NoReboundError&) {
        r.verdict = ReboundVerdict::no_rebound;
    }
    r.keep = r.verdict == ReboundVerdict::on_table || keep_misses;
    return r;
}

Preprocessed preprocess(const Trajectory& traj, const PipelineOptions& options)
{
    Preprocessed p;
    if (!filter_time_jump(traj)) {
        p.trajectory = traj;
        p.dropped_by = "time_jump";
        return p;
    }
    PositionJumpResult pj = filter_position_jump(traj);
    p.too_short = pj.too_short;
    p.outliers_removed = pj.removed.size();
    p.trajectory = filter_region(pj.trajectory, options.region);
    p.samples_removed = traj.samples.size() - p.trajectory.samples.size();
    p.rebound = filter_rebound(p.trajectory, options.keep_misses, options.region, options.window);
    p.kept = p.rebound.keep;
    if (!p.kept)
        p.dropped_by = "rebound";
    return p;
}

void FilterReport::add(const Preprocessed& p)
{
    ++total;
    if (p.kept)
        ++kept;
    if (!p.modified())
        return;
    std::ostringstream line;
    line << p.trajectory.id << ": ";
    if (!p.kept)
        line << "dropped by " << p.dropped_by;
    else
        line << "kept";
    if (p.outliers_removed > 0)
        line << ", " << p.outliers_removed << " position jumps removed";
    if (p.samples_removed > p.outliers_removed)
        line << ", " << (p.samples_removed - p.outliers_removed) << " samples outside region";
    if (p.too_short)
        line << ", too short for the position-jump filter";
    lines.push_back(line.str());
}

} // namespace launcher::lab
