#include "launcher/shooting/target_shooting.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "launcher/error.hpp"
#include "launcher/lab/landing.hpp"
#include "launcher/lab/trajectory_io.hpp"

namespace launcher::shooting {

namespace {

constexpr double grid_x_min = 1.57;
constexpr double grid_x_max = 2.60;
constexpr double grid_y_half = 0.55;

struct PlanePoint
{
    double x = 0.0;
    double y = 0.0;
    bool reached = false;
};

PlanePoint plane_crossing(const Trajectory& t, double height)
{
    for (std::size_t i = 1; i < t.samples.size(); ++i) {
        const Vec3& a = t.samples[i - 1].position;
        const Vec3& b = t.samples[i].position;
        if (a.z() >= height && b.z() < height) {
            const double f = (a.z() - height) / (a.z() - b.z());
            return {a.x() + f * (b.x() - a.x()), a.y() + f * (b.y() - a.y()), true};
        }
    }
    if (t.samples.empty())
        return {};
    const auto low = std::min_element(t.samples.begin(), t.samples.end(),
                                      [](const BallSample& p, const BallSample& q) {
                                          return p.position.z() < q.position.z();
                                      });
    return {low->position.x(), low->position.y(), false};
}

} // namespace

TrainingSet build_training_set(std::span<const Trajectory> trajectories, bool equal_wheels_only,
                               const lab::TableRegion& region)
{
    std::vector<std::pair<const Trajectory*, double>> used;
    Eigen::Index rows = 0;
    for (const auto& t : trajectories) {
        if (equal_wheels_only && !t.control.wheels.equal())
            continue;
        double t_land = 0.0;
        try {
            const auto lp = lab::estimate_landing(t, lab::default_fit_window, region);
            if (!lp.valid)
                continue;
            t_land = lp.t_land;
        } catch (const NoReboundError&) {
            continue;
        }
        used.push_back({&t, t_land});
        rows += std::count_if(t.samples.begin(), t.samples.end(),
                              [&](const BallSample& s) { return s.t < t_land; });
    }
    if (rows == 0)
        throw TrainingError("no pre-rebound samples in the given trajectories");

    TrainingSet set{Eigen::MatrixXd(rows, 3), Eigen::MatrixXd(rows, 3)};
    Eigen::Index r = 0;
    for (const auto& [t, t_land] : used) {
        const Eigen::RowVector3d control(t->control.azimuth_deg, t->control.altitude_deg,
                                         t->control.wheels.bottom);
        for (const auto& s : t->samples) {
            if (s.t >= t_land)
                break;
            set.inputs.row(r) = s.position.transpose();
            set.targets.row(r) = control;
            ++r;
        }
    }
    return set;
}

LauncherState predict_control(const Mlp& model, const Vec3& target, LauncherState base)
{
    const Eigen::MatrixXd out = model.predict(target.transpose());
    if (!out.allFinite())
        throw TrainingError("model produced a non-finite control");
    base.azimuth_deg = std::clamp(out(0, 0), limits::azimuth_min_deg, limits::azimuth_max_deg);
    base.altitude_deg = std::clamp(out(0, 1), limits::altitude_min_deg, limits::altitude_max_deg);
    const double w = std::clamp(out(0, 2), limits::actuation_min, limits::actuation_max);
    base.wheels = {w, w, w};
    base.validate();
    return base;
}

std::vector<Vec3> target_grid(int count, double table_height)
{
    if (count == 1)
        return {Vec3(0.5 * (grid_x_min + grid_x_max), 0.0, table_height)};
    if (count != 20)
        throw RangeError("target grid must have 1 or 20 points");
    std::vector<Vec3> grid;
    constexpr int nx = 5, ny = 4;
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            grid.emplace_back(grid_x_min + (grid_x_max - grid_x_min) * i / (nx - 1),
                              -grid_y_half + 2.0 * grid_y_half * j / (ny - 1), table_height);
    return grid;
}

GridReport evaluate_grid(const Mlp& model, lab::LaunchSource& source,
                         const std::vector<Vec3>& targets, const LauncherState& base,
                         const lab::TableRegion& region)
{
    if (targets.empty())
        throw RangeError("no targets to evaluate");
    GridReport report;
    for (const auto& target : targets) {
        GridResult r;
        r.target = target;
        r.control = predict_control(model, target, base);
        source.set_state(r.control);
        const Trajectory t = source.launch();
        bool found = false;
        try {
            const auto lp = lab::estimate_landing(t, lab::default_fit_window, region);
            if (lp.valid) {
                r.landing_x = lp.x;
                r.landing_y = lp.y;
                r.landed = found = true;
            }
        } catch (const NoReboundError&) {
        }
        if (!found) {
            const PlanePoint p = plane_crossing(t, target.z());
            r.landing_x = p.x;
            r.landing_y = p.y;
            r.landed = p.reached;
        }
        r.error = std::hypot(r.landing_x - target.x(), r.landing_y - target.y());
        report.results.push_back(r);
    }
    double sum = 0.0;
    for (const auto& r : report.results)
        sum += r.error;
    report.mean_error = sum / static_cast<double>(report.results.size());
    return report;
}

void write_grid_csv(std::ostream& out, const GridReport& report)
{
    using lab::format_number;
    out << "target_x,target_y,azimuth_deg,altitude_deg,wheels,landing_x,landing_y,landed,error\n";
    for (const auto& r : report.results)
        out << format_number(r.target.x()) << ',' << format_number(r.target.y()) << ','
            << format_number(r.control.azimuth_deg) << ',' << format_number(r.control.altitude_deg)
            << ',' << format_number(r.control.wheels.bottom) << ',' << format_number(r.landing_x)
            << ',' << format_number(r.landing_y) << ',' << (r.landed ? 1 : 0) << ','
            << format_number(r.error) << '\n';
}

} // namespace launcher::shooting
