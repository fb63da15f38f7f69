#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "launcher/lab/experiment.hpp"
#include "launcher/lab/table.hpp"
#include "launcher/shooting/mlp.hpp"

namespace launcher::shooting {

/// Inputs are ball positions (x, y, z) in metres, targets the controls
/// (azimuth deg, altitude deg, wheel actuation percent) that produced them.
struct TrainingSet
{
    Eigen::MatrixXd inputs;
    Eigen::MatrixXd targets;

    Eigen::Index size() const noexcept { return inputs.rows(); }
};

/// One row per sample before the rebound of each trajectory with a
/// detectable table landing; trajectories without one contribute nothing.
/// With `equal_wheels_only`, trajectories with differing wheel actuations
/// are skipped. TrainingError when no rows remain.
TrainingSet build_training_set(std::span<const Trajectory> trajectories, bool equal_wheels_only,
                               const lab::TableRegion& region = {});

/// Network output for a target position, clamped to the actuator ranges and
/// applied on top of `base` (equal wheels).
LauncherState predict_control(const Mlp& model, const Vec3& target, LauncherState base = {});

/// Targets on the table plane over the far half: x in [1.57, 2.60],
/// y in [-0.55, 0.55]. 20 gives a 5 x 4 grid, 1 the grid centre.
std::vector<Vec3> target_grid(int count, double table_height);

struct GridResult
{
    Vec3 target = Vec3::Zero();
    LauncherState control;
    double landing_x = 0.0;
    double landing_y = 0.0;
    bool landed = false; ///< false when the ball never reached the table plane
    double error = 0.0;  ///< m, on the table plane
};

struct GridReport
{
    std::vector<GridResult> results;
    double mean_error = 0.0;
};

/// Fires one ball per target and measures where it lands: the rebound
/// estimate when there is one, otherwise the descending crossing of the
/// table plane interpolated from the samples. A ball that never reaches the
/// plane counts with the distance from the target to its lowest sample.
GridReport evaluate_grid(const Mlp& model, lab::LaunchSource& source,
                         const std::vector<Vec3>& targets, const LauncherState& base = {},
                         const lab::TableRegion& region = {});

/// CSV `target_x,target_y,azimuth_deg,altitude_deg,wheels,landing_x,landing_y,landed,error`.
void write_grid_csv(std::ostream& out, const GridReport& report);

} // namespace launcher::shooting
