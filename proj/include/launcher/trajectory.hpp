#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "launcher/launcher_state.hpp"

namespace launcher {

using Vec3 = Eigen::Vector3d;

/// x along the long table edge, y along the short edge, z up. The origin
/// sits on the floor below the centre of the table front edge, so the
/// playing surface is the plane z = table height.
struct BallSample
{
    double t = 0.0;
    Vec3 position = Vec3::Zero();
};

struct Trajectory
{
    std::string id;
    std::vector<BallSample> samples;
    LauncherState control;
    double launcher_distance_to_table = 0.0;

    /// Samples strictly increasing in t and finite.
    bool well_formed() const noexcept;
};

} // namespace launcher
