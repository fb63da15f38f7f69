#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Geometry>

#include "launcher/trajectory.hpp"

namespace launcher::lab {

/// Tracking-system sample: nanosecond timestamp, position in camera frame.
struct RawSample
{
    std::int64_t t_ns = 0;
    Vec3 position = Vec3::Zero();
};

/// Rigid pose of the camera frame in the table frame: p_table = R p + t.
struct CalibrationPose
{
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Vec3 translation = Vec3::Zero();

    static CalibrationPose identity() { return {}; }
};

std::vector<BallSample> transform_to_table_frame(std::span<const RawSample> raw,
                                                 const CalibrationPose& pose);

} // namespace launcher::lab
