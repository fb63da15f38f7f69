#pragma once

#include <random>

#include "launcher/launcher_state.hpp"
#include "launcher/sim/motor_curve.hpp"
#include "launcher/sim/sim_config.hpp"
#include "launcher/trajectory.hpp"

namespace launcher::sim {

inline constexpr double max_ball_speed = 15.4;  ///< m/s, all wheels fully actuated
inline constexpr double max_topspin = 192.0;    ///< rev/s, bottom 0 %, top wheels 100 %

using Rng = std::mt19937_64;

/// First-order settling of a wheel from standstill.
double wheel_speed_at(double t_since_start, double target_speed, double tau);
double wheel_speed_at(double t_since_start, double target_speed, double tau, const RampUp& mode);

struct LaunchOutcome
{
    Vec3 v0 = Vec3::Zero();               ///< m/s
    Vec3 omega0 = Vec3::Zero();           ///< rev/s
    Vec3 release_position = Vec3::Zero(); ///< m
    double launch_delay = 0.0;            ///< s from motor start to ball engagement
};

/// Orthonormal frame of the launch tube: axis along the flight direction,
/// up in the vertical plane through the axis, right = axis x up.
struct LaunchFrame
{
    Vec3 axis;
    Vec3 up;
    Vec3 right;
};

LaunchFrame launch_frame(double azimuth_deg, double altitude_deg);

/// Contact normal of a wheel in the tube cross-section: bottom 270 deg,
/// top-left 150 deg, top-right 30 deg, measured from `right` towards `up`.
Vec3 wheel_normal(const LaunchFrame& frame, WheelPosition p);

struct Calibration
{
    double speed_gain = 0.0; ///< c_v
    double spin_gain = 0.0;  ///< c_omega
};

/// Fits c_v and c_omega on the reference motor set so that the fully
/// actuated launch leaves at 15.4 m/s and the maximum differential
/// configuration spins at 192 rev/s. CalibrationError on degenerate curves.
Calibration calibrate(const SimConfig& cfg, const MotorSet& reference);
Calibration calibrate(const SimConfig& cfg);

/// Multiplier of the actuation noise; minimal at 37.0 mm pinching diameter.
double pinch_noise_factor(double pinch_diameter_mm);

/// Deterministic launch. `t_feed` is the time from motor start to ball
/// engagement (ignored for continuous ramp-up). cfg must be calibrated.
LaunchOutcome compute_launch(const LauncherState& state, const SimConfig& cfg, double t_feed);

/// As above with actuation noise and a jittered settling constant.
LaunchOutcome compute_launch(const LauncherState& state, const SimConfig& cfg, double t_feed,
                             Rng& rng);

} // namespace launcher::sim
