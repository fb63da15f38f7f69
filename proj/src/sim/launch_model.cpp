#include "launcher/sim/launch_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "launcher/error.hpp"

namespace launcher::sim {

namespace {

constexpr double deg = std::numbers::pi / 180.0;

struct WheelSpeeds
{
    std::array<double, 3> surface{}; // m/s, indexed by WheelPosition
};

std::array<double, 3> actuations(const WheelActuation& w)
{
    return {w.bottom, w.top_left, w.top_right};
}

// Commanded turning speeds on the set's reference curve.
std::array<double, 3> commanded_rpm(const MotorSet& motors, const std::array<double, 3>& act)
{
    const MotorCurve ref = motors.reference_curve();
    return {interpolate_motor_speed(ref, act[0]), interpolate_motor_speed(ref, act[1]),
            interpolate_motor_speed(ref, act[2])};
}

WheelSpeeds surface_speeds(const MotorSet& motors, const std::array<double, 3>& rpm_target,
                           double wheel_radius, double t_feed, double tau, const RampUp& mode)
{
    WheelSpeeds out;
    for (int i = 0; i < 3; ++i) {
        const double rpm = wheel_speed_at(t_feed, rpm_target[i], tau, mode);
        out.surface[i] = motors.load_efficiency * 2.0 * std::numbers::pi * wheel_radius * rpm / 60.0;
    }
    return out;
}

// Velocity and spin from the wheel surface speeds, before the gains.
void compose(const WheelSpeeds& w, const LaunchFrame& frame, double ball_radius, double& mean,
             Vec3& spin_dir)
{
    // Written relative to the first wheel so equal speeds give exactly zero spin.
    const double base = w.surface[0];
    mean = base + ((w.surface[1] - base) + (w.surface[2] - base)) / 3.0;
    spin_dir.setZero();
    for (int i = 0; i < 3; ++i) {
        const Vec3 n = wheel_normal(frame, static_cast<WheelPosition>(i));
        spin_dir += (w.surface[i] - mean) * n.cross(frame.axis);
    }
    spin_dir /= ball_radius;
}

LaunchOutcome assemble(const LauncherState& state, const SimConfig& cfg, const WheelSpeeds& w,
                       double t_feed)
{
    if (cfg.calib_speed <= 0.0 || cfg.calib_spin <= 0.0)
        throw CalibrationError("compute_launch needs a calibrated SimConfig");
    const LaunchFrame frame = launch_frame(state.azimuth_deg, state.altitude_deg);
    double mean = 0.0;
    Vec3 spin = Vec3::Zero();
    compose(w, frame, cfg.ball_radius, mean, spin);

    LaunchOutcome out;
    out.v0 = cfg.calib_speed * mean * frame.axis;
    out.omega0 = cfg.calib_spin * spin;
    const Vec3 pivot{-cfg.launcher_distance, 0.0, cfg.table_height + cfg.pivot_height};
    out.release_position = pivot + cfg.tube_length * frame.axis;
    out.launch_delay = t_feed;
    return out;
}

} // namespace

double wheel_speed_at(double t_since_start, double target_speed, double tau)
{
    if (!(tau > 0.0))
        throw RangeError("settling time constant must be positive");
    if (std::isinf(t_since_start))
        return target_speed;
    if (t_since_start <= 0.0)
        return 0.0;
    return target_speed * (1.0 - std::exp(-t_since_start / tau));
}

double wheel_speed_at(double t_since_start, double target_speed, double tau, const RampUp& mode)
{
    if (mode.is_continuous())
        return target_speed;
    return wheel_speed_at(t_since_start, target_speed, tau);
}

LaunchFrame launch_frame(double azimuth_deg, double altitude_deg)
{
    const double az = azimuth_deg * deg;
    const double alt = altitude_deg * deg;
    LaunchFrame f;
    f.axis = Vec3{std::cos(alt) * std::cos(az), std::cos(alt) * std::sin(az), std::sin(alt)};
    f.up = Vec3{-std::sin(alt) * std::cos(az), -std::sin(alt) * std::sin(az), std::cos(alt)};
    f.right = f.axis.cross(f.up);
    return f;
}

Vec3 wheel_normal(const LaunchFrame& frame, WheelPosition p)
{
    double angle = 0.0;
    switch (p) {
    case WheelPosition::bottom:
        angle = 270.0;
        break;
    case WheelPosition::top_left:
        angle = 150.0;
        break;
    case WheelPosition::top_right:
        angle = 30.0;
        break;
    }
    return std::cos(angle * deg) * frame.right + std::sin(angle * deg) * frame.up;
}

Calibration calibrate(const SimConfig& cfg, const MotorSet& reference)
{
    const LaunchFrame frame = launch_frame(0.0, 0.0);
    const RampUp steady = RampUp::continuous();

    double mean = 0.0;
    Vec3 spin = Vec3::Zero();
    compose(surface_speeds(reference, commanded_rpm(reference, {100.0, 100.0, 100.0}),
                           cfg.wheel_radius, 0.0, cfg.settle_time_constant, steady),
            frame, cfg.ball_radius, mean, spin);
    if (!(mean > 0.0))
        throw CalibrationError("reference motor curves give zero surface speed");
    Calibration c;
    c.speed_gain = max_ball_speed / mean;

    compose(surface_speeds(reference, commanded_rpm(reference, {0.0, 100.0, 100.0}),
                           cfg.wheel_radius, 0.0, cfg.settle_time_constant, steady),
            frame, cfg.ball_radius, mean, spin);
    if (!(spin.norm() > 0.0))
        throw CalibrationError("reference motor curves give no spin differential");
    c.spin_gain = max_topspin / spin.norm();
    return c;
}

Calibration calibrate(const SimConfig& cfg)
{
    return calibrate(cfg, mn5008_motor_set());
}

double pinch_noise_factor(double pinch_diameter_mm)
{
    const double d = pinch_diameter_mm - 37.0;
    return 1.0 + 0.17 * d * d;
}

LaunchOutcome compute_launch(const LauncherState& state, const SimConfig& cfg, double t_feed)
{
    if (!state.ramp_up.is_continuous() && !(t_feed > 0.0))
        throw RangeError("t_feed must be positive");
    const MotorSet motors = motor_set_by_name(cfg.motor_set);
    const auto w = surface_speeds(motors, commanded_rpm(motors, actuations(state.wheels)),
                                  cfg.wheel_radius, t_feed, cfg.settle_time_constant,
                                  state.ramp_up);
    return assemble(state, cfg, w, t_feed);
}

LaunchOutcome compute_launch(const LauncherState& state, const SimConfig& cfg, double t_feed,
                             Rng& rng)
{
    if (!state.ramp_up.is_continuous() && !(t_feed > 0.0))
        throw RangeError("t_feed must be positive");
    const MotorSet motors = motor_set_by_name(cfg.motor_set);
    const auto target = commanded_rpm(motors, actuations(state.wheels));
    const double sd = cfg.actuation_noise_sd * pinch_noise_factor(state.pinch_diameter_mm);
    std::normal_distribution<double> unit(0.0, 1.0);
    std::array<double, 3> rpm{};
    for (int i = 0; i < 3; ++i) {
        const double noise = unit(rng) * sd;
        // Noise enters on each motor's own actuation; idle wheels stay idle.
        if (target[i] > 0.0) {
            const double a = actuation_for_speed(motors.curves[i], target[i]) + noise;
            rpm[i] = interpolate_motor_speed(motors.curves[i], std::clamp(a, 0.0, 100.0));
        }
    }
    const double tau =
        cfg.settle_time_constant * std::max(0.2, 1.0 + cfg.settle_tau_jitter * unit(rng));
    const auto w = surface_speeds(motors, rpm, cfg.wheel_radius, t_feed, tau, state.ramp_up);
    return assemble(state, cfg, w, t_feed);
}

} // namespace launcher::sim
