#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "launcher/trajectory.hpp"

namespace launcher::sim {

/// Ball-tracking error model. A camera session draws one relative scale
/// error per axis (sd = per_meter, applied as e_axis * |p|); every sample
/// additionally gets white jitter.
struct CameraNoise
{
    Vec3 per_meter{0.024, 0.011, 0.001};
    double jitter_sd = 0.0015;       ///< m, per axis and sample
    double min_interval = 0.0045;    ///< s
    double mode_interval = 0.0055;   ///< s
    double max_interval = 0.0065;    ///< s
    double outlier_rate = 0.0;       ///< probability per sample
    double outlier_min = 0.10;       ///< m
    double outlier_max = 0.30;       ///< m
};

struct FeedParams
{
    double tick = 0.010;            ///< s, one control pass
    double full_stroke_deg = 180.0;
    double k_deg = 180.0 / (0.1 * 420.5);   ///< stroke advance per tick and unit gain
    double max_step_deg = 180.0 / 61.5;     ///< servo slew limit per tick
    int channel_capacity = 5;
    int sensor_level = 3;           ///< sensor reports filled at this queue length
    double refill_interval = 0.15;  ///< s per ball while the reservoir flows
    double clog_probability = 0.02; ///< per launch
    double stir_duration = 0.30;    ///< s per attempt
    double stir_success = 0.7;      ///< per attempt; the third attempt always succeeds
};

struct SimConfig
{
    std::string motor_set = "MN5008";
    double wheel_radius = 0.025;    ///< m
    double ball_radius = 0.020;     ///< m
    double ball_mass = 0.0027;      ///< kg
    double air_density = 1.204;     ///< kg/m^3
    double drag_coefficient = 0.40;
    double magnus_coefficient = 1.0;
    double restitution_z = 0.87;
    double restitution_xy = 0.75;
    double gravity = 9.81;

    double calib_speed = 0.0;       ///< c_v; 0 means "calibrate on use"
    double calib_spin = 0.0;        ///< c_omega; 0 means "calibrate on use"

    double settle_time_constant = 0.3;   ///< s
    double settle_tau_jitter = 0.06;     ///< relative sd of the per-launch settling constant
    double feed_timing_jitter = 0.005;   ///< s
    double actuation_noise_sd = 0.05;    ///< percent
    double orientation_repeatability_deg = 0.01;

    double table_length = 2.74;
    double table_width = 1.525;
    double table_height = 0.76;
    double launcher_distance = 0.8;      ///< m before the table front edge
    double pivot_height = 0.20;          ///< m above the table plane
    double tube_length = 0.12;           ///< m

    double integration_step = 0.001;     ///< s
    double post_contact_time = 0.3;      ///< s
    double max_flight_time = 4.0;        ///< s

    double sample_rate = 200.0;          ///< Hz, nominal
    CameraNoise camera;
    FeedParams feed;
    std::uint64_t rng_seed = 1;
    /// Seeds the tracking-system session (its calibration error); 0 uses
    /// rng_seed. Setting it to another run's rng_seed measures with the same
    /// calibrated camera as that run.
    std::uint64_t camera_seed = 0;

    /// Throws RangeError for non-physical values.
    void validate() const;
};

/// Fills calib_speed / calib_spin when they are zero.
SimConfig calibrated(SimConfig cfg);

void to_json(nlohmann::json& j, const CameraNoise& c);
void from_json(const nlohmann::json& j, CameraNoise& c);
void to_json(nlohmann::json& j, const FeedParams& f);
void from_json(const nlohmann::json& j, FeedParams& f);
void to_json(nlohmann::json& j, const SimConfig& c);
/// Missing keys keep their defaults.
void from_json(const nlohmann::json& j, SimConfig& c);

} // namespace launcher::sim
