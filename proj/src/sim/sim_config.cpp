#include "launcher/sim/sim_config.hpp"

#include <cmath>

#include "launcher/error.hpp"
#include "launcher/sim/launch_model.hpp"
#include "launcher/sim/motor_curve.hpp"

namespace launcher::sim {

namespace {

void positive(const char* name, double v)
{
    if (!std::isfinite(v) || v <= 0.0)
        throw RangeError(std::string("SimConfig.") + name + " must be positive");
}

void non_negative(const char* name, double v)
{
    if (!std::isfinite(v) || v < 0.0)
        throw RangeError(std::string("SimConfig.") + name + " must be non-negative");
}

Vec3 vec_from(const nlohmann::json& j)
{
    if (!j.is_array() || j.size() != 3)
        throw FormatError("expected a 3-element array");
    return Vec3{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

} // namespace

void SimConfig::validate() const
{
    motor_set_by_name(motor_set);
    positive("wheel_radius", wheel_radius);
    positive("ball_radius", ball_radius);
    positive("ball_mass", ball_mass);
    non_negative("air_density", air_density);
    non_negative("drag_coefficient", drag_coefficient);
    non_negative("magnus_coefficient", magnus_coefficient);
    non_negative("restitution_z", restitution_z);
    non_negative("restitution_xy", restitution_xy);
    positive("gravity", gravity);
    non_negative("calib_speed", calib_speed);
    non_negative("calib_spin", calib_spin);
    positive("settle_time_constant", settle_time_constant);
    non_negative("settle_tau_jitter", settle_tau_jitter);
    non_negative("feed_timing_jitter", feed_timing_jitter);
    non_negative("actuation_noise_sd", actuation_noise_sd);
    non_negative("orientation_repeatability_deg", orientation_repeatability_deg);
    positive("table_length", table_length);
    positive("table_width", table_width);
    positive("table_height", table_height);
    non_negative("launcher_distance", launcher_distance);
    non_negative("pivot_height", pivot_height);
    non_negative("tube_length", tube_length);
    positive("integration_step", integration_step);
    non_negative("post_contact_time", post_contact_time);
    positive("max_flight_time", max_flight_time);
    positive("sample_rate", sample_rate);
    for (int i = 0; i < 3; ++i)
        non_negative("camera.per_meter", camera.per_meter[i]);
    non_negative("camera.jitter_sd", camera.jitter_sd);
    positive("camera.min_interval", camera.min_interval);
    if (!(camera.min_interval <= camera.mode_interval && camera.mode_interval <= camera.max_interval
          && camera.min_interval < camera.max_interval))
        throw RangeError("SimConfig.camera intervals must satisfy min <= mode <= max, min < max");
    if (camera.outlier_rate < 0.0 || camera.outlier_rate > 1.0)
        throw RangeError("SimConfig.camera.outlier_rate must be a probability");
    positive("feed.tick", feed.tick);
    positive("feed.full_stroke_deg", feed.full_stroke_deg);
    positive("feed.k_deg", feed.k_deg);
    positive("feed.max_step_deg", feed.max_step_deg);
    if (feed.channel_capacity < 1 || feed.sensor_level < 1
        || feed.sensor_level > feed.channel_capacity)
        throw RangeError("SimConfig.feed needs 1 <= sensor_level <= channel_capacity");
    positive("feed.refill_interval", feed.refill_interval);
    if (feed.clog_probability < 0.0 || feed.clog_probability > 1.0)
        throw RangeError("SimConfig.feed.clog_probability must be a probability");
    positive("feed.stir_duration", feed.stir_duration);
    if (feed.stir_success < 0.0 || feed.stir_success > 1.0)
        throw RangeError("SimConfig.feed.stir_success must be a probability");
}

SimConfig calibrated(SimConfig cfg)
{
    if (cfg.calib_speed > 0.0 && cfg.calib_spin > 0.0)
        return cfg;
    const Calibration c = calibrate(cfg);
    if (cfg.calib_speed <= 0.0)
        cfg.calib_speed = c.speed_gain;
    if (cfg.calib_spin <= 0.0)
        cfg.calib_spin = c.spin_gain;
    return cfg;
}

void to_json(nlohmann::json& j, const CameraNoise& c)
{
    j = {{"per_meter", {c.per_meter.x(), c.per_meter.y(), c.per_meter.z()}},
         {"jitter_sd", c.jitter_sd},
         {"min_interval", c.min_interval},
         {"mode_interval", c.mode_interval},
         {"max_interval", c.max_interval},
         {"outlier_rate", c.outlier_rate},
         {"outlier_min", c.outlier_min},
         {"outlier_max", c.outlier_max}};
}

void from_json(const nlohmann::json& j, CameraNoise& c)
{
    if (j.contains("per_meter"))
        c.per_meter = vec_from(j.at("per_meter"));
    c.jitter_sd = j.value("jitter_sd", c.jitter_sd);
    c.min_interval = j.value("min_interval", c.min_interval);
    c.mode_interval = j.value("mode_interval", c.mode_interval);
    c.max_interval = j.value("max_interval", c.max_interval);
    c.outlier_rate = j.value("outlier_rate", c.outlier_rate);
    c.outlier_min = j.value("outlier_min", c.outlier_min);
    c.outlier_max = j.value("outlier_max", c.outlier_max);
}

void to_json(nlohmann::json& j, const FeedParams& f)
{
    j = {{"tick", f.tick},
         {"full_stroke_deg", f.full_stroke_deg},
         {"k_deg", f.k_deg},
         {"max_step_deg", f.max_step_deg},
         {"channel_capacity", f.channel_capacity},
         {"sensor_level", f.sensor_level},
         {"refill_interval", f.refill_interval},
         {"clog_probability", f.clog_probability},
         {"stir_duration", f.stir_duration},
         {"stir_success", f.stir_success}};
}

void from_json(const nlohmann::json& j, FeedParams& f)
{
    f.tick = j.value("tick", f.tick);
    f.full_stroke_deg = j.value("full_stroke_deg", f.full_stroke_deg);
    f.k_deg = j.value("k_deg", f.k_deg);
    f.max_step_deg = j.value("max_step_deg", f.max_step_deg);
    f.channel_capacity = j.value("channel_capacity", f.channel_capacity);
    f.sensor_level = j.value("sensor_level", f.sensor_level);
    f.refill_interval = j.value("refill_interval", f.refill_interval);
    f.clog_probability = j.value("clog_probability", f.clog_probability);
    f.stir_duration = j.value("stir_duration", f.stir_duration);
    f.stir_success = j.value("stir_success", f.stir_success);
}

void to_json(nlohmann::json& j, const SimConfig& c)
{
    j = {{"motor_set", c.motor_set},
         {"wheel_radius", c.wheel_radius},
         {"ball_radius", c.ball_radius},
         {"ball_mass", c.ball_mass},
         {"air_density", c.air_density},
         {"drag_coefficient", c.drag_coefficient},
         {"magnus_coefficient", c.magnus_coefficient},
         {"restitution_z", c.restitution_z},
         {"restitution_xy", c.restitution_xy},
         {"gravity", c.gravity},
         {"calib_speed", c.calib_speed},
         {"calib_spin", c.calib_spin},
         {"settle_time_constant", c.settle_time_constant},
         {"settle_tau_jitter", c.settle_tau_jitter},
         {"feed_timing_jitter", c.feed_timing_jitter},
         {"actuation_noise_sd", c.actuation_noise_sd},
         {"orientation_repeatability_deg", c.orientation_repeatability_deg},
         {"table_length", c.table_length},
         {"table_width", c.table_width},
         {"table_height", c.table_height},
         {"launcher_distance", c.launcher_distance},
         {"pivot_height", c.pivot_height},
         {"tube_length", c.tube_length},
         {"integration_step", c.integration_step},
         {"post_contact_time", c.post_contact_time},
         {"max_flight_time", c.max_flight_time},
         {"sample_rate", c.sample_rate},
         {"camera", c.camera},
         {"feed", c.feed},
         {"rng_seed", c.rng_seed},
         {"camera_seed", c.camera_seed}};
}

void from_json(const nlohmann::json& j, SimConfig& c)
{
    SimConfig o = c;
    o.motor_set = j.value("motor_set", o.motor_set);
    o.wheel_radius = j.value("wheel_radius", o.wheel_radius);
    o.ball_radius = j.value("ball_radius", o.ball_radius);
    o.ball_mass = j.value("ball_mass", o.ball_mass);
    o.air_density = j.value("air_density", o.air_density);
    o.drag_coefficient = j.value("drag_coefficient", o.drag_coefficient);
    o.magnus_coefficient = j.value("magnus_coefficient", o.magnus_coefficient);
    o.restitution_z = j.value("restitution_z", o.restitution_z);
    o.restitution_xy = j.value("restitution_xy", o.restitution_xy);
    o.gravity = j.value("gravity", o.gravity);
    o.calib_speed = j.value("calib_speed", o.calib_speed);
    o.calib_spin = j.value("calib_spin", o.calib_spin);
    o.settle_time_constant = j.value("settle_time_constant", o.settle_time_constant);
    o.settle_tau_jitter = j.value("settle_tau_jitter", o.settle_tau_jitter);
    o.feed_timing_jitter = j.value("feed_timing_jitter", o.feed_timing_jitter);
    o.actuation_noise_sd = j.value("actuation_noise_sd", o.actuation_noise_sd);
    o.orientation_repeatability_deg =
        j.value("orientation_repeatability_deg", o.orientation_repeatability_deg);
    o.table_length = j.value("table_length", o.table_length);
    o.table_width = j.value("table_width", o.table_width);
    o.table_height = j.value("table_height", o.table_height);
    o.launcher_distance = j.value("launcher_distance", o.launcher_distance);
    o.pivot_height = j.value("pivot_height", o.pivot_height);
    o.tube_length = j.value("tube_length", o.tube_length);
    o.integration_step = j.value("integration_step", o.integration_step);
    o.post_contact_time = j.value("post_contact_time", o.post_contact_time);
    o.max_flight_time = j.value("max_flight_time", o.max_flight_time);
    o.sample_rate = j.value("sample_rate", o.sample_rate);
    if (j.contains("camera"))
        from_json(j.at("camera"), o.camera);
    if (j.contains("feed"))
        from_json(j.at("feed"), o.feed);
    o.rng_seed = j.value("rng_seed", o.rng_seed);
    o.camera_seed = j.value("camera_seed", o.camera_seed);
    o.validate();
    c = o;
}

} // namespace launcher::sim
