#include "launcher/launcher_state.hpp"

#include <cmath>
#include <string>

#include "launcher/error.hpp"

namespace launcher {

namespace {

std::string format_range(const char* field, double value, double lo, double hi)
{
    return std::string(field) + " = " + std::to_string(value) + " outside [" + std::to_string(lo)
           + ", " + std::to_string(hi) + "]";
}

void check(const char* field, double value, double lo, double hi)
{
    if (!std::isfinite(value) || value < lo || value > hi)
        throw RangeError(format_range(field, value, lo, hi));
}

} // namespace

RampUp RampUp::seconds(double s)
{
    if (!std::isfinite(s) || s < 0.0)
        throw RangeError("ramp_up_time must be a non-negative number of seconds");
    return RampUp{false, s};
}

void validate_actuation(double percent, const char* field)
{
    check(field, percent, limits::actuation_min, limits::actuation_max);
}

void validate_orientation(double azimuth_deg, double altitude_deg)
{
    check("azimuth_deg", azimuth_deg, limits::azimuth_min_deg, limits::azimuth_max_deg);
    check("altitude_deg", altitude_deg, limits::altitude_min_deg, limits::altitude_max_deg);
}

void LauncherState::validate() const
{
    validate_actuation(wheels.bottom, "bottom");
    validate_actuation(wheels.top_left, "top_left");
    validate_actuation(wheels.top_right, "top_right");
    validate_orientation(azimuth_deg, altitude_deg);
    if (!std::isfinite(stroke_gain) || stroke_gain <= 0.0 || stroke_gain > limits::stroke_gain_max)
        throw RangeError("stroke_gain must be in (0, 100]");
    if (!ramp_up.is_continuous())
        RampUp::seconds(ramp_up.duration());
    check("pinch_diameter_mm", pinch_diameter_mm, limits::pinch_min_mm, limits::pinch_max_mm);
}

void to_json(nlohmann::json& j, const WheelActuation& w)
{
    j = {{"bottom", w.bottom}, {"top_left", w.top_left}, {"top_right", w.top_right}};
}

void from_json(const nlohmann::json& j, WheelActuation& w)
{
    w.bottom = j.at("bottom").get<double>();
    w.top_left = j.at("top_left").get<double>();
    w.top_right = j.at("top_right").get<double>();
}

void to_json(nlohmann::json& j, const RampUp& r)
{
    if (r.is_continuous())
        j = "continuous";
    else
        j = r.duration();
}

void from_json(const nlohmann::json& j, RampUp& r)
{
    if (j.is_string()) {
        if (j.get<std::string>() != "continuous")
            throw RangeError("ramp_up_time must be seconds or \"continuous\"");
        r = RampUp::continuous();
        return;
    }
    if (!j.is_number())
        throw RangeError("ramp_up_time must be seconds or \"continuous\"");
    r = RampUp::seconds(j.get<double>());
}

void to_json(nlohmann::json& j, const LauncherState& s)
{
    j = {{"wheels", s.wheels},
         {"azimuth_deg", s.azimuth_deg},
         {"altitude_deg", s.altitude_deg},
         {"stroke_gain", s.stroke_gain},
         {"ramp_up_time", s.ramp_up},
         {"pinch_diameter_mm", s.pinch_diameter_mm}};
}

void from_json(const nlohmann::json& j, LauncherState& s)
{
    LauncherState out;
    if (j.contains("wheels"))
        out.wheels = j.at("wheels").get<WheelActuation>();
    out.azimuth_deg = j.value("azimuth_deg", out.azimuth_deg);
    out.altitude_deg = j.value("altitude_deg", out.altitude_deg);
    out.stroke_gain = j.value("stroke_gain", out.stroke_gain);
    if (j.contains("ramp_up_time"))
        out.ramp_up = j.at("ramp_up_time").get<RampUp>();
    out.pinch_diameter_mm = j.value("pinch_diameter_mm", out.pinch_diameter_mm);
    out.validate();
    s = out;
}

} // namespace launcher
