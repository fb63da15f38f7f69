#pragma once

#include <nlohmann/json.hpp>

namespace launcher {

namespace limits {
inline constexpr double azimuth_min_deg = -15.8;
inline constexpr double azimuth_max_deg = 15.6;
inline constexpr double altitude_min_deg = 6.4;
inline constexpr double altitude_max_deg = 37.1;
inline constexpr double actuation_min = 0.0;
inline constexpr double actuation_max = 100.0;
inline constexpr double pinch_min_mm = 35.0;
inline constexpr double pinch_max_mm = 40.0;
inline constexpr double stroke_gain_max = 100.0;
} // namespace limits

/// Actuation of the three throwing wheels in percent.
struct WheelActuation
{
    double bottom = 0.0;
    double top_left = 0.0;
    double top_right = 0.0;

    bool equal() const noexcept { return bottom == top_left && bottom == top_right; }
    bool operator==(const WheelActuation&) const = default;
};

/// Motor ramp-up before the feed starts. Continuous mode keeps the wheels
/// spinning between launches.
class RampUp
{
public:
    constexpr RampUp() = default;

    static RampUp seconds(double s);
    static constexpr RampUp continuous() { return RampUp{true, 0.0}; }

    bool is_continuous() const noexcept { return continuous_; }
    /// Zero in continuous mode.
    double duration() const noexcept { return continuous_ ? 0.0 : seconds_; }

    bool operator==(const RampUp&) const = default;

private:
    constexpr RampUp(bool continuous, double s) : continuous_(continuous), seconds_(s) {}

    bool continuous_ = false;
    double seconds_ = 2.0;
};

struct LauncherState
{
    WheelActuation wheels;
    double azimuth_deg = 0.0;
    double altitude_deg = 19.9;
    double stroke_gain = 5.0;
    RampUp ramp_up = RampUp::seconds(2.0);
    double pinch_diameter_mm = 37.0;

    /// Throws RangeError naming the first offending field.
    void validate() const;

    bool operator==(const LauncherState&) const = default;
};

void validate_actuation(double percent, const char* field);
void validate_orientation(double azimuth_deg, double altitude_deg);

void to_json(nlohmann::json& j, const WheelActuation& w);
void from_json(const nlohmann::json& j, WheelActuation& w);
void to_json(nlohmann::json& j, const RampUp& r);
void from_json(const nlohmann::json& j, RampUp& r);
void to_json(nlohmann::json& j, const LauncherState& s);
/// Missing fields keep their defaults; the result is validated.
void from_json(const nlohmann::json& j, LauncherState& s);

} // namespace launcher
