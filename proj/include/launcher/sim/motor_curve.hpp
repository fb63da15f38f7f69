#pragma once

#include <array>
#include <filesystem>
#include <istream>
#include <string>
#include <utility>
#include <vector>

namespace launcher::sim {

struct CurvePoint
{
    double actuation = 0.0; ///< percent
    double speed = 0.0;     ///< rev/min
};

/// Measured actuation -> turning speed map of one wheel motor.
///
/// Knots must start at (0, 0), be strictly increasing in actuation and
/// non-decreasing in speed; the constructor throws FormatError otherwise.
class MotorCurve
{
public:
    MotorCurve(std::string motor_id, std::vector<CurvePoint> points);

    const std::string& motor_id() const noexcept { return motor_id_; }
    const std::vector<CurvePoint>& points() const noexcept { return points_; }
    double max_speed() const noexcept { return points_.back().speed; }

private:
    std::string motor_id_;
    std::vector<CurvePoint> points_;
};

/// Piecewise-linear lookup; RangeError outside [0, 100].
double interpolate_motor_speed(const MotorCurve& curve, double actuation);

/// Smallest actuation at which the curve reaches `speed`; speeds above the
/// curve maximum map to the last knot.
double actuation_for_speed(const MotorCurve& curve, double speed);

enum class WheelPosition { bottom = 0, top_left = 1, top_right = 2 };

/// Curves of the three wheels of one launch unit plus the fraction of the
/// free-running surface speed the motor type keeps while the ball is pinched.
struct MotorSet
{
    std::string name;
    std::array<MotorCurve, 3> curves; // indexed by WheelPosition
    double load_efficiency = 1.0;

    const MotorCurve& curve(WheelPosition p) const { return curves[static_cast<int>(p)]; }

    /// Pointwise minimum of the three curves. Wheel commands are speeds on
    /// this curve, which every motor of the set can reach; each motor is
    /// driven at the actuation its own curve needs for that speed.
    MotorCurve reference_curve() const;
};

MotorSet mn5008_motor_set();
MotorSet mn4004_motor_set();
/// "MN5008" or "MN4004"; RangeError otherwise.
MotorSet motor_set_by_name(const std::string& name);

/// All six shipped curves.
std::vector<MotorCurve> builtin_motor_curves();
const MotorCurve& builtin_curve(const std::string& motor_id);

/// First line `motor_id,<label>`, optionally `actuation,speed`, then one
/// `actuation,speed` pair per line.
MotorCurve parse_motor_curve_csv(std::istream& in);
MotorCurve load_motor_curve_csv(const std::filesystem::path& path);
void write_motor_curve_csv(std::ostream& out, const MotorCurve& curve);

} // namespace launcher::sim
