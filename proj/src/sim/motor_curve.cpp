#include "launcher/sim/motor_curve.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "launcher/error.hpp"

namespace launcher::sim {

namespace {

constexpr std::array<double, 21> knots = {0,  5,  10, 15, 20, 25, 30, 35, 40, 45, 50,
                                          55, 60, 65, 70, 75, 80, 85, 90, 95, 100};

MotorCurve from_speeds(std::string id, const std::array<double, 21>& speeds)
{
    std::vector<CurvePoint> pts;
    pts.reserve(knots.size());
    for (std::size_t i = 0; i < knots.size(); ++i)
        pts.push_back({knots[i], speeds[i]});
    return MotorCurve(std::move(id), std::move(pts));
}

// Bench measurements of turning speed [rev/min] every 5 % of actuation.
const std::array<double, 21> mn5008_bottom = {0,    0,    0,    0,    0,    0,    524,
                                              1291, 1900, 2369, 2722, 2977, 3184, 3331,
                                              3435, 3529, 3613, 3681, 3933, 3957, 3960};
const std::array<double, 21> mn5008_top_right = {0,    0,    0,    0,    0,    0,    470,
                                                 1250, 1828, 2325, 2667, 2939, 3149, 3299,
                                                 3418, 3509, 3600, 3678, 3937, 3961, 3963};
const std::array<double, 21> mn5008_top_left = {0,    0,    0,    0,    0,    0,    489,
                                                1278, 1865, 2354, 2694, 2959, 3170, 3321,
                                                3434, 3524, 3615, 3688, 3931, 3968, 3970};
const std::array<double, 21> mn4004_bottom = {0,    0,    0,    0,    183,  603,  1260,
                                              1780, 2275, 2665, 3043, 3305, 3527, 3706,
                                              3865, 4046, 4210, 4484, 4763, 4962, 4964};
const std::array<double, 21> mn4004_top_right = {0,    0,    0,    0,    0,    253,  963,
                                                 1460, 1952, 2346, 2724, 2984, 3235, 3429,
                                                 3587, 3744, 3871, 3977, 4115, 4385, 4597};
const std::array<double, 21> mn4004_top_left = {0,    0,    0,    0,    200,  747,  1430,
                                                1892, 2373, 2669, 3018, 3238, 3440, 3601,
                                                3781, 3870, 3950, 4170, 4437, 4615, 4616};

// Ball speed of the MN4004 build is load-limited: with the speed gain
// fitted on MN5008 its free-running curves overshoot the measured 10.8 m/s
// maximum. This factor brings the fully actuated launch to that value.
// Full-scale reference speeds are the smallest curve maxima (3960 and 4597).
constexpr double mn4004_load_efficiency = 10.8 / 15.4 * (3960.0 / 4597.0);

} // namespace

MotorCurve::MotorCurve(std::string motor_id, std::vector<CurvePoint> points)
    : motor_id_(std::move(motor_id)), points_(std::move(points))
{
    if (points_.size() < 2)
        throw FormatError("motor curve " + motor_id_ + " needs at least two points");
    if (points_.front().actuation != 0.0 || points_.front().speed != 0.0)
        throw FormatError("motor curve " + motor_id_ + " must start at (0, 0)");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& p = points_[i];
        if (!std::isfinite(p.actuation) || !std::isfinite(p.speed) || p.speed < 0.0)
            throw FormatError("motor curve " + motor_id_ + " has an invalid point");
        if (i == 0)
            continue;
        if (!(p.actuation > points_[i - 1].actuation))
            throw FormatError("motor curve " + motor_id_ + " actuation not strictly increasing");
        if (p.speed < points_[i - 1].speed)
            throw FormatError("motor curve " + motor_id_ + " speed decreasing");
    }
    if (points_.back().actuation > 100.0)
        throw FormatError("motor curve " + motor_id_ + " exceeds 100 % actuation");
}

double interpolate_motor_speed(const MotorCurve& curve, double actuation)
{
    if (!std::isfinite(actuation) || actuation < 0.0 || actuation > 100.0)
        throw RangeError("actuation " + std::to_string(actuation) + " outside [0, 100]");
    const auto& pts = curve.points();
    if (actuation >= pts.back().actuation)
        return pts.back().speed;
    auto hi = std::upper_bound(pts.begin(), pts.end(), actuation,
                               [](double a, const CurvePoint& p) { return a < p.actuation; });
    auto lo = std::prev(hi);
    if (actuation == lo->actuation)
        return lo->speed;
    const double f = (actuation - lo->actuation) / (hi->actuation - lo->actuation);
    return lo->speed + f * (hi->speed - lo->speed);
}

double actuation_for_speed(const MotorCurve& curve, double speed)
{
    const auto& pts = curve.points();
    if (!(speed > 0.0))
        return 0.0;
    if (speed >= pts.back().speed)
        return pts.back().actuation;
    auto hi = std::find_if(pts.begin(), pts.end(),
                           [speed](const CurvePoint& p) { return p.speed >= speed; });
    auto lo = std::prev(hi);
    if (hi->speed == speed)
        return hi->actuation;
    const double f = (speed - lo->speed) / (hi->speed - lo->speed);
    return lo->actuation + f * (hi->actuation - lo->actuation);
}

MotorCurve MotorSet::reference_curve() const
{
    std::vector<double> knots_all;
    for (const auto& c : curves)
        for (const auto& p : c.points())
            knots_all.push_back(p.actuation);
    std::sort(knots_all.begin(), knots_all.end());
    knots_all.erase(std::unique(knots_all.begin(), knots_all.end()), knots_all.end());

    std::vector<CurvePoint> pts;
    pts.reserve(knots_all.size());
    for (double a : knots_all) {
        double v = interpolate_motor_speed(curves[0], a);
        v = std::min(v, interpolate_motor_speed(curves[1], a));
        v = std::min(v, interpolate_motor_speed(curves[2], a));
        pts.push_back({a, v});
    }
    return MotorCurve(name + "-reference", std::move(pts));
}

MotorSet mn5008_motor_set()
{
    return MotorSet{"MN5008",
                    {from_speeds("MN5008-bottom", mn5008_bottom),
                     from_speeds("MN5008-top-left", mn5008_top_left),
                     from_speeds("MN5008-top-right", mn5008_top_right)},
                    1.0};
}

MotorSet mn4004_motor_set()
{
    return MotorSet{"MN4004",
                    {from_speeds("MN4004-bottom", mn4004_bottom),
                     from_speeds("MN4004-top-left", mn4004_top_left),
                     from_speeds("MN4004-top-right", mn4004_top_right)},
                    mn4004_load_efficiency};
}

MotorSet motor_set_by_name(const std::string& name)
{
    if (name == "MN5008")
        return mn5008_motor_set();
    if (name == "MN4004")
        return mn4004_motor_set();
    throw RangeError("unknown motor set '" + name + "' (expected MN5008 or MN4004)");
}

std::vector<MotorCurve> builtin_motor_curves()
{
    auto a = mn5008_motor_set();
    auto b = mn4004_motor_set();
    return {a.curves[0], a.curves[2], a.curves[1], b.curves[0], b.curves[2], b.curves[1]};
}

const MotorCurve& builtin_curve(const std::string& motor_id)
{
    static const std::vector<MotorCurve> curves = builtin_motor_curves();
    for (const auto& c : curves)
        if (c.motor_id() == motor_id)
            return c;
    throw RangeError("no built-in motor curve '" + motor_id + "'");
}

MotorCurve parse_motor_curve_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line))
        throw FormatError("motor curve csv: empty input");
    const std::string prefix = "motor_id,";
    if (line.rfind(prefix, 0) != 0)
        throw FormatError("motor curve csv: first line must be 'motor_id,<label>'");
    std::string id = line.substr(prefix.size());
    while (!id.empty() && (id.back() == '\r' || id.back() == ' '))
        id.pop_back();

    std::vector<CurvePoint> pts;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line.rfind("actuation", 0) == 0)
            continue;
        std::istringstream row(line);
        CurvePoint p;
        char comma = 0;
        if (!(row >> p.actuation >> comma >> p.speed) || comma != ',')
            throw FormatError("motor curve csv: bad row at line " + std::to_string(line_no));
        pts.push_back(p);
    }
    return MotorCurve(std::move(id), std::move(pts));
}

MotorCurve load_motor_curve_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw FormatError("cannot open " + path.string());
    return parse_motor_curve_csv(in);
}

void write_motor_curve_csv(std::ostream& out, const MotorCurve& curve)
{
    out << "motor_id," << curve.motor_id() << "\nactuation,speed\n";
    for (const auto& p : curve.points())
        out << p.actuation << ',' << p.speed << '\n';
}

} // namespace launcher::sim
