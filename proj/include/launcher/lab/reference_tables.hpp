#pragma once

#include <optional>
#include <span>
#include <string>

namespace launcher::lab::reference {

/// One row of a published landing-accuracy table. Deviations in metres,
/// area in square metres.
struct AccuracyRow
{
    std::string setting;
    int samples = 0;
    double sigma_x = 0.0;
    double sigma_y = 0.0;
    double area_sigma = 0.0;
    std::optional<double> launch_time; ///< s, stroke-gain table only
};

std::span<const AccuracyRow> ramp_up_table();
std::span<const AccuracyRow> stroke_gain_table();
std::span<const AccuracyRow> pinching_table();
std::span<const AccuracyRow> orientation_jump_table();

/// Per-axis deviations in millimetres as plotted against the swept
/// parameter, with the plotted average.
struct FigurePoint
{
    double parameter = 0.0;
    double sigma_x_mm = 0.0;
    double sigma_y_mm = 0.0;
    double sigma_avg_mm = 0.0;
};

std::span<const FigurePoint> ramp_up_figure();
std::span<const FigurePoint> stroke_gain_figure();
std::span<const FigurePoint> pinching_figure();

struct DatasetGroup
{
    int group = 0;
    int trajectories = 0;
    const char* spin;
    const char* wheel_speeds;
    const char* altitude;
};

std::span<const DatasetGroup> dataset_groups();
inline constexpr int dataset_total = 3761;
inline constexpr int dataset_on_table = 3250;
inline constexpr int target_shooting_trajectories = 415;
inline constexpr int target_shooting_samples = 66581;

} // namespace launcher::lab::reference
