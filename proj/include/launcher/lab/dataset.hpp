#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include "launcher/sim/sim_config.hpp"
#include "launcher/trajectory.hpp"

namespace launcher::lab {

/// Control regime of one dataset group. Spin is expressed as the offset of
/// the two top wheels above the bottom wheel in actuation percent (positive
/// is topspin); the mean actuation is drawn inside the window of speeds that
/// land on the table for the drawn altitude and spin.
struct Regime
{
    int group = 0;
    int trajectories = 0;
    double spin_min = 0.0;
    double spin_max = 0.0;
    double speed_lo = 0.0; ///< fraction of the on-table window, 0 = slowest
    double speed_hi = 1.0;
    double altitude_min = 6.4;
    double altitude_max = 37.1;
    double azimuth_span = 10.0; ///< azimuth drawn from [-span, span]

    bool equal_wheels() const noexcept { return spin_min == 0.0 && spin_max == 0.0; }
};

/// The six regimes of the published training set, in table order.
std::array<Regime, 6> default_regimes();

/// Group sizes for n trajectories: proportional to the table with
/// largest-remainder rounding, so n = 3761 reproduces it exactly.
std::vector<int> scale_group_sizes(int n, const std::array<Regime, 6>& regimes = default_regimes());

struct DatasetOptions
{
    int n = 3761;
    std::uint64_t seed = 1;
    /// Share of launches deliberately aimed just outside the on-table window.
    double aimed_miss_fraction = 0.10;
    sim::SimConfig sim;
};

struct GeneratedTrajectory
{
    Trajectory trajectory;
    int group = 0;
    bool on_table = false; ///< per the trajectory-lab rebound estimate
};

struct DatasetSummary
{
    int total = 0;
    int on_table = 0;
    std::array<int, 6> per_group{};

    double on_table_fraction() const noexcept
    {
        return total > 0 ? static_cast<double>(on_table) / total : 0.0;
    }
};

/// Generates the dataset trajectory by trajectory, in group order.
DatasetSummary generate_dataset(const DatasetOptions& options,
                                const std::function<void(const GeneratedTrajectory&)>& sink);

/// Writes one traj_NNNNNN.jsonl file per trajectory, carrying the group in
/// its header.
DatasetSummary write_dataset(const DatasetOptions& options, const std::filesystem::path& dir);

} // namespace launcher::lab
