#pragma once

#include <string>
#include <vector>

#include "launcher/lab/landing.hpp"
#include "launcher/lab/table.hpp"
#include "launcher/trajectory.hpp"

namespace launcher::lab {

inline constexpr double max_time_gap = 0.5;          ///< s
inline constexpr double max_position_jump = 0.05;    ///< m
inline constexpr int position_jump_neighbours = 15;

/// False iff two consecutive samples are more than 0.5 s apart.
bool filter_time_jump(const Trajectory& traj);

struct PositionJumpResult
{
    Trajectory trajectory;
    std::vector<std::size_t> removed; ///< indices into the input
    bool too_short = false;           ///< fewer than 16 samples, passed through
};

/// Removes samples that deviate by more than 5 cm from their neighbourhood:
/// the quadratic-in-time fit through the 15 nearest-in-time neighbours, or
/// the one-sided fit through up to 15 samples before or after (whichever
/// is closest), so the table contact, where the velocity jumps, is kept.
/// Every sample is judged against the original data.
PositionJumpResult filter_position_jump(const Trajectory& traj);

/// Deviation of each sample from its neighbourhood fit, in metres.
std::vector<double> position_deviations(const Trajectory& traj);

/// Keeps samples with |x| <= length + margin_x and |y| <= width/2 + margin_y.
Trajectory filter_region(const Trajectory& traj, const TableRegion& region);

enum class ReboundVerdict { on_table, off_table, no_rebound };

struct ReboundResult
{
    ReboundVerdict verdict = ReboundVerdict::no_rebound;
    LandingPoint landing;
    bool keep = false;
};

/// Keeps trajectories that bounce on the (unrelaxed) table; with
/// keep_misses, trajectories without an on-table rebound stay as well.
ReboundResult filter_rebound(const Trajectory& traj, bool keep_misses, const TableRegion& region,
                             int window = default_fit_window);

struct PipelineOptions
{
    TableRegion region;
    bool keep_misses = false;
    int window = default_fit_window;
};

/// Outcome of the full filter chain for one trajectory.
struct Preprocessed
{
    Trajectory trajectory;
    bool kept = false;
    std::string dropped_by;          ///< "time_jump" | "rebound" when dropped
    std::size_t samples_removed = 0; ///< position-jump plus region removals
    std::size_t outliers_removed = 0;
    bool too_short = false;
    ReboundResult rebound;

    /// Any filter touched the trajectory.
    bool modified() const noexcept { return !kept || samples_removed > 0; }
};

/// time jump -> position jump -> region -> rebound.
Preprocessed preprocess(const Trajectory& traj, const PipelineOptions& options);

/// Flag report replacing manual inspection: one line per modified trajectory.
struct FilterReport
{
    std::size_t total = 0;
    std::size_t kept = 0;
    std::vector<std::string> lines;

    void add(const Preprocessed& p);
};

} // namespace launcher::lab
