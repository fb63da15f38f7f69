#pragma once

#include "launcher/lab/table.hpp"
#include "launcher/trajectory.hpp"

namespace launcher::lab {

inline constexpr int default_fit_window = 5;
/// Vertical speed both fitted lines must exceed for a rebound, m/s. Rejects
/// the flat, noisy stretch around the apex.
inline constexpr double min_rebound_speed = 0.5;

struct LandingPoint
{
    double x = 0.0;
    double y = 0.0;
    double t_land = 0.0;
    bool valid = false;
};

/// The rebound is the first sample that is lowest among the `window`
/// samples up to it and the `window` samples after it, with a descending
/// fit before and an ascending fit after. The lowest sample joins whichever
/// side gives the smaller total fit residual. Intersects least-squares lines
/// z(t) fitted over those two windows; (x, y) come from linear
/// interpolation between the samples bracketing the intersection.
///
/// Throws NoReboundError when no sample has such a descending-then-ascending
/// height pattern around it. The result is marked invalid
/// for near-parallel lines, an intersection outside the samples adjacent to
/// the lowest one, or a point outside the relaxed table region.
LandingPoint estimate_landing(const Trajectory& traj, int window = default_fit_window,
                              const TableRegion& region = {});

} // namespace launcher::lab
