#pragma once

#include <optional>
#include <string>
#include <vector>

#include "launcher/sim/launch_model.hpp"
#include "launcher/sim/sim_config.hpp"
#include "launcher/trajectory.hpp"

namespace launcher::sim {

struct FlightState
{
    double t = 0.0;
    Vec3 position = Vec3::Zero();
    Vec3 velocity_in = Vec3::Zero();  ///< velocity arriving at this state
    Vec3 velocity_out = Vec3::Zero(); ///< differs from velocity_in only at the table contact
};

/// Descending crossing of the plane z = table height.
struct PlaneCrossing
{
    double t = 0.0;
    Vec3 position = Vec3::Zero();
    Vec3 velocity = Vec3::Zero();
    bool on_table = false;
};

/// Ground-truth flight on the integrator grid, with the exact table contact
/// inserted as an extra state.
class Flight
{
public:
    std::vector<FlightState> states;
    std::optional<PlaneCrossing> crossing; ///< first descending crossing, on or off the table
    Vec3 omega = Vec3::Zero();             ///< rev/s

    bool bounced() const noexcept { return crossing && crossing->on_table; }
    double start_time() const { return states.front().t; }
    double end_time() const { return states.back().t; }

    /// Cubic Hermite interpolation between integrator states.
    Vec3 position_at(double t) const;

    Trajectory to_trajectory(std::string id, const LauncherState& control,
                             double launcher_distance) const;
};

/// Drag + Magnus flight with a single table rebound, fixed-step RK4.
/// Stops post_contact_time after the rebound, at the floor, when leaving the
/// simulation volume, or after max_flight_time. IntegrationError on
/// non-finite state.
Flight simulate_flight(const LaunchOutcome& outcome, const SimConfig& cfg);

} // namespace launcher::sim
