#pragma once

#include <optional>
#include <vector>

#include "launcher/sim/camera.hpp"
#include "launcher/sim/feed.hpp"
#include "launcher/sim/flight.hpp"
#include "launcher/sim/launch_model.hpp"
#include "launcher/sim/sim_config.hpp"

namespace launcher::sim {

/// One simulated launch: what left the tube, the true flight and what the
/// tracking system recorded.
struct Shot
{
    LaunchOutcome outcome;
    Flight flight;
    Trajectory observed;
};

/// Seeded software stand-in for the launcher hardware. Single owner; not
/// thread-safe.
class SimLauncher
{
public:
    explicit SimLauncher(SimConfig cfg);

    const SimConfig& config() const noexcept { return cfg_; }
    const LauncherState& state() const noexcept { return state_; }
    const FeedState& feed() const noexcept { return feed_; }
    const CameraSession& camera() const noexcept { return camera_; }

    /// Orientation changes re-draw the actuator repeatability error.
    void apply_state(const LauncherState& state);

    /// Motors begin settling towards the commanded speeds at `now`.
    void start_ramp(double now);
    /// One feed control pass at `now`; `stroke` starts a crank stroke if
    /// none is running. A release fires the ball and stores it in last_shot().
    std::vector<FeedEventKind> feed_tick(double now, bool stroke);
    bool read_sensor() const noexcept { return feed_.sensor_filled; }
    void stir();

    const std::optional<Shot>& last_shot() const noexcept { return last_shot_; }

    /// Launch at the current state outside the feed state machine: ramp-up
    /// from standstill (or continuous), then a full crank stroke.
    Shot fire();

    /// Launch with an explicit time from motor start to ball engagement.
    Shot fire_with_feed_time(double t_feed);

    /// Actuator error of the current orientation, degrees (azimuth, altitude).
    std::pair<double, double> orientation_error() const noexcept { return orientation_error_; }

private:
    Shot shoot(double t_feed);
    LauncherState actual_state() const;
    void redraw_orientation_error();

    SimConfig cfg_;
    Rng rng_;
    Rng camera_rng_;
    CameraSession camera_;
    LauncherState state_;
    FeedState feed_;
    std::pair<double, double> orientation_error_{0.0, 0.0};
    std::optional<double> ramp_start_;
    std::optional<Shot> last_shot_;
    long shot_count_ = 0;
};

} // namespace launcher::sim
