#pragma once

#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "launcher/launcher_state.hpp"
#include "launcher/sim/feed.hpp"
#include "launcher/sim/sim_launcher.hpp"
#include "launcher/trajectory.hpp"

namespace launcher::net {

using FeedEventKind = sim::FeedEventKind;

/// The hardware seam of the control server. Everything the state machine
/// does to the launcher goes through these calls, so a hardware driver can
/// replace the simulator without touching the server. Called from the
/// state-machine thread only.
class Backend
{
public:
    virtual ~Backend() = default;

    virtual void apply_state(const LauncherState& state) = 0;
    /// Motors begin spinning up towards the commanded speeds at `now`.
    virtual void start_ramp(double now) = 0;
    /// One feed control pass; `stroke` starts a crank stroke.
    virtual std::vector<FeedEventKind> feed_tick(double now, bool stroke) = 0;
    /// Ball-queue sensor: true while the supply channel is filled.
    virtual bool read_sensor() const = 0;
    virtual void stir() = 0;

    /// Feed control period, s.
    virtual double tick() const = 0;
    /// Time from the control pass that starts a stroke to the pass that
    /// releases the ball.
    virtual double stroke_duration(double stroke_gain) const = 0;
    /// Tracked flight of the most recent release, if the backend has a tracker.
    virtual std::optional<Trajectory> last_trajectory() const { return std::nullopt; }
    /// Backend-specific fields for state snapshots.
    virtual nlohmann::json diagnostics() const { return nlohmann::json::object(); }
};

class SimBackend final : public Backend
{
public:
    explicit SimBackend(sim::SimConfig cfg) : sim_(std::move(cfg)) {}

    void apply_state(const LauncherState& state) override { sim_.apply_state(state); }
    void start_ramp(double now) override { sim_.start_ramp(now); }
    std::vector<FeedEventKind> feed_tick(double now, bool stroke) override
    {
        return sim_.feed_tick(now, stroke);
    }
    bool read_sensor() const override { return sim_.read_sensor(); }
    void stir() override { sim_.stir(); }

    double tick() const override { return sim_.config().feed.tick; }
    double stroke_duration(double stroke_gain) const override;
    std::optional<Trajectory> last_trajectory() const override;
    nlohmann::json diagnostics() const override;

    sim::SimLauncher& sim() noexcept { return sim_; }

private:
    sim::SimLauncher sim_;
};

} // namespace launcher::net
