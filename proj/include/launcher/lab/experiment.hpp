#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "launcher/lab/filters.hpp"
#include "launcher/lab/stats.hpp"
#include "launcher/lab/trajectory_io.hpp"
#include "launcher/sim/sim_launcher.hpp"

namespace launcher::lab {

/// Anything that can be commanded to a state and fire one observed ball:
/// the simulator directly or a remote launcher through the client SDK.
class LaunchSource
{
public:
    virtual ~LaunchSource() = default;
    virtual void set_state(const LauncherState& state) = 0;
    virtual Trajectory launch() = 0;
};

class SimLaunchSource final : public LaunchSource
{
public:
    explicit SimLaunchSource(sim::SimLauncher& sim) : sim_(sim) {}

    void set_state(const LauncherState& state) override { sim_.apply_state(state); }
    Trajectory launch() override { return sim_.fire().observed; }

private:
    sim::SimLauncher& sim_;
};

/// Default shot of the accuracy experiments: equal wheels aimed at the far
/// half of the table from the neutral orientation.
LauncherState default_experiment_state();

/// Displaced orientation visited before each launch in jump mode.
inline constexpr double jump_azimuth_deg = -15.8;
inline constexpr double jump_altitude_deg = 6.4;

struct ExperimentOptions
{
    PipelineOptions pipeline;
    bool orientation_jump = false;
};

struct ExperimentResult
{
    AccuracyStats stats;
    std::vector<LandingPoint> landings; ///< on-table landings that entered the stats
    FilterReport report;
    std::size_t launched = 0;
};

/// Fires n balls at a fixed state, filters every observed trajectory and
/// reports the landing scatter. RangeError when n is zero or fewer than two
/// landings survive.
ExperimentResult run_accuracy_experiment(LaunchSource& source, const LauncherState& state,
                                         int n_launches, const ExperimentOptions& options = {});

enum class SweepParam { ramp_up, stroke_gain, pinch };

SweepParam parse_sweep_param(const std::string& name);
std::string to_string(SweepParam p);

/// `value` is a number, or "continuous" for the ramp-up sweep.
LauncherState with_sweep_value(LauncherState state, SweepParam param, const std::string& value);

struct SweepSeries
{
    std::string value;
    ExperimentResult result;
};

/// One fresh simulated launcher per value, seeded from cfg.rng_seed and
/// the value's position, so reruns are identical.
std::vector<SweepSeries> run_sweep(const sim::SimConfig& cfg, const LauncherState& base,
                                   SweepParam param, const std::vector<std::string>& values,
                                   int n_launches, const ExperimentOptions& options = {});

std::vector<StatsRow> sweep_rows(SweepParam param, const std::vector<SweepSeries>& series);

} // namespace launcher::lab
