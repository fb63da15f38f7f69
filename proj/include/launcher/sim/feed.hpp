#pragma once

#include <vector>

#include "launcher/launcher_state.hpp"
#include "launcher/sim/launch_model.hpp"
#include "launcher/sim/sim_config.hpp"

namespace launcher::sim {

/// Supply channel, crank feeder and reservoir stirrer.
struct FeedState
{
    int queue_length = 5;
    bool clogged = false;
    double stroke_angle = 0.0; ///< deg
    bool sensor_filled = true;

    bool feeding = false;       ///< crank stroke in progress
    double refill_timer = 0.0;  ///< s towards the next ball entering the channel
    double stir_remaining = 0.0;
    int stir_attempts = 0;      ///< failed attempts on the current clog

    bool stirring() const noexcept { return stir_remaining > 0.0; }
};

enum class FeedEventKind { ball_released, feed_starved, clog_resolved };

struct FeedStep
{
    FeedState state;
    std::vector<FeedEventKind> events;
};

/// Full channel, flowing reservoir.
FeedState initial_feed_state(const FeedParams& params);

/// Starts a crank stroke. Emits feed_starved instead when the channel is empty.
FeedStep begin_stroke(FeedState feed);

/// One control pass of duration dt. While feeding, the crank advances by
/// min(p_stroke * k_deg, max_step_deg); the ball leaves at full stroke and
/// the reservoir may clog with clog_probability.
FeedStep step_feed(FeedState feed, const LauncherState& state, const FeedParams& params, double dt,
                   Rng& rng);

/// Starts a stir attempt unless one is running.
FeedState stir(FeedState feed, const FeedParams& params);

/// Control passes from stroke start to release for a stroke gain.
int stroke_ticks(double stroke_gain, const FeedParams& params);

/// Stroke duration in seconds at the configured tick.
double stroke_time(double stroke_gain, const FeedParams& params);

} // namespace launcher::sim
