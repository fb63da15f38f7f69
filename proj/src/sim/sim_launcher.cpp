#include "launcher/sim/sim_launcher.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace launcher::sim {

namespace {

Rng seeded(std::uint64_t seed, std::uint64_t stream)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream)};
    return Rng(seq);
}

} // namespace

SimLauncher::SimLauncher(SimConfig cfg)
    : cfg_(calibrated(std::move(cfg))),
      rng_(seeded(cfg_.rng_seed, 1)),
      camera_rng_(seeded(cfg_.camera_seed != 0 ? cfg_.camera_seed : cfg_.rng_seed, 2)),
      camera_(cfg_.camera, camera_rng_),
      feed_(initial_feed_state(cfg_.feed))
{
    cfg_.validate();
}

void SimLauncher::apply_state(const LauncherState& state)
{
    state.validate();
    const bool moved =
        state.azimuth_deg != state_.azimuth_deg || state.altitude_deg != state_.altitude_deg;
    state_ = state;
    if (moved)
        redraw_orientation_error();
}

void SimLauncher::redraw_orientation_error()
{
    std::normal_distribution<double> gauss(0.0, cfg_.orientation_repeatability_deg);
    if (cfg_.orientation_repeatability_deg > 0.0)
        orientation_error_ = {gauss(rng_), gauss(rng_)};
}

LauncherState SimLauncher::actual_state() const
{
    LauncherState s = state_;
    s.azimuth_deg += orientation_error_.first;
    s.altitude_deg += orientation_error_.second;
    return s;
}

void SimLauncher::start_ramp(double now)
{
    ramp_start_ = now;
}

std::vector<FeedEventKind> SimLauncher::feed_tick(double now, bool stroke)
{
    std::vector<FeedEventKind> events;
    if (stroke && !feed_.feeding) {
        FeedStep begun = begin_stroke(feed_);
        feed_ = begun.state;
        events = begun.events;
    }
    FeedStep step = step_feed(feed_, state_, cfg_.feed, cfg_.feed.tick, rng_);
    feed_ = step.state;
    for (auto e : step.events) {
        events.push_back(e);
        if (e == FeedEventKind::ball_released) {
            const double t_feed = ramp_start_ ? now - *ramp_start_
                                              : std::numeric_limits<double>::infinity();
            last_shot_ = shoot(t_feed);
            if (!state_.ramp_up.is_continuous())
                ramp_start_.reset();
        }
    }
    return events;
}

void SimLauncher::stir()
{
    feed_ = sim::stir(feed_, cfg_.feed);
}

Shot SimLauncher::fire()
{
    const double t_feed = state_.ramp_up.duration() + stroke_time(state_.stroke_gain, cfg_.feed);
    return fire_with_feed_time(t_feed);
}

Shot SimLauncher::fire_with_feed_time(double t_feed)
{
    if (cfg_.feed_timing_jitter > 0.0 && !state_.ramp_up.is_continuous()) {
        std::normal_distribution<double> jitter(0.0, cfg_.feed_timing_jitter);
        t_feed = std::max(1e-3, t_feed + jitter(rng_));
    }
    return shoot(t_feed);
}

Shot SimLauncher::shoot(double t_feed)
{
    Shot shot;
    const LauncherState actual = actual_state();
    if (!std::isfinite(t_feed))
        t_feed = 1e9;
    shot.outcome = compute_launch(actual, cfg_, t_feed, rng_);
    shot.flight = simulate_flight(shot.outcome, cfg_);
    shot.observed = camera_.observe(shot.flight, camera_rng_);
    shot.observed.id = "shot-" + std::to_string(shot_count_++);
    shot.observed.control = state_;
    shot.observed.launcher_distance_to_table = cfg_.launcher_distance;
    return shot;
}

} // namespace launcher::sim
