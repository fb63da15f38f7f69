#include "launcher/sim/feed.hpp"

#include <algorithm>

#include "launcher/error.hpp"

namespace launcher::sim {

namespace {

double stroke_step(double stroke_gain, const FeedParams& params)
{
    return std::min(stroke_gain * params.k_deg, params.max_step_deg);
}

void update_sensor(FeedState& f, const FeedParams& params)
{
    f.sensor_filled = f.queue_length >= params.sensor_level;
}

} // namespace

FeedState initial_feed_state(const FeedParams& params)
{
    FeedState f;
    f.queue_length = params.channel_capacity;
    update_sensor(f, params);
    return f;
}

FeedStep begin_stroke(FeedState feed)
{
    FeedStep out;
    if (feed.feeding) {
        out.state = feed;
        return out;
    }
    if (feed.queue_length <= 0) {
        out.events.push_back(FeedEventKind::feed_starved);
        out.state = feed;
        return out;
    }
    feed.feeding = true;
    feed.stroke_angle = 0.0;
    out.state = feed;
    return out;
}

FeedStep step_feed(FeedState feed, const LauncherState& state, const FeedParams& params, double dt,
                   Rng& rng)
{
    FeedStep out;
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    if (feed.stirring()) {
        feed.stir_remaining = std::max(0.0, feed.stir_remaining - dt);
        if (!feed.stirring() && feed.clogged) {
            ++feed.stir_attempts;
            if (feed.stir_attempts >= 3 || unit(rng) < params.stir_success) {
                feed.clogged = false;
                feed.stir_attempts = 0;
                out.events.push_back(FeedEventKind::clog_resolved);
            }
        }
    }

    if (feed.feeding) {
        feed.stroke_angle += stroke_step(state.stroke_gain, params);
        if (feed.stroke_angle >= params.full_stroke_deg) {
            feed.feeding = false;
            feed.stroke_angle = 0.0;
            feed.queue_length = std::max(0, feed.queue_length - 1);
            out.events.push_back(FeedEventKind::ball_released);
            if (!feed.clogged && unit(rng) < params.clog_probability)
                feed.clogged = true;
        }
    }

    if (!feed.clogged && feed.queue_length < params.channel_capacity) {
        feed.refill_timer += dt;
        if (feed.refill_timer >= params.refill_interval) {
            feed.refill_timer = 0.0;
            ++feed.queue_length;
        }
    } else {
        feed.refill_timer = 0.0;
    }

    update_sensor(feed, params);
    out.state = feed;
    return out;
}

FeedState stir(FeedState feed, const FeedParams& params)
{
    if (!feed.stirring())
        feed.stir_remaining = params.stir_duration;
    return feed;
}

int stroke_ticks(double stroke_gain, const FeedParams& params)
{
    if (!(stroke_gain > 0.0))
        throw RangeError("stroke gain must be positive");
    const double step = stroke_step(stroke_gain, params);
    double angle = 0.0;
    int ticks = 0;
    // Same accumulation as step_feed so the count is exact.
    while (angle < params.full_stroke_deg) {
        angle += step;
        ++ticks;
    }
    return ticks;
}

double stroke_time(double stroke_gain, const FeedParams& params)
{
    return stroke_ticks(stroke_gain, params) * params.tick;
}

} // namespace launcher::sim
