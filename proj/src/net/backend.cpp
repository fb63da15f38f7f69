#include "launcher/net/backend.hpp"

namespace launcher::net {

double SimBackend::stroke_duration(double stroke_gain) const
{
    const auto& feed = sim_.config().feed;
    return (sim::stroke_ticks(stroke_gain, feed) - 1) * feed.tick;
}

std::optional<Trajectory> SimBackend::last_trajectory() const
{
    if (!sim_.last_shot())
        return std::nullopt;
    return sim_.last_shot()->observed;
}

nlohmann::json SimBackend::diagnostics() const
{
    const auto& f = sim_.feed();
    return {{"queue_length", f.queue_length},
            {"clogged", f.clogged},
            {"feeding", f.feeding},
            {"stirring", f.stirring()}};
}

} // namespace launcher::net
