#include "launcher/trajectory.hpp"

#include <cmath>

namespace launcher {

bool Trajectory::well_formed() const noexcept
{
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        if (!std::isfinite(s.t) || !s.position.allFinite())
            return false;
        if (i > 0 && !(s.t > samples[i - 1].t))
            return false;
    }
    return true;
}

} // namespace launcher
