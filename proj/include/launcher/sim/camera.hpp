#pragma once

#include "launcher/sim/flight.hpp"
#include "launcher/sim/launch_model.hpp"
#include "launcher/sim/sim_config.hpp"

namespace launcher::sim {

/// Resamples a flight at camera frame times (triangular on
/// [min, max] with the given mode) and adds tracking error: a per-session
/// relative scale error on each axis times the distance from the origin,
/// white jitter, and occasional outliers.
Trajectory observe(const Flight& truth, const CameraNoise& noise, const Vec3& scale_error,
                   Rng& rng);

/// One tracking-system calibration: the scale error is drawn once.
class CameraSession
{
public:
    CameraSession(CameraNoise noise, Rng& rng);

    const Vec3& scale_error() const noexcept { return scale_error_; }
    const CameraNoise& noise() const noexcept { return noise_; }

    Trajectory observe(const Flight& truth, Rng& rng) const;

private:
    CameraNoise noise_;
    Vec3 scale_error_ = Vec3::Zero();
};

} // namespace launcher::sim
