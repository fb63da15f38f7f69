#include "launcher/sim/camera.hpp"

#include <array>

namespace launcher::sim {

Trajectory observe(const Flight& truth, const CameraNoise& noise, const Vec3& scale_error,
                   Rng& rng)
{
    Trajectory out;
    const std::array<double, 3> bounds{noise.min_interval, noise.mode_interval, noise.max_interval};
    const std::array<double, 3> weights{0.0, 1.0, 0.0};
    std::piecewise_linear_distribution<double> interval(bounds.begin(), bounds.end(),
                                                        weights.begin());
    std::uniform_real_distribution<double> phase(0.0, noise.mode_interval);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    const double end = truth.end_time();
    for (double t = truth.start_time() + phase(rng); t <= end; t += interval(rng)) {
        const Vec3 p = truth.position_at(t);
        Vec3 measured = p + scale_error * p.norm();
        if (noise.jitter_sd > 0.0)
            measured += noise.jitter_sd * Vec3{gauss(rng), gauss(rng), gauss(rng)};
        if (noise.outlier_rate > 0.0 && unit(rng) < noise.outlier_rate) {
            Vec3 dir{gauss(rng), gauss(rng), gauss(rng)};
            dir.normalize();
            const double size = noise.outlier_min + (noise.outlier_max - noise.outlier_min) * unit(rng);
            measured += size * dir;
        }
        out.samples.push_back({t, measured});
    }
    return out;
}

CameraSession::CameraSession(CameraNoise noise, Rng& rng) : noise_(std::move(noise))
{
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int i = 0; i < 3; ++i)
        scale_error_[i] = noise_.per_meter[i] * gauss(rng);
}

Trajectory CameraSession::observe(const Flight& truth, Rng& rng) const
{
    return sim::observe(truth, noise_, scale_error_, rng);
}

} // namespace launcher::sim
