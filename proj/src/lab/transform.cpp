#include "launcher/lab/transform.hpp"

namespace launcher::lab {

std::vector<BallSample> transform_to_table_frame(std::span<const RawSample> raw,
                                                 const CalibrationPose& pose)
{
    std::vector<BallSample> out;
    out.reserve(raw.size());
    for (const auto& r : raw)
        out.push_back({static_cast<double>(r.t_ns) * 1e-9,
                       pose.rotation * r.position + pose.translation});
    return out;
}

} // namespace launcher::lab
