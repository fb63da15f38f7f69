#include "launcher/lab/table.hpp"

#include <cmath>

namespace launcher::lab {

bool TableRegion::in_relaxed(double x, double y) const noexcept
{
    return std::abs(x) <= length + margin_x && std::abs(y) <= 0.5 * width + margin_y;
}

bool TableRegion::on_table(double x, double y) const noexcept
{
    return x >= 0.0 && x <= length && std::abs(y) <= 0.5 * width;
}

} // namespace launcher::lab
