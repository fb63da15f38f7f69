#pragma once

namespace launcher::lab {

/// ITTF playing surface plus the relaxation used by the region filter.
struct TableRegion
{
    double length = 2.74;
    double width = 1.525;
    double height = 0.76;
    double margin_x = 0.5;
    double margin_y = 0.5;

    bool in_relaxed(double x, double y) const noexcept;
    bool on_table(double x, double y) const noexcept;
};

} // namespace launcher::lab
