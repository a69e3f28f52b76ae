#pragma once

#include <cstdint>

namespace vlab {

/// Uniform time grid commensurate with the window width eps. dt = 1/K for an
/// integer K, and eps = 2m/K, so the delay endpoints 1 and 1 +- eps/2 are
/// exact nodes and the window integral spans exactly 2m subintervals.
struct Grid {
    int m = 0;          // half-window subinterval count; window has 2m subintervals
    std::int64_t K = 0; // nodes per unit time
    double eps = 0.0;   // 2m/K
    double dt = 0.0;    // 1/K
    double snap_distance = 0.0; // |eps - eps_requested|

    double t_of(std::int64_t i) const { return static_cast<double>(i) * dt; }
    std::int64_t node_floor(double t) const;
    std::int64_t node_ceil(double t) const;
    std::int64_t node_nearest(double t) const;
};

/// Builds the grid whose eps = 2m/K for the integer K nearest to
/// 2m/eps_requested. Rejects parameters that would force eps >= 1.
Grid make_grid(double eps_requested, int m);

/// Smallest m >= 2 giving dt <= 1/400 (m = 10 for eps >= 0.1), preferring an
/// m that makes eps_requested exactly representable as 2m/K.
int default_m(double eps_requested);

} // namespace vlab
