#include "vlab/grid.hpp"

#include <cmath>

#include "vlab/errors.hpp"

namespace vlab {

std::int64_t Grid::node_floor(double t) const {
    return static_cast<std::int64_t>(std::floor(t * static_cast<double>(K) + 1e-9));
}

std::int64_t Grid::node_ceil(double t) const {
    return static_cast<std::int64_t>(std::ceil(t * static_cast<double>(K) - 1e-9));
}

std::int64_t Grid::node_nearest(double t) const {
    return static_cast<std::int64_t>(std::llround(t * static_cast<double>(K)));
}

Grid make_grid(double eps_requested, int m) {
    if (!(eps_requested > 0.0) || !(eps_requested < 1.0))
        throw ConfigError("make_grid: eps must lie in (0, 1)");
    if (m < 1) throw ConfigError("make_grid: m must be positive");
    const double two_m = 2.0 * static_cast<double>(m);
    const std::int64_t K = std::llround(two_m / eps_requested);
    if (K < 2 * static_cast<std::int64_t>(m) + 1)
        throw ConfigError("make_grid: requested eps too close to 1 for this m");
    Grid g;
    g.m = m;
    g.K = K;
    g.eps = two_m / static_cast<double>(K);
    g.dt = 1.0 / static_cast<double>(K);
    g.snap_distance = std::fabs(g.eps - eps_requested);
    return g;
}

int default_m(double eps_requested) {
    int base = (eps_requested >= 0.1) ? 10
                                      : std::max(2, static_cast<int>(std::ceil(200.0 * eps_requested)));
    // Prefer an m (searching upward) for which 2m/eps is an integer, so the
    // requested eps is hit exactly.
    for (int m = base; m <= base + 40; ++m) {
        const double k = 2.0 * m / eps_requested;
        if (std::fabs(k - std::llround(k)) < 1e-9 * k) return m;
    }
    return base;
}

} // namespace vlab
