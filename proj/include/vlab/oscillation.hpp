#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "vlab/trajectory.hpp"

namespace vlab {

/// Ordered zero crossings of a trajectory with sign after each crossing.
struct ZeroRecord {
    std::vector<double> times;
    std::vector<int> signs_after; // +1 upward crossing, -1 downward
    std::vector<double> gaps;     // consecutive differences of times

    bool alternating() const;
    double min_gap() const;
};

/// Crossing times in [from, to] by linear interpolation between bracketing
/// nodes. Node values with |x| <= 1e-14 are snapped to zero and counted once,
/// attributed to the left bracket.
ZeroRecord zeros(const Trajectory& x, double from, double to);

struct OscillationVerdict {
    bool slowly_oscillating = false;
    bool degenerate = false; // no crossings at all (e.g. x == 0)
    double min_gap = 0.0;
    std::size_t crossing_count = 0;
    std::vector<std::pair<std::pair<double, double>, std::string>> failures;
};

/// Slow-oscillation test on [0, window]: all zero gaps >= 1 - eps/2 - 2dt and
/// strictly alternating signs.
OscillationVerdict classify(const Trajectory& x, double eps, double window);

struct PoincareResult {
    InitialData segment; // x_b(z1 + 1 + eps/2 + t), t in [-1-eps/2, 0], on grid nodes
    double z1 = 0.0;
    double tau_u = 0.0;  // z1 + 1 + eps/2 - z2: first-zero offset of the segment
    double z2 = 0.0;
};

/// First-return map: extends b past its first positive zero z1 and returns
/// the shifted segment, which lies in C0 (left endpoint exactly 0).
/// Throws NumericsError if no upward zero appears within horizon 3.
PoincareResult poincare(const InitialData& b, const NonlinearitySpec& f);

struct PeriodicOrbit {
    Trajectory one_period;  // continuation slice covering [z1 - 1 - eps/2, z3] + margin
    double orbit_start = 0.0; // z1 of the final continuation
    double period = 0.0;      // z3 - z1
    double residual = 0.0;    // sup-norm defect of one further return-map application
    std::pair<double, double> extremes{0.0, 0.0};
    double tau = 0.0;         // zero offset of the converged segment
    int iterations = 0;
    bool converged = false;
    bool degenerate = false;  // iterates collapsed toward the trivial equilibrium
    std::vector<double> history; // sup distance per iteration
    InitialData segment;      // the converged return-map fixed point
};

/// Fixed-point iteration of the Poincare map. Stops when the sup distance of
/// consecutive segments drops below tol/2, then measures the residual with
/// one further application. relax in (0,1] damps the update:
/// u <- (1-relax) u + relax F(u); fixed points are unchanged.
PeriodicOrbit find_periodic(const InitialData& b0, const NonlinearitySpec& f, double tol,
                            int max_iter, double relax = 1.0);

/// The two half-derivatives of the continuation at its first positive zero
/// (equal when x_b is differentiable there, i.e. z1 != 1 - eps/2).
OneSidedDerivative one_sided_slopes_at_z1(const InitialData& b, const NonlinearitySpec& f);

} // namespace vlab
