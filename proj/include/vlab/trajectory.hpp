#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "vlab/grid.hpp"
#include "vlab/nonlinearity.hpp"

namespace vlab {

/// Initial data b on [-1-eps/2, 0], sampled at every node. Node indices run
/// from -(K+m) to 0.
struct InitialData {
    Grid grid;
    std::vector<double> samples; // samples[j] = b at node first_node()+j
    bool continuity = true;

    std::int64_t first_node() const { return -(grid.K + static_cast<std::int64_t>(grid.m)); }
    std::size_t expected_size() const { return static_cast<std::size_t>(grid.K + grid.m) + 1; }
    double at_node(std::int64_t i) const { return samples[static_cast<std::size_t>(i - first_node())]; }
    double& at_node(std::int64_t i) { return samples[static_cast<std::size_t>(i - first_node())]; }
    double sup_norm() const;

    static InitialData constant(const Grid& g, double value);
    static InitialData from_function(const Grid& g, const std::function<double(double)>& fn);
};

/// A continuation x_b sampled on grid nodes. The restriction to [t0, 0) comes
/// from the initial data and the restriction to [0, horizon] from the
/// recurrence; the two one-sided values at t = 0 are kept separately, with
/// the stored node-0 sample holding the continuation (right) value.
struct Trajectory {
    Grid grid;
    std::int64_t i0 = 0;         // first node
    std::vector<double> samples; // node i0 .. i0+size-1
    std::optional<std::pair<double, double>> jump_at_zero; // (left, right)

    std::int64_t last_node() const { return i0 + static_cast<std::int64_t>(samples.size()) - 1; }
    bool covers(std::int64_t i) const { return i >= i0 && i <= last_node(); }
    double at_node(std::int64_t i) const { return samples[static_cast<std::size_t>(i - i0)]; }
    double t_begin() const { return grid.t_of(i0); }
    double t_end() const { return grid.t_of(last_node()); }

    /// Interpolated value at time t (4-point Lagrange, clamped stencil).
    /// side < 0 requests the left-limit branch at the t = 0 jump.
    double value(double t, int side = +1) const;
};

/// Method of steps: extends initial data to [0, horizon] by evaluating the
/// window quadrature node by node. Records the jump at t = 0. Throws
/// NumericsError with the offending time if f returns a non-finite value.
Trajectory extend(const InitialData& b, const NonlinearitySpec& f, double horizon);

/// Composite quadrature of (1/eps) * integral of f(x(s)) over the window
/// [t-1-eps/2, t-1+eps/2] at node i, from stored samples only. Windows that
/// straddle the t = 0 jump are split there, each side integrated with its own
/// one-sided value.
double window_integral(const Trajectory& x, const NonlinearitySpec& f, std::int64_t node);

struct OneSidedDerivative {
    double left = 0.0;
    double right = 0.0;
    bool split = false;
};

/// x'(t) = (1/eps) [f(x(t-1+eps/2)) - f(x(t-1-eps/2))] at a node t >= 0.
/// At the junction nodes t in {0, 1-eps/2, 1+eps/2} both one-sided values
/// are returned.
OneSidedDerivative derivative(const Trajectory& x, const NonlinearitySpec& f,
                              std::int64_t node);

/// True iff |x| <= R + slack at every stored node (jump left value included).
bool sup_bound_check(const Trajectory& x, double R, double slack = 1e-9);

/// Unit-spacing composite Newton-Cotes weights over n subintervals: Simpson
/// when n is even, Simpson with a 3/8 tail when odd (trapezoid for n = 1).
/// Length n+1, sums to n.
std::vector<double> composite_weights(std::int64_t n);

/// Slices [node_lo, node_hi] out of a trajectory (samples shared by copy).
Trajectory slice(const Trajectory& x, std::int64_t node_lo, std::int64_t node_hi);

} // namespace vlab
