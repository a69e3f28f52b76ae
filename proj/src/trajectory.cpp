#include "vlab/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vlab/errors.hpp"
#include "vlab/kernels.hpp"

namespace vlab {

namespace {

std::vector<double> scaled_window_weights(int m) {
    std::vector<double> w = composite_weights(2 * static_cast<std::int64_t>(m));
    const double s = 1.0 / (2.0 * static_cast<double>(m));
    for (double& v : w) v *= s;
    return w;
}

/// Quadrature of one window at node i for data with a possible jump at node 0.
/// fx_at(node) must return f applied to the stored (right-at-0) sample;
/// fleft0 is f applied to the left limit at node 0, or nullptr if no jump.
template <class FxAt>
double window_mean_impl(const Grid& g, std::int64_t i, FxAt&& fx_at, const double* fleft0,
                        const std::vector<double>& w_scaled) {
    const std::int64_t m = g.m;
    const std::int64_t a = i - g.K - m;
    const std::int64_t e = i - g.K + m;
    const std::int64_t n = 2 * m;

    if (!fleft0 || a >= 0 || e < 0) {
        std::vector<double> v(static_cast<std::size_t>(n) + 1);
        for (std::int64_t j = 0; j <= n; ++j) v[static_cast<std::size_t>(j)] = fx_at(a + j);
        return kern::dot(v.data(), w_scaled.data(), v.size());
    }
    if (e == 0) {
        // Window ends exactly at the jump: the mass is on [a, 0), left limit applies.
        std::vector<double> v(static_cast<std::size_t>(n) + 1);
        for (std::int64_t j = 0; j < n; ++j) v[static_cast<std::size_t>(j)] = fx_at(a + j);
        v.back() = *fleft0;
        return kern::dot(v.data(), w_scaled.data(), v.size());
    }
    if (a == 0) {
        // Window starts at the jump: the stored (right) value is correct.
        std::vector<double> v(static_cast<std::size_t>(n) + 1);
        for (std::int64_t j = 0; j <= n; ++j) v[static_cast<std::size_t>(j)] = fx_at(a + j);
        return kern::dot(v.data(), w_scaled.data(), v.size());
    }
    // Jump strictly inside: integrate [a, 0] and [0, e] separately so each
    // side sees its own one-sided value.
    const std::int64_t nL = -a;
    const std::int64_t nR = e;
    const double inv2m = 1.0 / static_cast<double>(n);
    std::vector<double> vals(static_cast<std::size_t>(nL + nR) + 2);
    std::vector<double> wts(vals.size());
    std::vector<double> wl = composite_weights(nL);
    std::vector<double> wr = composite_weights(nR);
    for (std::int64_t j = 0; j < nL; ++j) {
        vals[static_cast<std::size_t>(j)] = fx_at(a + j);
        wts[static_cast<std::size_t>(j)] = wl[static_cast<std::size_t>(j)] * inv2m;
    }
    vals[static_cast<std::size_t>(nL)] = *fleft0;
    wts[static_cast<std::size_t>(nL)] = wl[static_cast<std::size_t>(nL)] * inv2m;
    for (std::int64_t j = 0; j <= nR; ++j) {
        vals[static_cast<std::size_t>(nL + 1 + j)] = fx_at(j);
        wts[static_cast<std::size_t>(nL + 1 + j)] = wr[static_cast<std::size_t>(j)] * inv2m;
    }
    return kern::dot(vals.data(), wts.data(), vals.size());
}

} // namespace

std::vector<double> composite_weights(std::int64_t n) {
    if (n < 1) throw DomainError("composite_weights: need at least one subinterval");
    std::vector<double> w(static_cast<std::size_t>(n) + 1, 0.0);
    if (n == 1) {
        w[0] = w[1] = 0.5;
        return w;
    }
    std::int64_t simpson_end = n; // Simpson over [0, simpson_end], 3/8 tail beyond
    if (n % 2 != 0) {
        if (n == 3) {
            simpson_end = 0;
        } else {
            simpson_end = n - 3;
        }
    }
    if (simpson_end > 0) {
        w[0] += 1.0 / 3.0;
        for (std::int64_t j = 1; j < simpson_end; ++j)
            w[static_cast<std::size_t>(j)] += (j % 2 == 1) ? 4.0 / 3.0 : 2.0 / 3.0;
        w[static_cast<std::size_t>(simpson_end)] += 1.0 / 3.0;
    }
    if (simpson_end < n) {
        const double c = 3.0 / 8.0;
        w[static_cast<std::size_t>(simpson_end)] += c;
        w[static_cast<std::size_t>(simpson_end + 1)] += 3.0 * c;
        w[static_cast<std::size_t>(simpson_end + 2)] += 3.0 * c;
        w[static_cast<std::size_t>(simpson_end + 3)] += c;
    }
    return w;
}

double InitialData::sup_norm() const {
    return kern::max_abs(samples.data(), samples.size());
}

InitialData InitialData::constant(const Grid& g, double value) {
    InitialData b;
    b.grid = g;
    b.samples.assign(b.expected_size(), value);
    return b;
}

InitialData InitialData::from_function(const Grid& g, const std::function<double(double)>& fn) {
    InitialData b;
    b.grid = g;
    b.samples.resize(b.expected_size());
    const std::int64_t i0 = b.first_node();
    for (std::size_t j = 0; j < b.samples.size(); ++j)
        b.samples[j] = fn(g.t_of(i0 + static_cast<std::int64_t>(j)));
    return b;
}

double Trajectory::value(double t, int side) const {
    const double u = t * static_cast<double>(grid.K);
    const double ur = std::round(u);
    const std::int64_t last = last_node();

    // Branch limits: with a jump at node 0, interpolation must not cross it.
    std::int64_t lo = i0;
    std::int64_t hi = last;
    const bool left_branch = (t < 0.0) || (t == 0.0 && side < 0);
    if (jump_at_zero) {
        if (left_branch)
            hi = std::min<std::int64_t>(hi, 0);
        else
            lo = std::max<std::int64_t>(lo, 0);
    }
    auto branch_at = [&](std::int64_t i) {
        if (jump_at_zero && left_branch && i == 0) return jump_at_zero->first;
        return at_node(i);
    };

    if (std::fabs(u - ur) < 1e-9) {
        const std::int64_t i = static_cast<std::int64_t>(ur);
        if (i < lo || i > hi) throw DomainError("Trajectory::value: t outside samples");
        return branch_at(i);
    }

    std::int64_t s = static_cast<std::int64_t>(std::floor(u)) - 1;
    s = std::max(lo, std::min(s, hi - 3));
    if (s < lo) throw DomainError("Trajectory::value: t outside samples");
    const std::int64_t pts = std::min<std::int64_t>(4, hi - s + 1);
    if (pts < 2) throw DomainError("Trajectory::value: branch too short to interpolate");
    const double x = u - static_cast<double>(s);
    if (pts == 2) return branch_at(s) * (1.0 - x) + branch_at(s + 1) * x;
    if (pts == 3) {
        const double v0 = branch_at(s), v1 = branch_at(s + 1), v2 = branch_at(s + 2);
        return v0 * (x - 1.0) * (x - 2.0) * 0.5 - v1 * x * (x - 2.0) +
               v2 * x * (x - 1.0) * 0.5;
    }
    const double v0 = branch_at(s), v1 = branch_at(s + 1), v2 = branch_at(s + 2),
                 v3 = branch_at(s + 3);
    return -v0 * (x - 1.0) * (x - 2.0) * (x - 3.0) / 6.0 +
           v1 * x * (x - 2.0) * (x - 3.0) * 0.5 -
           v2 * x * (x - 1.0) * (x - 3.0) * 0.5 +
           v3 * x * (x - 1.0) * (x - 2.0) / 6.0;
}

Trajectory extend(const InitialData& b, const NonlinearitySpec& f, double horizon) {
    const Grid& g = b.grid;
    if (b.samples.size() != b.expected_size())
        throw DomainError("extend: initial data does not cover [-1-eps/2, 0]");
    if (!(horizon >= 0.0)) throw DomainError("extend: horizon must be >= 0");

    const std::int64_t m = g.m;
    const std::int64_t K = g.K;
    const std::int64_t N = g.node_nearest(horizon);
    const std::size_t n_init = b.samples.size();
    const std::size_t total = n_init + static_cast<std::size_t>(N);

    Trajectory x;
    x.grid = g;
    x.i0 = b.first_node();
    x.samples.resize(total);
    std::copy(b.samples.begin(), b.samples.end(), x.samples.begin());

    std::vector<double> fx(total);
    for (std::size_t j = 0; j < n_init; ++j) fx[j] = f.eval(b.samples[j]);
    const double left0 = b.samples.back();
    const double fleft0 = fx[n_init - 1];

    const std::vector<double> w = scaled_window_weights(g.m);
    const std::size_t node0_idx = n_init - 1; // index of node 0 in samples/fx

    for (std::int64_t i = 0; i <= N; ++i) {
        const std::int64_t a = i - K - m;
        const std::int64_t e = i - K + m;
        double val;
        if (e < 0 || a >= 0) {
            val = kern::dot(fx.data() + (a - x.i0), w.data(), static_cast<std::size_t>(2 * m) + 1);
        } else {
            val = window_mean_impl(
                g, i, [&](std::int64_t node) { return fx[static_cast<std::size_t>(node - x.i0)]; },
                &fleft0, w);
        }
        if (!std::isfinite(val))
            throw NumericsError("extend: non-finite value at t = " + std::to_string(g.t_of(i)));
        const std::size_t idx = node0_idx + static_cast<std::size_t>(i);
        if (i == 0) {
            x.jump_at_zero = std::make_pair(left0, val);
        }
        x.samples[idx] = val;
        fx[idx] = f.eval(val);
    }
    return x;
}

double window_integral(const Trajectory& x, const NonlinearitySpec& f, std::int64_t node) {
    const Grid& g = x.grid;
    const std::int64_t a = node - g.K - g.m;
    const std::int64_t e = node - g.K + g.m;
    if (!x.covers(a) || !x.covers(e))
        throw DomainError("window_integral: window not covered by samples");
    const std::vector<double> w = scaled_window_weights(g.m);
    double fleft0 = 0.0;
    const double* fl = nullptr;
    if (x.jump_at_zero && a <= 0 && e >= 0) {
        fleft0 = f.eval(x.jump_at_zero->first);
        fl = &fleft0;
    }
    return window_mean_impl(
        g, node, [&](std::int64_t n) { return f.eval(x.at_node(n)); }, fl, w);
}

OneSidedDerivative derivative(const Trajectory& x, const NonlinearitySpec& f,
                              std::int64_t node) {
    const Grid& g = x.grid;
    if (node < 0) throw DomainError("derivative: defined for t >= 0 only");
    const std::int64_t a1 = node - g.K - g.m; // t - 1 - eps/2
    const std::int64_t a2 = node - g.K + g.m; // t - 1 + eps/2
    if (!x.covers(a1) || !x.covers(a2)) throw DomainError("derivative: window not covered");

    const double inv_eps = 1.0 / g.eps;
    OneSidedDerivative d;
    const bool jump = x.jump_at_zero.has_value();
    const double fa1 = f.eval(x.at_node(a1));
    const double fa2 = f.eval(x.at_node(a2));
    if (jump && a2 == 0) {
        const double fl = f.eval(x.jump_at_zero->first);
        d.left = inv_eps * (fl - fa1);
        d.right = inv_eps * (fa2 - fa1);
        d.split = true;
    } else if (jump && a1 == 0) {
        const double fl = f.eval(x.jump_at_zero->first);
        d.left = inv_eps * (fa2 - fl);
        d.right = inv_eps * (fa2 - fa1);
        d.split = true;
    } else if (jump && node == 0) {
        // Right slope from the equation; left slope is the initial datum's
        // sampled backward difference.
        d.right = inv_eps * (fa2 - fa1);
        d.left = (x.jump_at_zero->first - x.at_node(-1)) / g.dt;
        d.split = true;
    } else {
        d.left = d.right = inv_eps * (fa2 - fa1);
    }
    return d;
}

bool sup_bound_check(const Trajectory& x, double R, double slack) {
    double m = kern::max_abs(x.samples.data(), x.samples.size());
    if (x.jump_at_zero) m = std::max(m, std::fabs(x.jump_at_zero->first));
    return m <= R + slack;
}

Trajectory slice(const Trajectory& x, std::int64_t node_lo, std::int64_t node_hi) {
    if (node_lo > node_hi || !x.covers(node_lo) || !x.covers(node_hi))
        throw DomainError("slice: node range not covered");
    Trajectory out;
    out.grid = x.grid;
    out.i0 = node_lo;
    out.samples.assign(x.samples.begin() + static_cast<std::ptrdiff_t>(node_lo - x.i0),
                       x.samples.begin() + static_cast<std::ptrdiff_t>(node_hi - x.i0) + 1);
    if (x.jump_at_zero && node_lo <= 0 && node_hi >= 0) out.jump_at_zero = x.jump_at_zero;
    return out;
}

} // namespace vlab
