#include "vlab/oscillation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vlab/errors.hpp"
#include "vlab/kernels.hpp"

namespace vlab {

namespace {

constexpr double kZeroSnap = 1e-14;

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

/// First genuine sign change of the continuation on (0, horizon]: the first
/// crossing whose sign_after is opposite to the sign of x(0+).
double first_return_zero(const Trajectory& x, double horizon, const ZeroRecord& zr) {
    (void)horizon;
    double x0 = x.jump_at_zero ? x.jump_at_zero->second : x.at_node(0);
    if (std::fabs(x0) <= kZeroSnap) x0 = 0.0;
    const int s0 = sign_of(x0);
    for (std::size_t k = 0; k < zr.times.size(); ++k) {
        if (zr.times[k] <= 0.0) continue;
        if (s0 == 0 || zr.signs_after[k] == -s0) return zr.times[k];
    }
    return -1.0;
}

} // namespace

bool ZeroRecord::alternating() const {
    for (std::size_t k = 1; k < signs_after.size(); ++k)
        if (signs_after[k] == signs_after[k - 1] || signs_after[k] == 0) return false;
    return true;
}

double ZeroRecord::min_gap() const {
    double g = std::numeric_limits<double>::infinity();
    for (double v : gaps) g = std::min(g, v);
    return g;
}

ZeroRecord zeros(const Trajectory& x, double from, double to) {
    ZeroRecord r;
    const Grid& g = x.grid;
    const std::int64_t lo = std::max(x.i0, g.node_ceil(from));
    const std::int64_t hi = std::min(x.last_node(), g.node_floor(to));

    int prev_sign = 0;
    double prev_val = 0.0;
    std::int64_t prev_node = 0;
    bool pending_zero = false;
    bool seen_sign = false; // a zero before any nonzero value is not a crossing

    for (std::int64_t i = lo; i <= hi; ++i) {
        double v = x.at_node(i);
        if (i == 0 && x.jump_at_zero) v = x.jump_at_zero->second;
        if (std::fabs(v) <= kZeroSnap) v = 0.0;
        const int s = sign_of(v);
        if (s == 0) {
            if (!pending_zero && seen_sign) {
                r.times.push_back(g.t_of(i));
                r.signs_after.push_back(0); // filled by the next nonzero value
                pending_zero = true;
            }
            continue;
        }
        seen_sign = true;
        if (pending_zero) {
            r.signs_after.back() = s;
            pending_zero = false;
        } else if (prev_sign != 0 && s != prev_sign) {
            const double t_prev = g.t_of(prev_node);
            const double tc = t_prev + g.dt * prev_val / (prev_val - v);
            r.times.push_back(tc);
            r.signs_after.push_back(s);
        }
        prev_sign = s;
        prev_val = v;
        prev_node = i;
    }

    // A trailing zero stretch never resolved into a crossing.
    while (!r.signs_after.empty() && r.signs_after.back() == 0) {
        r.signs_after.pop_back();
        r.times.pop_back();
    }
    r.gaps.resize(r.times.size() > 1 ? r.times.size() - 1 : 0);
    for (std::size_t k = 1; k < r.times.size(); ++k) r.gaps[k - 1] = r.times[k] - r.times[k - 1];
    return r;
}

OscillationVerdict classify(const Trajectory& x, double eps, double window) {
    OscillationVerdict v;
    const ZeroRecord zr = zeros(x, 0.0, window);
    v.crossing_count = zr.times.size();
    v.min_gap = zr.min_gap();
    if (zr.times.empty()) {
        v.degenerate = true;
        v.slowly_oscillating = true; // vacuously
        return v;
    }
    const double gap_floor = 1.0 - eps / 2.0 - 2.0 * x.grid.dt;
    for (std::size_t k = 0; k + 1 < zr.times.size(); ++k) {
        if (zr.gaps[k] < gap_floor)
            v.failures.push_back({{zr.times[k], zr.times[k + 1]}, "gap below 1 - eps/2"});
        if (zr.signs_after[k + 1] == zr.signs_after[k] || zr.signs_after[k + 1] == 0)
            v.failures.push_back({{zr.times[k], zr.times[k + 1]}, "sign not alternating"});
    }
    v.slowly_oscillating = v.failures.empty();
    return v;
}

PoincareResult poincare(const InitialData& b, const NonlinearitySpec& f) {
    const Grid& g = b.grid;
    const double eps = g.eps;

    double z1 = -1.0;
    Trajectory x;
    for (double h : {2.0, 3.0}) {
        x = extend(b, f, h);
        z1 = first_return_zero(x, h, zeros(x, 0.0, h));
        if (z1 > 0.0) break;
    }
    if (!(z1 > 0.0))
        throw NumericsError("poincare: no sign change of the continuation within horizon 3");

    const double T = z1 + 1.0 + eps / 2.0;
    const Trajectory full = extend(b, f, T + 5.0 * g.dt);

    PoincareResult out;
    out.z1 = z1;

    const ZeroRecord after = zeros(full, z1 + 2.0 * g.dt, T);
    if (!after.times.empty()) {
        out.z2 = after.times.front();
        out.tau_u = T - out.z2;
    } else {
        out.z2 = std::numeric_limits<double>::quiet_NaN();
        out.tau_u = 0.0;
    }

    InitialData seg;
    seg.grid = g;
    seg.samples.resize(seg.expected_size());
    const std::int64_t j0 = seg.first_node();
    seg.samples[0] = 0.0; // x_b(z1) by definition of z1
    for (std::size_t j = 1; j < seg.samples.size(); ++j)
        seg.samples[j] = full.value(T + g.t_of(j0 + static_cast<std::int64_t>(j)));
    out.segment = std::move(seg);
    return out;
}

PeriodicOrbit find_periodic(const InitialData& b0, const NonlinearitySpec& f, double tol,
                            int max_iter, double relax) {
    if (!(tol > 0.0)) throw ConfigError("find_periodic: tol must be positive");
    if (!(relax > 0.0 && relax <= 1.0)) throw ConfigError("find_periodic: relax must be in (0, 1]");
    constexpr double kCollapse = 1e-10;

    PeriodicOrbit orbit;
    InitialData u = b0;
    for (int it = 1; it <= max_iter; ++it) {
        if (u.sup_norm() < kCollapse) {
            orbit.degenerate = true;
            orbit.converged = true;
            orbit.iterations = it - 1;
            orbit.segment = u;
            return orbit;
        }
        PoincareResult r = poincare(u, f);
        const double dist =
            kern::max_abs_diff(u.samples.data(), r.segment.samples.data(), u.samples.size());
        orbit.history.push_back(dist);
        orbit.iterations = it;

        if (dist <= 0.5 * tol) {
            // An amplitude comparable to the tolerance cannot resolve an
            // orbit: the iterates collapsed toward the equilibrium instead.
            if (u.sup_norm() < std::max(kCollapse, 4.0 * tol)) {
                orbit.degenerate = true;
                orbit.converged = true;
                orbit.segment = u;
                return orbit;
            }
            // u itself is the fixed point to working accuracy; r = F(u) already
            // measured the defect.
            InitialData ustar = u;
            orbit.residual = dist;
            orbit.tau = r.tau_u;
            orbit.segment = ustar;

            const double horizon = 3.9;
            Trajectory full = extend(ustar, f, horizon);
            ZeroRecord zr = zeros(full, 0.0, horizon);
            if (zr.times.size() < 3)
                throw NumericsError("find_periodic: converged segment has fewer than 3 zeros");
            const double z1 = zr.times[0];
            const double z3 = zr.times[2];
            orbit.orbit_start = z1;
            orbit.period = z3 - z1;
            const Grid& g = b0.grid;
            const std::int64_t lo =
                std::max(full.i0, g.node_floor(z1 - 1.0 - g.eps / 2.0) - 4);
            const std::int64_t hi = std::min(full.last_node(), g.node_ceil(z3) + 4);
            orbit.one_period = slice(full, lo, hi);
            double mn = std::numeric_limits<double>::infinity();
            double mx = -mn;
            for (std::int64_t i = g.node_ceil(z1); i <= g.node_floor(z3); ++i) {
                mn = std::min(mn, full.at_node(i));
                mx = std::max(mx, full.at_node(i));
            }
            orbit.extremes = {mn, mx};
            orbit.converged = true;
            return orbit;
        }

        if (relax < 1.0 && it > 1) {
            for (std::size_t j = 0; j < u.samples.size(); ++j)
                u.samples[j] = (1.0 - relax) * u.samples[j] + relax * r.segment.samples[j];
        } else {
            u = std::move(r.segment);
        }
    }
    orbit.converged = false;
    return orbit;
}

OneSidedDerivative one_sided_slopes_at_z1(const InitialData& b, const NonlinearitySpec& f) {
    const Grid& g = b.grid;
    const double eps = g.eps;
    const Trajectory x = extend(b, f, 2.2);
    const double z1 = first_return_zero(x, 2.2, zeros(x, 0.0, 2.2));
    if (!(z1 > 0.0)) throw NumericsError("one_sided_slopes_at_z1: no zero found");

    const std::int64_t junction = g.K - g.m; // node of t = 1 - eps/2
    const std::int64_t nearest = g.node_nearest(z1);
    OneSidedDerivative d;
    if (nearest == junction && std::fabs(z1 - g.t_of(junction)) < 1e-9) {
        // z1 = 1 - eps/2 exactly: the formulas from the non-differentiable case.
        const double fb_eps = f.eval(x.at_node(-2 * static_cast<std::int64_t>(g.m)));
        const double f_left = f.eval(x.jump_at_zero->first);
        const double f_right = f.eval(x.at_node(0));
        d.left = (f_left - fb_eps) / eps;
        d.right = (f_right - fb_eps) / eps;
        d.split = true;
        return d;
    }
    const double s =
        (f.eval(x.value(z1 - 1.0 + eps / 2.0)) - f.eval(x.value(z1 - 1.0 - eps / 2.0))) / eps;
    d.left = d.right = s;
    return d;
}

} // namespace vlab
