#include "vlab/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vlab/errors.hpp"
#include "vlab/kernels.hpp"
#include "vlab/rng.hpp"
#include "vlab/roots.hpp"

namespace vlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

/// Linear interpolation on a node-sampled vector with first node `first`.
double lerp_nodes(const std::vector<double>& v, std::int64_t first, const Grid& g, double t) {
    double idx = t * static_cast<double>(g.K) - static_cast<double>(first);
    const double max_idx = static_cast<double>(v.size() - 1);
    idx = std::max(0.0, std::min(idx, max_idx));
    std::size_t j = static_cast<std::size_t>(idx);
    if (j >= v.size() - 1) j = v.size() - 2;
    const double frac = idx - static_cast<double>(j);
    return v[j] * (1.0 - frac) + v[j + 1] * frac;
}

/// Linear interpolation of initial data at time t in [-1-eps/2, 0].
double initial_value(const InitialData& b, double t) {
    return lerp_nodes(b.samples, b.first_node(), b.grid, t);
}

double h_tau(double tau, double eps, double t) {
    return t - (tau - eps / 2.0) * (t + 1.0 + eps / 2.0);
}

double h_tau_inv(double tau, double eps, double t) {
    return (t + (tau - eps / 2.0) * (1.0 + eps / 2.0)) / (1.0 - tau + eps / 2.0);
}

} // namespace

double phi0(double tau, double t) { return std::sin(kPi * (t + 1.0 + tau)); }

double lambda0(double fprime0, double eps) {
    if (!(fprime0 < 0.0)) throw DomainError("lambda0: requires f'(0) < 0");
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("lambda0: eps must be in (0, 1)");
    return -fprime0 * (2.0 / (kPi * eps)) * std::sin(kPi * eps / 2.0);
}

double eps0(double fprime0) {
    if (!(fprime0 < -2.0)) throw DomainError("eps0: requires f'(0) < -2");
    const double target = -2.0 / fprime0; // in (0, 1)
    const double x = roots::bisect([&](double y) { return sinc(y) - target; }, 1e-12,
                                   kPi - 1e-12, 1e-14, 300);
    return 2.0 * x / kPi;
}

double eigencheck(double eps, double fprime0, int m) {
    const Grid g = make_grid(eps, m);
    Trajectory x;
    x.grid = g;
    x.i0 = -(g.K + static_cast<std::int64_t>(g.m));
    x.samples.resize(static_cast<std::size_t>(3 * g.K + g.m) + 1);
    for (std::size_t j = 0; j < x.samples.size(); ++j)
        x.samples[j] = std::sin(kPi * g.t_of(x.i0 + static_cast<std::int64_t>(j)));
    const NonlinearitySpec lin = NonlinearitySpec::linear(fprime0);
    const double lam = lambda0(fprime0, g.eps);
    double res = 0.0;
    for (std::int64_t i = 0; i <= 2 * g.K; ++i) {
        const double w = window_integral(x, lin, i);
        res = std::max(res, std::fabs(w - lam * std::sin(kPi * g.t_of(i))));
    }
    return res;
}

double smoothstep(double a, double b, double t) {
    if (!(a < b)) throw DomainError("smoothstep: requires a < b");
    double s = (t - a) / (b - a);
    s = std::max(0.0, std::min(1.0, s));
    return s * s * (3.0 - 2.0 * s);
}

namespace {

/// Extremum of tau_hat -> sin(pi (t + 1 + tau_hat)) on [lo, hi]: endpoint
/// values plus any interior peak/trough (argument t + 1 + tau_hat = k + 1/2).
template <class Cmp>
double phi_family_extremum(double lo, double hi, double t, Cmp better) {
    double best = phi0(lo, t);
    const double v_hi = phi0(hi, t);
    if (better(v_hi, best)) best = v_hi;
    for (double arg0 : {-1.5, -0.5, 0.5, 1.5, 2.5}) {
        const double tau_hat = arg0 - t - 1.0;
        if (tau_hat > lo && tau_hat < hi) {
            const double v = phi0(tau_hat, t);
            if (better(v, best)) best = v;
        }
    }
    return best;
}

} // namespace

double phi_family_max(double tau_lo, double tau_hi, double t) {
    return phi_family_extremum(tau_lo, tau_hi, t, [](double a, double b) { return a > b; });
}

double phi_family_min(double tau_lo, double tau_hi, double t) {
    return phi_family_extremum(tau_lo, tau_hi, t, [](double a, double b) { return a < b; });
}

double gamma_tau(const BarrierContext& c, double tau, double t) {
    const double eps = c.eps;
    if (!(tau > 0.0 && tau <= eps)) throw DomainError("gamma_tau: tau must be in (0, eps]");
    if (t < -1.0 - eps / 2.0 - 1e-12 || t > -tau + 1e-12)
        throw DomainError("gamma_tau: t outside [-1-eps/2, -tau]");

    if (tau <= eps / 2.0) return c.alpha * phi_family_max(tau, eps / 2.0, t);

    const double ts = -0.5 - (eps / 4.0 + tau / 2.0); // tau*: intersection of the two sines
    if (t <= ts - eps) return c.alpha * phi0(eps / 2.0, t);
    if (t < ts - eps / 2.0) {
        const double s = smoothstep(ts - eps, ts - eps / 2.0, t);
        return c.alpha * ((1.0 - s) * phi0(eps / 2.0, t) + s * phi0(tau, t));
    }
    if (t <= ts + eps / 2.0)
        return c.alpha * std::max(phi0(tau, t), phi0(eps / 2.0, t));
    if (t < ts + eps) {
        const double s = smoothstep(ts + eps / 2.0, ts + eps, t);
        return c.alpha * ((1.0 - s) * phi0(eps / 2.0, t) + s * phi0(tau, t));
    }
    return c.alpha * phi0(tau, t);
}

double membership_slack(const BarrierContext& c) {
    return 1e-9 * c.alpha + 2.0 * c.grid.dt * (2.0 * c.R / c.eps);
}

MembershipReport membership(const InitialData& b, const BarrierContext& c, double slack) {
    if (b.grid.K != c.grid.K || b.grid.m != c.grid.m)
        throw DomainError("membership: data grid does not match context grid");
    if (slack < 0.0) slack = membership_slack(c);
    const Grid& g = b.grid;
    const double eps = c.eps;
    MembershipReport rep;
    rep.sup_norm = b.sup_norm();

    const double c0_tol = 1e-9 * std::max(1.0, rep.sup_norm);
    if (std::fabs(b.samples.front()) > c0_tol) {
        rep.reason = "left endpoint b(-1-eps/2) differs from 0 (not in C0)";
        return rep;
    }

    // Unique zero in [-eps, 0): scan the last 2m node intervals.
    const std::int64_t m2 = 2 * static_cast<std::int64_t>(g.m);
    std::vector<double> crossings;
    int prev_sign = 0;
    double prev_val = 0.0;
    std::int64_t prev_node = 0;
    bool pending_zero = false;
    for (std::int64_t i = -m2; i <= 0; ++i) {
        double v = b.at_node(i);
        if (std::fabs(v) <= 1e-14) v = 0.0;
        const int s = (v > 0.0) - (v < 0.0);
        if (s == 0) {
            if (!pending_zero) {
                crossings.push_back(g.t_of(i));
                pending_zero = true;
            }
            prev_sign = 0;
            continue;
        }
        if (!pending_zero && prev_sign != 0 && s != prev_sign) {
            const double t_prev = g.t_of(prev_node);
            crossings.push_back(t_prev + g.dt * prev_val / (prev_val - v));
        }
        pending_zero = false;
        prev_sign = s;
        prev_val = v;
        prev_node = i;
    }
    // The node -2m may itself continue a sign change from the left neighbour.
    {
        double va = b.at_node(-m2 - 1);
        double vb = b.at_node(-m2);
        if (std::fabs(va) <= 1e-14) va = 0.0;
        if (std::fabs(vb) <= 1e-14) vb = 0.0;
        if (va != 0.0 && vb != 0.0 && (va > 0.0) != (vb > 0.0)) {
            const double tc = g.t_of(-m2 - 1) + g.dt * va / (va - vb);
            if (tc >= -eps) crossings.insert(crossings.begin(), tc);
        }
    }
    if (crossings.empty()) {
        rep.reason = "no sign change in (0, eps]";
        return rep;
    }
    if (crossings.size() > 1) {
        rep.reason = "multiple sign changes in (0, eps]";
        return rep;
    }
    rep.tau = -crossings.front();
    if (!(rep.tau > 0.0)) {
        rep.reason = "zero located at t = 0, tau not in (0, eps]";
        return rep;
    }
    if (rep.tau > eps / 2.0) rep.tau_star = -0.5 - (eps / 4.0 + rep.tau / 2.0);

    // Barrier inequalities at every node.
    double worst_lo = 0.0, worst_hi = 0.0;
    for (std::int64_t i = b.first_node(); i <= 0; ++i) {
        const double t = g.t_of(i);
        const double v = b.at_node(i);
        if (t <= -rep.tau) {
            worst_lo = std::max(worst_lo, gamma_tau(c, rep.tau, t) - v);
        } else {
            worst_hi = std::max(worst_hi, v - c.alpha * phi0(rep.tau, t));
        }
    }
    rep.worst_lower_violation = worst_lo;
    rep.worst_upper_violation = worst_hi;

    if (worst_lo > slack) {
        rep.reason = "lower barrier gamma_tau violated";
        return rep;
    }
    if (worst_hi > slack) {
        rep.reason = "upper barrier alpha phi0^tau violated";
        return rep;
    }
    if (rep.tau < c.tau0) {
        rep.reason = "tau below tau0";
        return rep;
    }
    if (rep.sup_norm > c.R + slack) {
        rep.reason = "sup norm above R";
        return rep;
    }
    rep.member = true;
    return rep;
}

SplitData xi1(const InitialData& b, const BarrierContext& c) {
    const MembershipReport mem = membership(b, c);
    if (!mem.member) throw DomainError("xi1: input is not a member: " + mem.reason);
    const Grid& g = b.grid;
    const double eps = c.eps;
    const double tau = mem.tau;
    const std::int64_t m = g.m;
    const std::int64_t Km = g.K + m;

    SplitData out;
    out.tau = tau;
    out.b1.resize(static_cast<std::size_t>(g.K) + 1);
    for (std::size_t j = 0; j < out.b1.size(); ++j) {
        const double t = g.t_of(-Km + static_cast<std::int64_t>(j));
        out.b1[j] = initial_value(b, h_tau(tau, eps, t));
    }
    out.b2.resize(static_cast<std::size_t>(m) + 1);
    for (std::size_t j = 0; j < out.b2.size(); ++j) {
        const double t = g.t_of(-m + static_cast<std::int64_t>(j));
        out.b2[j] = initial_value(b, (2.0 * tau / eps) * t);
    }
    return out;
}

InitialData xi1_inverse(const SplitData& v, const BarrierContext& c) {
    const Grid& g = c.grid;
    const double eps = c.eps;
    const double tau = v.tau;
    InitialData u;
    u.grid = g;
    u.samples.resize(u.expected_size());
    const std::int64_t first = u.first_node();
    for (std::size_t j = 0; j < u.samples.size(); ++j) {
        const double t = g.t_of(first + static_cast<std::int64_t>(j));
        if (t <= -tau) {
            u.samples[j] = lerp_nodes(v.b1, first, g, h_tau_inv(tau, eps, t));
        } else {
            u.samples[j] = lerp_nodes(v.b2, -static_cast<std::int64_t>(g.m), g,
                                      (eps / (2.0 * tau)) * t);
        }
    }
    return u;
}

SplitData xi2(const SplitData& v, const BarrierContext& c) {
    const Grid& g = c.grid;
    const double eps = c.eps;
    SplitData w = v;
    const std::int64_t first = -(g.K + static_cast<std::int64_t>(g.m));
    for (std::size_t j = 0; j < w.b1.size(); ++j) {
        const double t = g.t_of(first + static_cast<std::int64_t>(j));
        w.b1[j] = v.b1[j] - gamma_tau(c, v.tau, h_tau(v.tau, eps, t));
    }
    for (std::size_t j = 0; j < w.b2.size(); ++j) {
        const double t = g.t_of(-static_cast<std::int64_t>(g.m) + static_cast<std::int64_t>(j));
        w.b2[j] = v.b2[j] - c.alpha * phi0(v.tau, (2.0 * v.tau / eps) * t);
    }
    return w;
}

SplitData xi2_inverse(const SplitData& w, const BarrierContext& c) {
    const Grid& g = c.grid;
    const double eps = c.eps;
    SplitData v = w;
    const std::int64_t first = -(g.K + static_cast<std::int64_t>(g.m));
    for (std::size_t j = 0; j < v.b1.size(); ++j) {
        const double t = g.t_of(first + static_cast<std::int64_t>(j));
        v.b1[j] = w.b1[j] + gamma_tau(c, w.tau, h_tau(w.tau, eps, t));
    }
    for (std::size_t j = 0; j < v.b2.size(); ++j) {
        const double t = g.t_of(-static_cast<std::int64_t>(g.m) + static_cast<std::int64_t>(j));
        v.b2[j] = w.b2[j] + c.alpha * phi0(w.tau, (2.0 * w.tau / eps) * t);
    }
    return v;
}

InitialData generate_initial(const BarrierContext& c, double tau, double amplitude_factor,
                             std::uint64_t seed) {
    const Grid& g = c.grid;
    const double eps = c.eps;
    if (!(amplitude_factor >= 1.0))
        throw DomainError("generate_initial: amplitude_factor must be >= 1");
    // Snap the zero offset to a grid node so that b(-tau) = 0 exactly and the
    // membership check recovers the same tau bit for bit.
    const std::int64_t tau_node = g.node_nearest(tau);
    tau = g.t_of(tau_node);
    if (!(tau >= c.tau0 && tau <= eps))
        throw DomainError("generate_initial: tau must lie in [tau0, eps] (after grid snap)");

    SplitMix64 rng(seed);
    const double p1 = 0.08 * rng.next_symmetric();
    const double p2 = 0.05 * rng.next_symmetric();
    const double neg_scale = 1.0 + 0.10 * rng.next_unit();

    const double L = 1.0 + eps / 2.0 - tau;
    InitialData b;
    b.grid = g;
    b.samples.resize(b.expected_size());
    const std::int64_t first = b.first_node();
    for (std::size_t j = 0; j < b.samples.size(); ++j) {
        const std::int64_t node = first + static_cast<std::int64_t>(j);
        const double t = g.t_of(node);
        const double phase = kPi * (t + 1.0 + eps / 2.0) / L;
        double v = amplitude_factor * c.alpha * std::sin(phase);
        if (node <= -tau_node) {
            v += c.alpha * (p1 * std::sin(2.0 * phase) + p2 * std::sin(3.0 * phase));
            v = std::max(v, gamma_tau(c, tau, t));
        } else {
            v *= neg_scale;
            v = std::min(v, c.alpha * phi0(tau, t));
        }
        b.samples[j] = v;
    }
    b.samples.front() = 0.0;
    b.at_node(-tau_node) = 0.0;

    const MembershipReport mem = membership(b, c, 1e-9 * c.alpha + 1e-12);
    if (!mem.member)
        throw NumericsError("generate_initial: certification failed: " + mem.reason);
    return b;
}

BarrierContext budget(const NonlinearitySpec& f, const Grid& grid, double R_floor) {
    const FeedbackReport rep = validate(f, 200001);
    if (!rep.pass)
        throw DomainError("budget: feedback spec does not satisfy the standing assumptions");
    if (!(rep.fprime0 < -2.0))
        throw DomainError("budget: requires f'(0) < -2");
    const double lam = lambda0(rep.fprime0, grid.eps);
    if (!(lam > 2.0 + 1e-12))
        throw DomainError(
            "budget: lambda0 <= 2 at this eps (eps exceeds eps0); bullet "
            "lambda0 (1 + delta0/f'(0)) >= 2 is infeasible");

    const AnalysisConstants ac = analysis_constants(f, R_floor);

    const double delta_max = (2.0 / lam - 1.0) * rep.fprime0;
    const double delta0 = 0.5 * delta_max;
    const double slope_target = rep.fprime0 + delta0; // < 0

    // alpha0: largest radius on which f(x)/x <= f'(0) + delta0.
    const double a_hi = std::min(ac.A0, std::min(-f.eval_lo, f.eval_hi));
    const long n = 200000;
    const double step = a_hi / static_cast<double>(n);
    double alpha0 = 0.0;
    for (long i = 1; i <= n; ++i) {
        const double x = step * static_cast<double>(i);
        if (f.eval(x) / x > slope_target || f.eval(-x) / (-x) > slope_target) break;
        alpha0 = x;
    }
    if (alpha0 == 0.0)
        throw DomainError("budget: local slope bound f(x)/x <= f'(0)+delta0 fails near 0");

    BarrierContext c;
    c.grid = grid;
    c.eps = grid.eps;
    c.fprime0 = rep.fprime0;
    c.lambda0 = lam;
    c.delta0 = delta0;
    c.alpha0 = alpha0;
    c.a0 = ac.a0;
    c.A0 = ac.A0;
    c.R = ac.R;
    c.alpha = 0.5 * std::min(alpha0, ac.a0) / lam;
    const double budget_factor = 1.0 + delta0 / rep.fprime0;
    c.tau0 = 0.5 * (c.alpha * c.eps * lam * std::sin(kPi * c.eps / 2.0) * budget_factor /
                    (2.0 * c.R));
    if (!(c.tau0 > 0.0 && c.tau0 < c.eps / 2.0))
        throw DomainError("budget: tau0 bound fell outside (0, eps/2)");
    return c;
}

} // namespace vlab
