#include "vlab/gurtin.hpp"

#include <algorithm>
#include <cmath>

#include "vlab/barriers.hpp"
#include "vlab/errors.hpp"
#include "vlab/roots.hpp"

namespace vlab {

namespace {

double ricker(double alpha, double x) { return alpha * x * std::exp(-x); }

} // namespace

double GurtinConfig::f(double x) const { return ricker(alpha, x); }

double kappa_fixed_point(const std::function<double(double)>& f, double lo, double hi) {
    auto g = [&](double x) { return f(x) - x; };
    const double root = roots::bisect(g, lo, hi, 1e-14, 300);
    if (std::fabs(g(root)) > 1e-12)
        throw NumericsError("kappa_fixed_point: residual above 1e-12");
    return root;
}

GurtinConfig make_gurtin_config(double alpha_ricker, double mu, double eps,
                                double x_clamp_override) {
    if (!(alpha_ricker > std::exp(1.0)))
        throw ConfigError("gurtin: Ricker alpha must exceed e so that kappa > 1 and x_star exists");
    if (!(mu >= 0.0)) throw ConfigError("gurtin: mu must be >= 0");
    GurtinConfig cfg;
    cfg.alpha = alpha_ricker;
    cfg.mu = mu;
    cfg.eps = eps;
    auto f = [&](double x) { return ricker(alpha_ricker, x); };
    const double ln_alpha = std::log(alpha_ricker);
    cfg.kappa = kappa_fixed_point(f, 0.5 * ln_alpha, 2.0 * ln_alpha + 1.0);
    cfg.fprime_kappa = 1.0 - ln_alpha;
    cfg.f_norm = alpha_ricker / std::exp(1.0);
    cfg.f_of_norm = f(cfg.f_norm);
    // x_star: the unique solution of f(x) = kappa below kappa (f is increasing
    // on (0,1) and kappa > 1 here, so the root sits in (0, 1)).
    cfg.x_star = roots::bisect([&](double x) { return f(x) - cfg.kappa; }, 1e-12, 1.0, 1e-14);
    cfg.clamp_window_ok = cfg.x_star < cfg.f_of_norm;
    if (x_clamp_override > 0.0) {
        cfg.x_clamp = x_clamp_override;
    } else if (cfg.clamp_window_ok) {
        cfg.x_clamp = 0.5 * (cfg.x_star + cfg.f_of_norm);
    } else {
        // Hypothesis window empty; any clamp in (x_star, kappa) keeps the
        // negative-feedback frame of the shifted equation.
        cfg.x_clamp = 1.5 * cfg.x_star;
    }
    if (!(cfg.x_clamp > cfg.x_star && cfg.x_clamp < cfg.kappa))
        throw ConfigError("gurtin: x_clamp must lie in (x_star, kappa)");
    return cfg;
}

NonlinearitySpec shift_clamp(const GurtinConfig& cfg) {
    NonlinearitySpec F;
    F.kind = FeedbackKind::ricker_shifted;
    F.params = {cfg.alpha, cfg.kappa, cfg.x_clamp};
    F.eval_lo = -(cfg.kappa + 2.0);
    F.eval_hi = cfg.f_norm - cfg.kappa + 2.0;
    return F;
}

double kernel_check(double mu, double eps, int m) {
    (void)mu; // the uniform weighted kernel absorbs the mortality factor
    return kernel_check([eps](double) { return 1.0 / eps; }, eps, m);
}

double kernel_check(const std::function<double(double)>& weighted_kernel, double eps, int m) {
    const std::vector<double> w = composite_weights(2 * static_cast<std::int64_t>(m));
    const double dt = eps / (2.0 * static_cast<double>(m));
    double acc = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
        const double a = 1.0 - eps / 2.0 + dt * static_cast<double>(j);
        acc += w[j] * weighted_kernel(a);
    }
    return acc * dt;
}

std::vector<double> reconstruct_density(const Trajectory& b, const std::vector<double>& u0,
                                        double mu, double age_max, double t) {
    const Grid& g = b.grid;
    const std::int64_t it = g.node_nearest(t);
    if (it < 0 || !b.covers(it))
        throw DomainError("reconstruct_density: t beyond the birth-rate horizon");
    const std::int64_t na = g.node_nearest(age_max);
    std::vector<double> u(static_cast<std::size_t>(na) + 1);
    for (std::int64_t j = 0; j <= na; ++j) {
        const double a = g.t_of(j);
        if (j >= it) {
            const std::size_t k = static_cast<std::size_t>(j - it);
            u[static_cast<std::size_t>(j)] =
                k < u0.size() ? std::exp(-mu * t) * u0[k] : 0.0;
        } else {
            u[static_cast<std::size_t>(j)] = std::exp(-mu * a) * b.at_node(it - j);
        }
    }
    return u;
}

AsymptoticDemo asymptotic_demo(const GurtinConfig& cfg, const Grid& grid, double tol,
                               int max_iter, double relax) {
    AsymptoticDemo demo;
    demo.hypothesis_ok = cfg.fprime_kappa < -2.0 && grid.eps <= eps0(cfg.fprime_kappa);
    if (!demo.hypothesis_ok) return demo; // warning path: no orbit claimed

    const NonlinearitySpec F = shift_clamp(cfg);

    // Start from certified barrier data when the budget is feasible, else
    // from a small constant displacement.
    InitialData b0 = InitialData::constant(grid, 0.1 * cfg.kappa);
    if (cfg.fprime_kappa < -2.0) {
        try {
            const BarrierContext ctx = budget(F, grid);
            b0 = generate_initial(ctx, 0.5 * ctx.eps, 1.5, 20240801ULL);
        } catch (const DomainError&) {
        } catch (const NumericsError&) {
        }
    }

    demo.zeta_orbit = find_periodic(b0, F, tol, max_iter, relax);
    demo.relax_used = relax;
    if (!demo.zeta_orbit.converged && relax == 1.0) {
        // Plain iteration can diverge when the orbit is unstable under the
        // return map; damping changes no fixed point, so retry once.
        demo.zeta_orbit = find_periodic(b0, F, tol, max_iter, 0.5);
        demo.relax_used = 0.5;
    }
    demo.converged = demo.zeta_orbit.converged && !demo.zeta_orbit.degenerate;
    if (!demo.converged) return demo;

    // Map back: B = zeta + kappa, b = f(B), on the stored orbit slice.
    const Trajectory& zeta = demo.zeta_orbit.one_period;
    demo.capital_b = zeta;
    demo.birth = zeta;
    for (std::size_t j = 0; j < zeta.samples.size(); ++j) {
        const double B = zeta.samples[j] + cfg.kappa;
        demo.capital_b.samples[j] = B;
        demo.birth.samples[j] = cfg.f(B);
    }
    if (demo.capital_b.jump_at_zero) {
        demo.capital_b.jump_at_zero->first += cfg.kappa;
        demo.capital_b.jump_at_zero->second += cfg.kappa;
        demo.birth.jump_at_zero->first = cfg.f(demo.capital_b.jump_at_zero->first);
        demo.birth.jump_at_zero->second = cfg.f(demo.capital_b.jump_at_zero->second);
    }

    // Residual of the omega-limit equation B(t) = (1/eps) int b(t-a) da over
    // one period, evaluated by the window quadrature on the b samples.
    const Grid& g = grid;
    const std::int64_t lo = g.node_ceil(demo.zeta_orbit.orbit_start);
    const std::int64_t hi = g.node_floor(demo.zeta_orbit.orbit_start + demo.zeta_orbit.period);
    const NonlinearitySpec identity = NonlinearitySpec::linear(1.0);
    double res = 0.0;
    double bmin = demo.birth.samples[0];
    for (std::int64_t i = lo; i <= hi; ++i) {
        const double w = window_integral(demo.birth, identity, i);
        res = std::max(res, std::fabs(demo.capital_b.at_node(i) - w));
        bmin = std::min(bmin, demo.birth.at_node(i));
    }
    demo.b_residual = res;
    demo.b_min = bmin;

    // Density snapshots against the stationary-shaped profile
    // u0(a) = kappa e^{-mu a}.
    const double age_max = 2.0;
    std::vector<double> u0(static_cast<std::size_t>(g.node_nearest(age_max)) + 1);
    for (std::size_t k = 0; k < u0.size(); ++k)
        u0[k] = cfg.kappa * std::exp(-cfg.mu * g.t_of(static_cast<std::int64_t>(k)));
    const double t_last = g.t_of(hi);
    for (double frac : {0.0, 0.5, 1.0}) {
        const double t = g.t_of(g.node_nearest(frac * t_last));
        if (g.node_nearest(t) < 0) continue;
        demo.snapshots.emplace_back(t, reconstruct_density(demo.birth, u0, cfg.mu, age_max, t));
    }
    return demo;
}

} // namespace vlab
