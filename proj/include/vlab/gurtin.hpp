#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "vlab/nonlinearity.hpp"
#include "vlab/oscillation.hpp"

namespace vlab {

/// Ricker birth function f(x) = alpha x e^{-x} and the constants of the
/// renewal reduction: kappa (positive fixed point), x_star (unique value
/// below kappa with f(x_star) = kappa) and the clamp point x_clamp.
struct GurtinConfig {
    double alpha = 0.0;
    double mu = 0.0;
    double eps = 0.0;
    double kappa = 0.0;
    double x_star = 0.0;
    double x_clamp = 0.0;
    double f_norm = 0.0;          // ||f|| = alpha/e
    double f_of_norm = 0.0;       // f(||f||)
    bool clamp_window_ok = false; // x_star < f(||f||): default clamp window nonempty
    double fprime_kappa = 0.0;    // 1 - ln(alpha)

    double f(double x) const;
};

/// Resolves kappa, x_star and x_clamp for the Ricker family. When the
/// hypothesis window (x_star, f(||f||)) is nonempty, x_clamp defaults to its
/// midpoint; otherwise 1.5 x_star is used and clamp_window_ok is false.
GurtinConfig make_gurtin_config(double alpha_ricker, double mu, double eps,
                                double x_clamp_override = 0.0);

/// Bisection root of f(x) = x in [lo, hi], residual <= 1e-12.
double kappa_fixed_point(const std::function<double(double)>& f, double lo, double hi);

/// The shifted and clamped feedback F(t) = f(t + kappa) - kappa for
/// t >= x_clamp - kappa, constant f(x_clamp) - kappa below.
NonlinearitySpec shift_clamp(const GurtinConfig& cfg);

/// Quadrature of the weighted-kernel normalization integral for the uniform
/// choice gamma(a) e^{-mu a} = 1/eps on [1-eps/2, 1+eps/2]; equals 1 up to
/// rounding for every (mu, eps).
double kernel_check(double mu, double eps, int m);

/// Same check for a user-supplied weighted kernel a -> gamma(a) e^{-mu a}
/// supported on the window; reports the actual normalization value.
double kernel_check(const std::function<double(double)>& weighted_kernel, double eps, int m);

/// Age density by characteristics: u(t,a) = e^{-mu t} u0(a-t) for a >= t,
/// e^{-mu a} b(t-a) for t >= a, sampled on the age grid (spacing dt).
std::vector<double> reconstruct_density(const Trajectory& b, const std::vector<double>& u0,
                                        double mu, double age_max, double t);

struct AsymptoticDemo {
    bool hypothesis_ok = false; // f'(kappa) < -2 and eps <= eps0
    bool converged = false;
    double relax_used = 1.0;    // damping that produced the orbit
    PeriodicOrbit zeta_orbit;   // orbit of the shifted equation
    Trajectory birth;           // b(t) = f(B(t)) on the orbit slice
    Trajectory capital_b;       // B(t) = zeta(t) + kappa
    double b_min = 0.0;
    double b_residual = 0.0;    // defect of B(t) = (1/eps) int b over the window
    std::vector<std::pair<double, std::vector<double>>> snapshots; // (t, u(t,.))
};

/// Runs the reduction end to end: orbit of the shifted equation, birth rate
/// b = f(B), positivity, omega-limit residual, and density snapshots against
/// u0(a) = kappa e^{-mu a}.
AsymptoticDemo asymptotic_demo(const GurtinConfig& cfg, const Grid& grid, double tol,
                               int max_iter, double relax = 1.0);

} // namespace vlab
