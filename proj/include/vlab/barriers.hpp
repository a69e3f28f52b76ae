#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vlab/nonlinearity.hpp"
#include "vlab/trajectory.hpp"

namespace vlab {

/// Everything needed to evaluate the eigenfunction barriers and the
/// invariant-set membership tests: the smallness budget of the analysis
/// (delta0, alpha0, alpha, tau0) plus the function constants (a0, A0, R).
struct BarrierContext {
    Grid grid;
    double eps = 0.0;
    double alpha = 0.0;
    double tau0 = 0.0;
    double delta0 = 0.0;
    double alpha0 = 0.0;
    double a0 = 0.0;
    double A0 = 0.0;
    double R = 0.0;
    double lambda0 = 0.0;
    double fprime0 = 0.0;

    double budget_factor() const { return 1.0 + delta0 / fprime0; } // in (0, 1)
};

/// Shifted principal eigenfunction phi_0^tau(t) = sin(pi (t + 1 + tau)).
double phi0(double tau, double t);

/// Principal eigenvalue of the linearised window operator:
/// lambda_0 = -f'(0) (2 / pi eps) sin(pi eps / 2).
double lambda0(double fprime0, double eps);

/// Threshold eps_0: smallest positive solution of
/// sin(pi e/2)/(pi e/2) = -2/f'(0). Requires f'(0) < -2.
double eps0(double fprime0);

/// Applies the discrete window operator with linear slope-f'(0) feedback to
/// sampled sin(pi t) over one period and returns max |result - lambda0 phi0|.
double eigencheck(double eps, double fprime0, int m);

/// Cubic smoothstep: 0 for t <= a, 1 for t >= b, 3s^2 - 2s^3 between.
double smoothstep(double a, double b, double t);

/// max / min over tau_hat in [tau_lo, tau_hi] of phi0^tau_hat(t), by the
/// clamped interior extremum of the shifted sine.
double phi_family_max(double tau_lo, double tau_hi, double t);
double phi_family_min(double tau_lo, double tau_hi, double t);

/// Lower barrier gamma_tau(t) on [-1-eps/2, -tau]. For tau <= eps/2 the max
/// over the eigenfunction family; for tau > eps/2 the three-piece blended
/// formula with tau* = -1/2 - (eps/4 + tau/2), pieces tiled per the shape of
/// the intersecting sines.
double gamma_tau(const BarrierContext& c, double tau, double t);

struct MembershipReport {
    bool member = false;
    double tau = 0.0;
    double worst_lower_violation = 0.0; // max over nodes of (gamma_tau - b)+
    double worst_upper_violation = 0.0; // max over nodes of (b - alpha phi0^tau)+
    double tau_star = 0.0;              // populated when tau > eps/2
    double sup_norm = 0.0;
    std::string reason;                 // non-empty when member == false
};

/// Default membership slack: 1e-9 alpha + 2 dt (2R/eps).
double membership_slack(const BarrierContext& c);

/// Tests b against Assumption B^alpha plus the B^{alpha,tau0}_R constraints
/// tau >= tau0 and ||b|| <= R. slack < 0 selects the default formula.
MembershipReport membership(const InitialData& b, const BarrierContext& c, double slack = -1.0);

/// (b1, b2, tau) data: b1 on [-1-eps/2, -eps/2] (nodes -(K+m)..-m), b2 on
/// [-eps/2, 0] (nodes -m..0).
struct SplitData {
    std::vector<double> b1;
    std::vector<double> b2;
    double tau = 0.0;
};

/// xi_1: reparameterizes a member onto tau-free intervals via
/// h_tau(t) = t - (tau - eps/2)(t + 1 + eps/2) and t -> (2 tau/eps) t.
SplitData xi1(const InitialData& b, const BarrierContext& c);
InitialData xi1_inverse(const SplitData& v, const BarrierContext& c);

/// xi_2: subtracts the transported barrier / rescaled upper eigenfunction.
SplitData xi2(const SplitData& v, const BarrierContext& c);
SplitData xi2_inverse(const SplitData& w, const BarrierContext& c);

/// Builds a certified member of B^{alpha,tau0}_R with zero offset tau:
/// amplitude_factor * alpha * sin(pi (t+1+eps/2)/(1+eps/2-tau)) plus a small
/// seeded perturbation, clipped nodewise into the barriers and certified via
/// membership. Throws NumericsError if certification fails.
InitialData generate_initial(const BarrierContext& c, double tau, double amplitude_factor,
                             std::uint64_t seed);

/// Resolves the smallness budget for a validated feedback spec: delta0 from
/// lambda0 (1 + delta0/f'(0)) >= 2, alpha0 from the local slope bound,
/// alpha = min(alpha0, a0)/lambda0, tau0 from the invariance bound, every
/// marginal quantity halved. Throws DomainError citing the failing bullet.
BarrierContext budget(const NonlinearitySpec& f, const Grid& grid, double R_floor = 0.0);

} // namespace vlab
