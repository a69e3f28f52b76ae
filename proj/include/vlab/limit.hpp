#pragma once

#include <utility>
#include <vector>

#include "vlab/nonlinearity.hpp"
#include "vlab/oscillation.hpp"

namespace vlab {

/// Square-wave limit profile: kappa0 when floor(t) is odd, -kappa0 when
/// even.
double square_wave(double kappa0, double t);

/// lambda_{a,k} = -(2a / k pi eps) sin(k pi eps / 2), the eigenvalue of the
/// window operator with slope a on sin(k pi t).
double lambda_ak(double a, int k, double eps);

/// Plateau levels of the limiting square wave: the pair of nontrivial
/// period-two points around 0 (lower < 0 < upper). For symmetric specs this
/// is (-kappa0, kappa0).
struct PlateauPair {
    double lower = 0.0;
    double upper = 0.0;
    bool symmetric() const;
};

/// Extracts the plateau pair from the sorted roots of f(f(x)) = x: the
/// largest root below 0 paired with f of it (equivalently the innermost
/// nontrivial 2-cycle bracketing 0). Throws if only the trivial root exists.
PlateauPair plateau_from_period_two(const std::vector<double>& roots);

/// Aligned square-wave reference with the given plateaus: upper when
/// floor(t) is odd, lower when even.
double plateau_wave(const PlateauPair& p, double t);

/// Time-shifts a converged orbit so a zero crossing sits at t = 0, choosing
/// between the two candidate crossings (up / down) by minimal L1 distance to
/// the plateau wave on [0, 2]. Returns samples on [0, 2] grid nodes; shift
/// reports the chosen crossing relative to the orbit start.
struct AlignedOrbit {
    Trajectory aligned; // nodes 0 .. 2K
    double shift = 0.0;
    double l1_error = 0.0;
};
AlignedOrbit align_phase(const PeriodicOrbit& orbit, const PlateauPair& plateaus);

struct LimitSweepRow {
    double eps = 0.0;
    int m = 0;
    double period = 0.0;
    double sup_error_on_I = 0.0;
    double l1_error = 0.0;
    double overshoot = 0.0;  // max(orbit) - upper plateau
    double undershoot = 0.0; // min(orbit) - lower plateau
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;
    PeriodicOrbit orbit;
};

struct SweepOptions {
    std::pair<double, double> interval{1.25, 1.75}; // I, away from the jump set
    double tol = 1e-8;
    int max_iter = 500;
    double relax = 1.0;
    double b0_constant = 1.0; // constant initial data, as in the simulations
    int m_override = 0;       // 0: per-eps default (>= 10 window subintervals)
};

/// One row: find the orbit at this eps, align its phase, and measure the
/// distance to the plateau square wave.
LimitSweepRow sweep_row(const NonlinearitySpec& f, double eps, const PlateauPair& plateaus,
                        const SweepOptions& opt);

/// Full sweep over a list of eps values (rows independent).
std::vector<LimitSweepRow> sweep(const NonlinearitySpec& f, const std::vector<double>& eps_list,
                                 const SweepOptions& opt);

} // namespace vlab
