#include "vlab/limit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vlab/errors.hpp"

namespace vlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool floor_is_odd(double t) {
    const long long fl = static_cast<long long>(std::floor(t));
    return (fl % 2) != 0;
}

/// Periodized evaluation of an orbit: wraps t into [start, start + period)
/// and interpolates the stored continuation slice.
double orbit_value(const PeriodicOrbit& orbit, double t) {
    const double P = orbit.period;
    double u = std::fmod(t - orbit.orbit_start, P);
    if (u < 0.0) u += P;
    return orbit.one_period.value(orbit.orbit_start + u);
}

} // namespace

double square_wave(double kappa0, double t) {
    if (!(kappa0 > 0.0)) throw DomainError("square_wave: kappa0 must be positive");
    return floor_is_odd(t) ? kappa0 : -kappa0;
}

double lambda_ak(double a, int k, double eps) {
    if (!(a < 0.0)) throw DomainError("lambda_ak: requires a < 0");
    if (k < 1) throw DomainError("lambda_ak: k must be a positive integer");
    const double kk = static_cast<double>(k);
    return -(2.0 * a / (kk * kPi * eps)) * std::sin(kk * kPi * eps / 2.0);
}

bool PlateauPair::symmetric() const {
    return std::fabs(upper + lower) <= 1e-9 * std::max(1.0, std::fabs(upper));
}

PlateauPair plateau_from_period_two(const std::vector<double>& roots) {
    PlateauPair p;
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
    for (double r : roots) {
        if (r < -1e-9) lower = std::max(lower, r);
        if (r > 1e-9) upper = std::min(upper, r);
    }
    if (!std::isfinite(lower) || !std::isfinite(upper))
        throw NumericsError("plateau_from_period_two: no nontrivial 2-cycle around 0");
    p.lower = lower;
    p.upper = upper;
    return p;
}

double plateau_wave(const PlateauPair& p, double t) {
    return floor_is_odd(t) ? p.upper : p.lower;
}

AlignedOrbit align_phase(const PeriodicOrbit& orbit, const PlateauPair& plateaus) {
    if (!orbit.converged || orbit.degenerate)
        throw DomainError("align_phase: orbit not converged");
    const Grid& g = orbit.one_period.grid;
    // one period's worth of crossings, starting just below the orbit start so
    // the crossing at the start itself is a candidate too
    const ZeroRecord zr = zeros(orbit.one_period, orbit.orbit_start - 2.0 * g.dt,
                                orbit.orbit_start + orbit.period - 2.0 * g.dt);
    if (zr.times.empty()) throw NumericsError("align_phase: orbit has no zero crossing");

    AlignedOrbit best;
    double best_l1 = std::numeric_limits<double>::infinity();
    for (double zc : zr.times) {
        Trajectory cand;
        cand.grid = g;
        cand.i0 = 0;
        cand.samples.resize(static_cast<std::size_t>(2 * g.K) + 1);
        double l1 = 0.0;
        for (std::size_t j = 0; j < cand.samples.size(); ++j) {
            const double t = g.t_of(static_cast<std::int64_t>(j));
            cand.samples[j] = orbit_value(orbit, zc + t);
            const double w = (j == 0 || j + 1 == cand.samples.size()) ? 0.5 : 1.0;
            l1 += w * std::fabs(cand.samples[j] - plateau_wave(plateaus, t));
        }
        l1 *= g.dt;
        if (l1 < best_l1) {
            best_l1 = l1;
            best.aligned = std::move(cand);
            best.shift = zc - orbit.orbit_start;
        }
    }
    best.l1_error = best_l1;
    return best;
}

LimitSweepRow sweep_row(const NonlinearitySpec& f, double eps, const PlateauPair& plateaus,
                        const SweepOptions& opt) {
    LimitSweepRow row;
    row.eps = eps;
    int m = opt.m_override;
    if (m <= 0) m = std::max(10, default_m(eps));
    // Keep eps exactly representable where possible.
    for (int mm = m; mm <= m + 40; ++mm) {
        const double k = 2.0 * mm / eps;
        if (std::fabs(k - std::llround(k)) < 1e-9 * k) {
            m = mm;
            break;
        }
    }
    const Grid g = make_grid(eps, m);
    row.m = g.m;
    row.eps = g.eps;

    const InitialData b0 = InitialData::constant(g, opt.b0_constant);
    PeriodicOrbit orbit = find_periodic(b0, f, opt.tol, opt.max_iter, opt.relax);
    row.converged = orbit.converged && !orbit.degenerate;
    row.iterations = orbit.iterations;
    row.residual = orbit.residual;
    if (!row.converged) {
        row.orbit = std::move(orbit);
        return row;
    }
    row.period = orbit.period;
    row.overshoot = orbit.extremes.second - plateaus.upper;
    row.undershoot = orbit.extremes.first - plateaus.lower;

    const AlignedOrbit ao = align_phase(orbit, plateaus);
    row.l1_error = ao.l1_error;
    double sup = 0.0;
    const Grid& ag = ao.aligned.grid;
    for (std::int64_t i = ag.node_ceil(opt.interval.first);
         i <= ag.node_floor(opt.interval.second); ++i) {
        const double t = ag.t_of(i);
        sup = std::max(sup, std::fabs(ao.aligned.at_node(i) - plateau_wave(plateaus, t)));
    }
    row.sup_error_on_I = sup;
    row.orbit = std::move(orbit);
    return row;
}

std::vector<LimitSweepRow> sweep(const NonlinearitySpec& f, const std::vector<double>& eps_list,
                                 const SweepOptions& opt) {
    std::vector<LimitSweepRow> rows;
    rows.reserve(eps_list.size());
    PlateauPair plateaus = plateau_from_period_two(period_two_points(f, -6.0, 6.0, 1e-4));
    for (double eps : eps_list) rows.push_back(sweep_row(f, eps, plateaus, opt));
    return rows;
}

} // namespace vlab
