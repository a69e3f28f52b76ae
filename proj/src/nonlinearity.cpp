#include "vlab/nonlinearity.hpp"

#include <algorithm>
#include <cmath>

#include "vlab/errors.hpp"
#include "vlab/roots.hpp"

namespace vlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

double eval_piecewise(const std::vector<PiecewisePiece>& pieces, double x) {
    if (pieces.empty()) throw ConfigError("user-piecewise spec has no pieces");
    const PiecewisePiece* p = &pieces.front();
    for (const auto& cand : pieces) {
        if (x >= cand.lo) p = &cand;
        if (x <= cand.hi) break;
    }
    double v = 0.0;
    double xp = 1.0;
    for (double c : p->poly) {
        v += c * xp;
        xp *= x;
    }
    for (const auto& t : p->sines) v += t.amp * std::sin(t.freq * x + t.phase);
    for (const auto& t : p->atans) v += t.amp * std::atan(t.freq * x + t.phase);
    return v;
}

double ricker(double alpha, double x) { return alpha * x * std::exp(-x); }

} // namespace

double NonlinearitySpec::eval(double x) const {
    switch (kind) {
    case FeedbackKind::atan_shifted:
        return -2.0 * std::atan(x + std::tan(0.5)) + 1.0;
    case FeedbackKind::odd_sine_clipped:
        if (x <= -3.0) return 3.0;
        if (x >= 3.0) return -3.0;
        return -x - 3.0 * std::sin(kPi * x / 3.0);
    case FeedbackKind::asym_sine_clipped:
        if (x <= -3.0) return 3.0;
        if (x >= 3.0) return -3.0;
        if (x <= 0.0) return -x - std::sin(kPi * x / 3.0);
        return -x - std::sin(kPi * x) / 3.0;
    case FeedbackKind::linear:
        return params.at(0) * x;
    case FeedbackKind::user_piecewise:
        return eval_piecewise(pieces, x);
    case FeedbackKind::ricker_shifted: {
        const double alpha = params.at(0);
        const double kappa = params.at(1);
        const double clamp = params.at(2); // x_clamp, in original coordinates
        const double y = (x <= clamp - kappa) ? clamp : x + kappa;
        return ricker(alpha, y) - kappa;
    }
    }
    throw ConfigError("unknown nonlinearity kind");
}

NonlinearitySpec NonlinearitySpec::catalog(std::string_view tag) {
    NonlinearitySpec s;
    if (tag == "atan-shifted") {
        s.kind = FeedbackKind::atan_shifted;
    } else if (tag == "odd-sine-clipped") {
        s.kind = FeedbackKind::odd_sine_clipped;
    } else if (tag == "asymmetric-sine-clipped") {
        s.kind = FeedbackKind::asym_sine_clipped;
    } else {
        throw ConfigError("unknown catalog tag: " + std::string(tag));
    }
    return s;
}

NonlinearitySpec NonlinearitySpec::linear(double slope) {
    NonlinearitySpec s;
    s.kind = FeedbackKind::linear;
    s.params = {slope};
    return s;
}

std::string NonlinearitySpec::tag() const {
    switch (kind) {
    case FeedbackKind::atan_shifted: return "atan-shifted";
    case FeedbackKind::odd_sine_clipped: return "odd-sine-clipped";
    case FeedbackKind::asym_sine_clipped: return "asymmetric-sine-clipped";
    case FeedbackKind::linear: return "linear";
    case FeedbackKind::user_piecewise: return "user-piecewise";
    case FeedbackKind::ricker_shifted: return "ricker-shifted";
    }
    return "?";
}

double derivative_at_zero(const NonlinearitySpec& f) {
    switch (f.kind) {
    case FeedbackKind::atan_shifted: {
        const double c = std::cos(0.5);
        return -2.0 * c * c;
    }
    case FeedbackKind::odd_sine_clipped:
        return -1.0 - kPi;
    case FeedbackKind::asym_sine_clipped:
        return -1.0 - kPi / 3.0;
    case FeedbackKind::linear:
        return f.params.at(0);
    case FeedbackKind::ricker_shifted:
        // F'(0) = f'(kappa) = 1 - ln(alpha) for the Ricker map.
        return 1.0 - std::log(f.params.at(0));
    case FeedbackKind::user_piecewise: {
        auto central = [&](double h) { return (f.eval(h) - f.eval(-h)) / (2.0 * h); };
        const double d1 = central(1e-4);
        const double d2 = central(1e-5);
        const double richardson = d2 + (d2 - d1) / 99.0; // h ratio 10 => error ratio 100
        const double scale = std::max(1.0, std::fabs(richardson));
        if (std::fabs(d2 - d1) > 1e-4 * scale)
            throw NumericsError("derivative_at_zero: finite differences inconsistent, residual " +
                                std::to_string(std::fabs(d2 - d1)));
        return richardson;
    }
    }
    throw ConfigError("unknown nonlinearity kind");
}

FeedbackReport validate(const NonlinearitySpec& f, long n_samples) {
    if (n_samples < 16) n_samples = 16;
    FeedbackReport rep;
    rep.fprime0 = derivative_at_zero(f);

    const double lo = f.eval_lo;
    const double hi = f.eval_hi;
    const double step = (hi - lo) / static_cast<double>(n_samples);

    rep.negative_feedback_ok = true;
    constexpr std::size_t kMaxListed = 64;
    for (long i = 0; i <= n_samples; ++i) {
        const double x = lo + step * static_cast<double>(i);
        if (std::fabs(x) < 1e-12) continue;
        const double v = f.eval(x);
        if (!std::isfinite(v)) {
            rep.negative_feedback_ok = false;
            rep.violations.emplace_back(x, "non-finite value");
            continue;
        }
        if (x * v >= 0.0) {
            rep.negative_feedback_ok = false;
            if (rep.violations.size() < kMaxListed)
                rep.violations.emplace_back(x, "x*f(x) >= 0");
        }
    }

    // kappa_1 / kappa_2: first crossings of f(x) = -x on each side of 0,
    // bracketed at resolution (width)/1e5 and bisected to 1e-12.
    auto g = [&](double x) { return f.eval(x) + x; };
    const long scan_steps = 100000;
    bool have_k2 = false, have_k1 = false;
    try {
        rep.kappa2 = roots::first_root(g, step * 0.5, hi, scan_steps, 1e-12);
        have_k2 = rep.kappa2 > 0.0;
    } catch (const NumericsError&) {
    }
    try {
        rep.kappa1 = -roots::first_root([&](double x) { return g(-x); }, step * 0.5, -lo,
                                        scan_steps, 1e-12);
        have_k1 = rep.kappa1 < 0.0;
    } catch (const NumericsError&) {
    }
    rep.kappas_found = have_k1 && have_k2;

    // Tail conditions are asymptotic; sampled at the domain edges only.
    rep.tail_ok = true;
    for (double frac : {1.0, 0.98, 0.95}) {
        const double xr = hi * frac;
        const double xl = lo * frac;
        if (!(f.eval(xr) < 0.0 && f.eval(xl) > 0.0)) rep.tail_ok = false;
        if (!(f.eval(xr) / xr > -1.0 && f.eval(xl) / xl > -1.0)) rep.tail_ok = false;
    }

    rep.pass = rep.negative_feedback_ok && rep.fprime0 < -1.0 && rep.kappas_found &&
               rep.tail_ok;
    return rep;
}

std::vector<double> period_two_points(const NonlinearitySpec& f, double lo, double hi,
                                      double tol) {
    if (!(tol > 0.0) || !(hi > lo)) throw ConfigError("period_two_points: bad interval/tol");
    auto g2 = [&](double x) { return f.eval(f.eval(x)) - x; };
    const long n_steps = std::max<long>(8, std::lround((hi - lo) / tol));
    auto brackets = roots::scan_sign_changes(g2, lo, hi, n_steps);
    std::vector<double> out;
    for (const auto& b : brackets) {
        const double r = b.exact ? b.lo : roots::bisect(g2, b.lo, b.hi, tol);
        if (out.empty() || r - out.back() > 2.0 * tol) out.push_back(r);
    }
    return out;
}

AnalysisConstants analysis_constants(const NonlinearitySpec& f, double R_floor) {
    const long n = 200000;
    const double hi = std::max(std::fabs(f.eval_lo), f.eval_hi);
    const double step = hi / static_cast<double>(n);

    std::vector<double> absmax(n + 1); // max(|f(x)|, |f(-x)|) on the grid
    for (long i = 0; i <= n; ++i) {
        const double x = step * static_cast<double>(i);
        absmax[i] = std::max(std::fabs(f.eval(x)), std::fabs(f.eval(-x)));
    }

    // A0: smallest grid value with |f(y)| < |y| for all sampled |y| >= A0.
    long i_A0 = -1;
    for (long i = n;; --i) {
        const double x = step * static_cast<double>(i);
        if (i == 0 || !(absmax[i] < x)) {
            i_A0 = i + 1;
            break;
        }
    }
    if (i_A0 > n)
        throw NumericsError("analysis_constants: no A0 with |f(x)| < |x| inside eval_domain");
    AnalysisConstants ac;
    ac.A0 = step * static_cast<double>(i_A0);

    // a0: largest grid value with f strictly decreasing on [-a0, a0] and the
    // eventual-positivity bound min_{|x|>=a0} |f(x)| >= max_{|x|<=a0} |f(x)|.
    std::vector<double> suffix_min(n + 2);
    suffix_min[n + 1] = absmax[n];
    for (long i = n; i >= 0; --i) suffix_min[i] = std::min(absmax[i], suffix_min[i + 1]);
    double running_max = 0.0;
    double a0 = 0.0;
    const double h = step * 0.5;
    for (long i = 1; i <= n; ++i) {
        const double x = step * static_cast<double>(i);
        const bool mono = (f.eval(x + h) < f.eval(x - h)) && (f.eval(-x + h) < f.eval(-x - h));
        if (!mono) break;
        running_max = std::max(running_max, absmax[i]);
        if (suffix_min[i] >= running_max) a0 = x;
        if (x > ac.A0) break; // no point growing a0 past A0
    }
    if (a0 == 0.0)
        throw NumericsError("analysis_constants: no a0 satisfying monotonicity bound");
    ac.a0 = a0;

    double m = 0.0;
    for (long i = 0; i <= std::min<long>(n, i_A0); ++i) m = std::max(m, absmax[i]);
    ac.R = std::max(R_floor, m);
    return ac;
}

} // namespace vlab
