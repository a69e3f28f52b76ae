#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vlab {

enum class FeedbackKind {
    atan_shifted,      // f(x) = -2*atan(x + tan(1/2)) + 1
    odd_sine_clipped,  // clamped at +-3, -x - 3 sin(pi x / 3) in between
    asym_sine_clipped, // clamped at +-3, different sine on each side of 0
    linear,            // f(x) = a x
    user_piecewise,    // breakpoint list with per-piece closed forms
    ricker_shifted,    // F(t) = f(t+kappa)-kappa for Ricker f, clamped on the left
};

/// One piece of a user-defined feedback function: a polynomial plus sine and
/// arctangent terms, valid on [lo, hi]. The first/last pieces extend to
/// -inf/+inf.
struct PiecewisePiece {
    struct Trig {
        double amp = 0.0;
        double freq = 1.0;
        double phase = 0.0;
    };
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> poly; // poly[k] * x^k
    std::vector<Trig> sines;  // amp * sin(freq*x + phase)
    std::vector<Trig> atans;  // amp * atan(freq*x + phase)
};

/// A feedback nonlinearity f. Catalog kinds carry their formula; user
/// specs are piecewise closed forms. All kinds evaluate to a finite value
/// for every real input.
struct NonlinearitySpec {
    FeedbackKind kind = FeedbackKind::linear;
    std::vector<double> params;         // linear: {slope}; ricker_shifted: {alpha, kappa, x_clamp}
    std::vector<PiecewisePiece> pieces; // user_piecewise only
    double eval_lo = -8.0;              // validation sampling domain
    double eval_hi = 8.0;

    double eval(double x) const;

    /// Catalog lookup by tag: "atan-shifted", "odd-sine-clipped",
    /// "asymmetric-sine-clipped". Throws ConfigError on unknown tags.
    static NonlinearitySpec catalog(std::string_view tag);
    static NonlinearitySpec linear(double slope);

    std::string tag() const;
};

/// f'(0), closed form for catalog kinds, central differences with a
/// Richardson consistency check otherwise.
double derivative_at_zero(const NonlinearitySpec& f);

struct FeedbackReport {
    bool negative_feedback_ok = false;
    double fprime0 = 0.0;
    double kappa1 = 0.0; // first negative solution of f(x) = -x
    double kappa2 = 0.0; // first positive solution
    bool kappas_found = false;
    bool tail_ok = false;
    bool pass = false;
    std::vector<std::pair<double, std::string>> violations;
};

/// Samples the negative-feedback condition x f(x) < 0, computes f'(0),
/// brackets kappa_1/kappa_2, and checks the tail conditions at the domain
/// edges. Verdict requires f'(0) < -1.
FeedbackReport validate(const NonlinearitySpec& f, long n_samples);

/// All roots of f(f(x)) - x in [lo, hi]: sign-change scan at resolution tol,
/// then bisection to tol. Sorted ascending; nearby duplicates merged.
std::vector<double> period_two_points(const NonlinearitySpec& f, double lo, double hi,
                                      double tol);

struct AnalysisConstants {
    double a0 = 0.0; // f strictly decreasing on [-a0, a0], |f| >= max_{[-a0,a0]}|f| outside
    double A0 = 0.0; // |f(x)| < |x| for all |x| >= A0
    double R = 0.0;  // max(R_floor, max_{|x|<=A0} |f(x)|)
};

AnalysisConstants analysis_constants(const NonlinearitySpec& f, double R_floor);

} // namespace vlab
