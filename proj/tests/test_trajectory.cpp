#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <vector>

#include "vlab/csvio.hpp"
#include "vlab/errors.hpp"
#include "vlab/kernels.hpp"
#include "vlab/nonlinearity.hpp"
#include "vlab/rng.hpp"
#include "vlab/trajectory.hpp"

using namespace vlab;

namespace {

constexpr double kPi = 3.14159265358979323846;

Trajectory sampled(const Grid& g, std::int64_t i0, std::int64_t i1, double (*fn)(double)) {
    Trajectory x;
    x.grid = g;
    x.i0 = i0;
    x.samples.resize(static_cast<std::size_t>(i1 - i0) + 1);
    for (std::size_t j = 0; j < x.samples.size(); ++j)
        x.samples[j] = fn(g.t_of(i0 + static_cast<std::int64_t>(j)));
    return x;
}

} // namespace

TEST_CASE("make_grid snaps eps to a commensurate rational") {
    const Grid a = make_grid(0.25, 10);
    CHECK(a.eps == 0.25);
    CHECK(a.K == 80);
    CHECK(a.dt == doctest::Approx(1.0 / 80.0).epsilon(1e-16));
    CHECK(a.snap_distance == 0.0);

    const Grid b = make_grid(0.30, 3);
    CHECK(b.eps == doctest::Approx(0.3).epsilon(1e-16));
    CHECK(b.K == 20);

    const Grid c = make_grid(0.01, 2);
    CHECK(c.K == 400);
    CHECK(c.dt == doctest::Approx(1.0 / 400.0).epsilon(1e-16));

    // eps too close to 1 for the window to fit
    CHECK_THROWS_AS(make_grid(0.999, 1), ConfigError);
    CHECK_THROWS_AS(make_grid(1.2, 10), ConfigError);
}

TEST_CASE("window integral is exact for constants") {
    const Grid g = make_grid(0.25, 10);
    const auto f = NonlinearitySpec::catalog("atan-shifted");
    const double c = 0.7;
    Trajectory x = sampled(g, -(g.K + g.m), 3 * g.K, [](double) { return 0.7; });
    const double fc = f.eval(c);
    for (std::int64_t node : {std::int64_t(0), g.K / 2, 2 * g.K}) {
        CHECK(std::fabs(window_integral(x, f, node) - fc) <= 1e-14 * std::fabs(fc));
    }
}

TEST_CASE("window integral of a sine matches the closed form") {
    // (1/eps) integral of -sin(pi s) over the window equals
    // (2/(pi eps)) sin(pi eps/2) sin(pi t).
    const Grid g = make_grid(0.25, 100); // dt = eps/200
    const auto f = NonlinearitySpec::linear(-1.0);
    Trajectory x = sampled(g, -(g.K + g.m), 3 * g.K, [](double t) { return std::sin(kPi * t); });
    const double coef = (2.0 / (kPi * g.eps)) * std::sin(kPi * g.eps / 2.0);
    for (double t : {0.0, 0.3, 0.85, 1.5, 2.0}) {
        const std::int64_t node = g.node_nearest(t);
        const double expected = coef * std::sin(kPi * g.t_of(node));
        CHECK(std::fabs(window_integral(x, f, node) - expected) <= 1e-10);
    }
}

TEST_CASE("window integral is exact for cubics under linear feedback") {
    const Grid g = make_grid(0.2, 10);
    const double a = -2.0;
    const auto f = NonlinearitySpec::linear(a);
    Trajectory x = sampled(g, -(g.K + g.m), 3 * g.K, [](double t) { return t * t * t; });
    for (double t : {0.0, 0.5, 1.0, 2.0}) {
        const std::int64_t node = g.node_nearest(t);
        const double tt = g.t_of(node);
        const double lo = tt - 1.0 - g.eps / 2.0, hi = tt - 1.0 + g.eps / 2.0;
        const double exact = a / g.eps * (std::pow(hi, 4) - std::pow(lo, 4)) / 4.0;
        CHECK(std::fabs(window_integral(x, f, node) - exact) <= 1e-13 * (1.0 + std::fabs(exact)));
    }
}

TEST_CASE("extension of zero data stays at zero") {
    const Grid g = make_grid(0.25, 10);
    for (const char* tag : {"atan-shifted", "odd-sine-clipped"}) {
        const auto f = NonlinearitySpec::catalog(tag);
        const Trajectory x = extend(InitialData::constant(g, 0.0), f, 10.0);
        double m = 0.0;
        for (double v : x.samples) m = std::max(m, std::fabs(v));
        CHECK(m <= 1e-13);
    }
}

TEST_CASE("constant data sees a constant window for one delay interval") {
    const Grid g = make_grid(0.25, 10);
    const auto f = NonlinearitySpec::catalog("atan-shifted");
    const Trajectory x = extend(InitialData::constant(g, 1.0), f, 3.0);
    const double f1 = f.eval(1.0);
    REQUIRE(x.jump_at_zero.has_value());
    CHECK(x.jump_at_zero->first == 1.0);
    CHECK(x.jump_at_zero->second == doctest::Approx(f1).epsilon(1e-14));
    for (std::int64_t i = 0; i <= g.K - g.m; ++i) { // t in [0, 1 - eps/2]
        CHECK(std::fabs(x.at_node(i) - f1) <= 1e-14);
    }
    // after 1 - eps/2 the window reaches past the jump and the value moves
    CHECK(std::fabs(x.at_node(g.K + g.m) - f1) > 1e-6);
}

TEST_CASE("step invariance: recomputing the window reproduces stored samples") {
    const Grid g = make_grid(0.2, 10);
    const auto f = NonlinearitySpec::catalog("odd-sine-clipped");
    const Trajectory x = extend(InitialData::constant(g, 1.0), f, 12.0);
    SplitMix64 rng(7);
    for (int k = 0; k < 300; ++k) {
        const std::int64_t node = static_cast<std::int64_t>(rng.next_unit() * 12.0 * g.K);
        CHECK(std::fabs(window_integral(x, f, node) - x.at_node(node)) <= 1e-12);
    }
}

TEST_CASE("uniform bound: data below R stays below R") {
    const Grid g = make_grid(0.2, 10);
    const auto f = NonlinearitySpec::catalog("odd-sine-clipped");
    const auto ac = analysis_constants(f, 0.0);
    SplitMix64 rng(11);
    for (int rep = 0; rep < 3; ++rep) {
        std::vector<double> coef(5);
        for (auto& c : coef) c = rng.next_symmetric();
        InitialData b = InitialData::from_function(g, [&](double t) {
            double v = 0.0;
            for (std::size_t k = 0; k < coef.size(); ++k)
                v += coef[k] * std::sin(static_cast<double>(k + 1) * kPi *
                                        (t + 1.0 + 0.1) / (1.0 + 0.1));
            return v;
        });
        const double norm = b.sup_norm();
        for (auto& v : b.samples) v *= 0.999 * ac.R / norm;
        const Trajectory x = extend(b, f, 20.0);
        CHECK(sup_bound_check(x, ac.R, 1e-9));
    }
}

TEST_CASE("sup_bound_check fails for an R below the actual range") {
    const Grid g = make_grid(0.2, 10);
    const auto f = NonlinearitySpec::catalog("odd-sine-clipped");
    const Trajectory x = extend(InitialData::constant(g, 1.0), f, 20.0);
    CHECK_FALSE(sup_bound_check(x, 1.0, 1e-9));
}

TEST_CASE("jump accounting: node-to-node steps bounded by the derivative bound") {
    const Grid g = make_grid(0.2, 10);
    const auto f = NonlinearitySpec::catalog("odd-sine-clipped");
    const auto ac = analysis_constants(f, 0.0);
    const Trajectory x = extend(InitialData::constant(g, 1.0), f, 20.0);
    const double bound = 2.0 * ac.R / g.eps * g.dt + 1e-12;
    for (std::int64_t i = 1; i <= 20 * g.K; ++i) {
        CHECK(std::fabs(x.at_node(i) - x.at_node(i - 1)) <= bound);
    }
}

TEST_CASE("derivative formula agrees with centered differences on smooth stretches") {
    const Grid g = make_grid(0.2, 20);
    const auto f = NonlinearitySpec::catalog("atan-shifted");
    const Trajectory x = extend(InitialData::constant(g, 1.0), f, 8.0);
    for (std::int64_t i = g.node_nearest(5.0); i <= g.node_nearest(6.0); ++i) {
        const auto d = derivative(x, f, i);
        CHECK_FALSE(d.split);
        const double fd = (x.at_node(i + 1) - x.at_node(i - 1)) / (2.0 * g.dt);
        CHECK(std::fabs(d.left - fd) <= 500.0 * g.dt * g.dt);
    }
}

TEST_CASE("derivative of a constant trajectory is zero") {
    const Grid g = make_grid(0.25, 10);
    const auto f = NonlinearitySpec::linear(-2.0);
    Trajectory x = sampled(g, -(g.K + g.m), 2 * g.K, [](double) { return 0.4; });
    const auto d = derivative(x, f, g.K);
    CHECK(d.left == doctest::Approx(0.0));
    CHECK(d.right == doctest::Approx(0.0));
}

TEST_CASE("derivative at the junction 1 - eps/2 returns both one-sided values") {
    const Grid g = make_grid(0.25, 10);
    const auto f = NonlinearitySpec::catalog("atan-shifted");
    const Trajectory x = extend(InitialData::constant(g, 1.0), f, 3.0);
    const auto d = derivative(x, f, g.K - g.m);
    CHECK(d.split);
    // left side still sees the initial datum at the jump
    const double left_expected =
        (f.eval(x.jump_at_zero->first) - f.eval(x.at_node(-2 * g.m))) / g.eps;
    const double right_expected = (f.eval(x.at_node(0)) - f.eval(x.at_node(-2 * g.m))) / g.eps;
    CHECK(d.left == doctest::Approx(left_expected).epsilon(1e-14));
    CHECK(d.right == doctest::Approx(right_expected).epsilon(1e-14));
}

TEST_CASE("extend aborts on non-finite values with context") {
    const Grid g = make_grid(0.25, 4);
    NonlinearitySpec bad;
    bad.kind = FeedbackKind::user_piecewise;
    PiecewisePiece p;
    p.lo = -1e30;
    p.hi = 1e30;
    p.poly = {0.0, -1e155, 0.0, -1e155};
    bad.pieces = {p};
    CHECK_THROWS_AS(extend(InitialData::constant(g, 1e200), bad, 2.0), NumericsError);
}

TEST_CASE("trajectory csv round-trips through read_tx_csv") {
    const Grid g = make_grid(0.25, 4);
    const auto f = NonlinearitySpec::catalog("atan-shifted");
    const Trajectory x = extend(InitialData::constant(g, 1.0), f, 2.0);
    const std::string path = "test_traj_roundtrip.csv";
    write_trajectory_csv(path, x);
    std::vector<double> tv, xv;
    read_tx_csv(path, tv, xv);
    std::remove(path.c_str());
    REQUIRE(xv.size() == x.samples.size());
    const std::size_t j0 = static_cast<std::size_t>(-x.i0); // node 0
    for (std::size_t j = 0; j < xv.size(); ++j) {
        // the duplicate row at t = 0 reads back as the left (initial) value
        const double expect = (j == j0) ? x.jump_at_zero->first : x.samples[j];
        CHECK(xv[j] == expect);
    }
}

TEST_CASE("format_double round-trips binary64") {
    SplitMix64 rng(99);
    for (int k = 0; k < 200; ++k) {
        const double v = (rng.next_symmetric()) * std::pow(10.0, 6.0 * rng.next_symmetric());
        CHECK(std::stod(format_double(v)) == v);
    }
}

TEST_CASE("default m keeps the window resolved and eps exact where possible") {
    CHECK(default_m(0.25) == 10);
    CHECK(default_m(0.01) == 2); // dt = 1/400
    CHECK(default_m(0.03) == 6); // 12/0.03 = 400 exactly
    for (double eps : {0.3, 0.1, 0.03, 0.01}) {
        const Grid g = make_grid(eps, default_m(eps));
        CHECK(g.snap_distance <= 1e-12);
        if (eps < 0.1) CHECK(g.dt <= 1.0 / 400.0 + 1e-15);
    }
}

TEST_CASE("windows straddling the jump integrate piecewise cubics exactly") {
    // distinct cubics on each side of t = 0, linear feedback: the split
    // composite rule (Simpson with a 3/8 tail on odd counts) must reproduce
    // the exact two-piece integral at every straddling node
    const Grid g = make_grid(0.2, 10);
    const double a = -1.7;
    const auto f = NonlinearitySpec::linear(a);
    auto left = [](double t) { return 0.3 + 0.9 * t - 1.1 * t * t + 0.4 * t * t * t; };
    auto right = [](double t) { return -0.2 + 0.5 * t + 0.8 * t * t - 0.3 * t * t * t; };
    auto ileft = [](double t) { // antiderivative of left
        return 0.3 * t + 0.45 * t * t - 1.1 * t * t * t / 3.0 + 0.1 * t * t * t * t;
    };
    auto iright = [](double t) {
        return -0.2 * t + 0.25 * t * t + 0.8 * t * t * t / 3.0 - 0.075 * t * t * t * t;
    };

    Trajectory x;
    x.grid = g;
    x.i0 = -(g.K + static_cast<std::int64_t>(g.m));
    x.samples.resize(static_cast<std::size_t>(3 * g.K + g.m) + 1);
    for (std::size_t j = 0; j < x.samples.size(); ++j) {
        const double t = g.t_of(x.i0 + static_cast<std::int64_t>(j));
        x.samples[j] = t < 0.0 ? left(t) : right(t);
    }
    x.jump_at_zero = std::make_pair(left(0.0), right(0.0));

    for (std::int64_t i = g.K - g.m; i <= g.K + g.m; ++i) {
        const double w0 = g.t_of(i) - 1.0 - g.eps / 2.0;
        const double w1 = g.t_of(i) - 1.0 + g.eps / 2.0;
        double exact;
        if (w1 <= 0.0) {
            exact = ileft(w1) - ileft(w0);
        } else if (w0 >= 0.0) {
            exact = iright(w1) - iright(w0);
        } else {
            exact = (ileft(0.0) - ileft(w0)) + (iright(w1) - iright(0.0));
        }
        exact *= a / g.eps;
        const std::int64_t nL = g.K + g.m - i; // left-side subintervals
        const std::int64_t nR = i - g.K + g.m; // right-side subintervals
        if (nL == 1 || nR == 1) {
            // a single-subinterval side falls back to the trapezoid rule;
            // bound its local error by h^3 |g''| / (12 eps)
            const double tol = std::pow(g.dt, 3) * 12.0 / (12.0 * g.eps) * std::fabs(a);
            CHECK(std::fabs(window_integral(x, f, i) - exact) <= tol);
        } else {
            CHECK(window_integral(x, f, i) == doctest::Approx(exact).epsilon(1e-13));
        }
    }
}

TEST_CASE("step invariance holds across the jump-straddling windows") {
    const Grid g = make_grid(0.2, 10);
    const auto f = NonlinearitySpec::catalog("odd-sine-clipped");
    const Trajectory x = extend(InitialData::constant(g, 1.0), f, 3.0);
    for (std::int64_t i = g.K - g.m - 2; i <= g.K + g.m + 2; ++i) {
        CHECK(std::fabs(window_integral(x, f, i) - x.at_node(i)) <= 1e-12);
    }
}

TEST_CASE("method of steps converges under grid refinement") {
    // The transient from constant data carries derivative kinks that
    // propagate through the recurrence, limiting pointwise convergence to
    // second order; the refinement ratio per halved dt must stay near 4.
    const auto f = NonlinearitySpec::catalog("atan-shifted");
    const Grid gref = make_grid(0.3, 120);
    const Trajectory xr = extend(InitialData::constant(gref, 1.0), f, 5.0);
    double prev = 0.0;
    for (int m : {15, 30, 60}) {
        const Grid g = make_grid(0.3, m);
        const Trajectory x = extend(InitialData::constant(g, 1.0), f, 5.0);
        const std::int64_t r = gref.K / g.K;
        double worst = 0.0;
        for (std::int64_t i = 0; i <= 5 * g.K; ++i)
            worst = std::max(worst, std::fabs(x.at_node(i) - xr.at_node(r * i)));
        if (m == 15) CHECK(worst < 2e-3);
        if (prev > 0.0) CHECK(prev / worst >= 3.2);
        prev = worst;
    }
}
