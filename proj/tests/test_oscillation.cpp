#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "vlab/barriers.hpp"
#include "vlab/errors.hpp"
#include "vlab/kernels.hpp"
#include "vlab/nonlinearity.hpp"
#include "vlab/oscillation.hpp"

using namespace vlab;

namespace {

constexpr double kPi = 3.14159265358979323846;

Trajectory sampled(const Grid& g, std::int64_t i0, std::int64_t i1,
                   const std::function<double(double)>& fn) {
    Trajectory x;
    x.grid = g;
    x.i0 = i0;
    x.samples.resize(static_cast<std::size_t>(i1 - i0) + 1);
    for (std::size_t j = 0; j < x.samples.size(); ++j)
        x.samples[j] = fn(g.t_of(i0 + static_cast<std::int64_t>(j)));
    return x;
}

BarrierContext standard_ctx() {
    const Grid g = make_grid(0.2, 10);
    return budget(NonlinearitySpec::catalog("odd-sine-clipped"), g);
}

/// Initial data whose continuation crosses zero exactly at the node
/// t = 1 - eps/2: the tail on [-eps, 0] is odd around -eps/2, so the first
/// window quadrature vanishes by symmetry, while b(-eps) = B > 0 > b(0).
InitialData junction_data(const Grid& g, double A, double B) {
    return InitialData::from_function(g, [&](double t) {
        const double eps = g.eps;
        if (t <= -eps) {
            const double L = 1.0 - eps / 2.0;
            const double s = (t + 1.0 + eps / 2.0) / L;
            return A * std::sin(kPi * s) + B * s;
        }
        return -B * std::sin(kPi * (t + eps / 2.0) / eps);
    });
}

} // namespace

TEST_CASE("zeros of a sampled sine sit at the integers") {
    const Grid g = make_grid(0.25, 10);
    const Trajectory x =
        sampled(g, 0, g.node_nearest(3.5), [](double t) { return std::sin(kPi * t); });
    const ZeroRecord zr = zeros(x, 0.0, 3.5);
    REQUIRE(zr.times.size() == 3);
    const double tol = g.dt * g.dt * kPi * kPi / 8.0 + 1e-12;
    CHECK(std::fabs(zr.times[0] - 1.0) <= tol);
    CHECK(std::fabs(zr.times[1] - 2.0) <= tol);
    CHECK(std::fabs(zr.times[2] - 3.0) <= tol);
    CHECK(zr.signs_after[0] == -1);
    CHECK(zr.signs_after[1] == +1);
    CHECK(zr.signs_after[2] == -1);
    CHECK(zr.alternating());
}

TEST_CASE("zeros of a positive trajectory is empty") {
    const Grid g = make_grid(0.25, 10);
    const Trajectory x = sampled(g, 0, g.K, [](double) { return 2.0; });
    CHECK(zeros(x, 0.0, 1.0).times.empty());
}

TEST_CASE("classify rejects fast oscillation and accepts slow") {
    const Grid g = make_grid(0.25, 10);
    const Trajectory fast =
        sampled(g, 0, g.node_nearest(5.0), [](double t) { return std::sin(4.0 * kPi * t); });
    const auto v_fast = classify(fast, g.eps, 5.0);
    CHECK_FALSE(v_fast.slowly_oscillating);
    CHECK(v_fast.min_gap < 1.0 - g.eps / 2.0);

    const Trajectory slow =
        sampled(g, 0, g.node_nearest(8.0), [](double t) { return std::sin(kPi * t); });
    CHECK(classify(slow, g.eps, 8.0).slowly_oscillating);
}

TEST_CASE("classify flags the zero trajectory as degenerate, vacuously slow") {
    const Grid g = make_grid(0.25, 10);
    const Trajectory x = sampled(g, 0, g.node_nearest(5.0), [](double) { return 0.0; });
    const auto v = classify(x, g.eps, 5.0);
    CHECK(v.slowly_oscillating);
    CHECK(v.degenerate);
    CHECK(v.crossing_count == 0);
}

TEST_CASE("members yield slowly oscillating continuations with gap law") {
    const auto ctx = standard_ctx();
    const auto f = NonlinearitySpec::catalog("odd-sine-clipped");
    const Grid& g = ctx.grid;
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const double tau = ctx.tau0 + (ctx.eps - 2.0 * ctx.tau0) * 0.2 * double(seed);
        const InitialData b = generate_initial(ctx, tau, 1.4, seed);
        const Trajectory x = extend(b, f, 30.0);
        const auto verdict = classify(x, g.eps, 30.0);
        CHECK(verdict.slowly_oscillating);
        CHECK(verdict.crossing_count >= 25);
        const ZeroRecord zr = zeros(x, 0.0, 30.0);
        CHECK(zr.alternating());
        for (double gap : zr.gaps) {
            CHECK(gap > 1.0 - g.eps / 2.0 - 2.0 * g.dt);
            CHECK(gap < 1.0 + g.eps / 2.0 + 2.0 * g.dt);
        }
    }
}

TEST_CASE("first zero of a member lies in the predicted window") {
    const auto ctx = standard_ctx();
    const auto f = NonlinearitySpec::catalog("odd-sine-clipped");
    for (std::uint64_t seed : {4ULL, 5ULL}) {
        const double tau = 0.3 * ctx.eps + 0.4 * ctx.eps * double(seed - 4);
        const InitialData b = generate_initial(ctx, tau, 1.5, seed);
        const auto r = poincare(b, f);
        CHECK(r.z1 > 1.0 - tau - ctx.eps / 2.0 - 2.0 * ctx.grid.dt);
        CHECK(r.z1 < 1.0 - tau + ctx.eps / 2.0 + 2.0 * ctx.grid.dt);
    }
}

TEST_CASE("poincare returns a C0 segment with small first-zero offset") {
    const auto ctx = standard_ctx();
    const auto f = NonlinearitySpec::catalog("odd-sine-clipped");
    const InitialData b = generate_initial(ctx, 0.5 * ctx.eps, 1.5, 42);
    const auto r = poincare(b, f);
    CHECK(r.segment.samples.front() == 0.0);
    CHECK(r.segment.samples.size() == b.samples.size());
    CHECK(r.tau_u > 0.0);
    CHECK(r.tau_u <= ctx.eps + 2.0 * ctx.grid.dt);
    CHECK(r.tau_u == doctest::Approx(r.z1 + 1.0 + ctx.eps / 2.0 - r.z2).epsilon(1e-12));
}

TEST_CASE("poincare throws when the continuation never crosses") {
    const Grid g = make_grid(0.25, 10);
    // positive feedback keeps the state positive: no zero of the continuation
    CHECK_THROWS_AS(poincare(InitialData::constant(g, 1.0), NonlinearitySpec::linear(0.5)),
                    NumericsError);
}

TEST_CASE("find_periodic converges on the atan-shifted equation") {
    const Grid g = make_grid(0.3, 15);
    const auto f = NonlinearitySpec::catalog("atan-shifted");
    const auto orbit = find_periodic(InitialData::constant(g, 1.0), f, 1e-8, 300);
    REQUIRE(orbit.converged);
    CHECK_FALSE(orbit.degenerate);
    CHECK(orbit.residual <= 1e-8);
    CHECK(orbit.period > 2.0 - g.eps);
    CHECK(orbit.period < 2.0 + g.eps);
    CHECK(orbit.extremes.first < 0.0);
    CHECK(orbit.extremes.second > 0.0);
    CHECK(orbit.tau > 0.0);

    // fixed-point consistency: one more application moves the segment by
    // at most 2 tol
    const auto r = poincare(orbit.segment, f);
    const double d = kern::max_abs_diff(orbit.segment.samples.data(), r.segment.samples.data(),
                                        r.segment.samples.size());
    CHECK(d <= 2e-8);
}

TEST_CASE("find_periodic reports collapse to equilibrium for weak feedback") {
    const Grid g = make_grid(0.25, 10);
    const auto f = NonlinearitySpec::linear(-0.5);
    InitialData b0 = InitialData::from_function(g, [&](double t) {
        return 0.05 * std::sin(kPi * (t + 1.0 + g.eps / 2.0) / (1.0 + g.eps / 4.0));
    });
    const auto orbit = find_periodic(b0, f, 1e-8, 200);
    CHECK(orbit.converged);
    CHECK(orbit.degenerate);
}

TEST_CASE("find_periodic reports non-convergence with a distance history") {
    const Grid g = make_grid(0.3, 15);
    const auto f = NonlinearitySpec::catalog("atan-shifted");
    const auto orbit = find_periodic(InitialData::constant(g, 1.0), f, 1e-8, 3);
    CHECK_FALSE(orbit.converged);
    CHECK(orbit.iterations == 3);
    CHECK(orbit.history.size() == 3);
}

TEST_CASE("one-sided slopes at z1 are positive for members") {
    const auto ctx = standard_ctx();
    const auto f = NonlinearitySpec::catalog("odd-sine-clipped");
    for (std::uint64_t seed : {6ULL, 7ULL}) {
        const InitialData b = generate_initial(ctx, 0.4 * ctx.eps, 1.5, seed);
        const auto d = one_sided_slopes_at_z1(b, f);
        CHECK(d.left > 0.0);
        CHECK(d.right > 0.0);
    }
}

TEST_CASE("smooth crossing: both slopes equal the equation derivative") {
    const auto ctx = standard_ctx();
    const auto f = NonlinearitySpec::catalog("odd-sine-clipped");
    // tau away from eps/2 keeps z1 clear of the derivative kink at 1 - eps/2
    const InitialData b = generate_initial(ctx, 0.25 * ctx.eps, 1.5, 8);
    const auto d = one_sided_slopes_at_z1(b, f);
    CHECK(d.left == d.right);
    // against a finite difference of the continuation across z1
    const Trajectory x = extend(b, f, 2.0);
    const double z1 = poincare(b, f).z1;
    const Grid& g = ctx.grid;
    const std::int64_t node = g.node_nearest(z1);
    const double slope_node = derivative(x, f, node).left;
    // second-derivative scale from the derivative samples themselves
    const double x2 = std::fabs(derivative(x, f, node + 1).left -
                                derivative(x, f, node - 1).left) / (2.0 * g.dt);
    const double tol = (std::fabs(z1 - g.t_of(node)) + g.dt) * 2.0 * (x2 + 1.0);
    CHECK(std::fabs(d.left - slope_node) <= tol);
}

TEST_CASE("crossing exactly at 1 - eps/2 gives the two displayed half-slopes") {
    const Grid g = make_grid(0.2, 10);
    const auto f = NonlinearitySpec::catalog("odd-sine-clipped");
    const InitialData b = junction_data(g, 1.0, 0.4);
    const Trajectory x = extend(b, f, 2.0);

    // the quadrature over the odd tail cancels: the continuation vanishes at
    // the junction node itself
    const std::int64_t junction = g.K - g.m;
    CHECK(std::fabs(x.at_node(junction)) <= 1e-14);

    const auto d = one_sided_slopes_at_z1(b, f);
    CHECK(d.split);
    // displayed formulas, evaluated directly from the data
    const double b0 = b.samples.back();
    const double beps = b.at_node(-2 * static_cast<std::int64_t>(g.m));
    const double left_expected = (f.eval(b0) - f.eval(beps)) / g.eps;
    const double right_expected = (f.eval(x.at_node(0)) - f.eval(beps)) / g.eps;
    CHECK(d.left == doctest::Approx(left_expected).epsilon(1e-13));
    CHECK(d.right == doctest::Approx(right_expected).epsilon(1e-13));
    CHECK(d.left != d.right);
    CHECK(d.left > 0.0);
    CHECK(d.right > 0.0);
}

TEST_CASE("constant data settles onto the orbit with period-two extremes") {
    // the alternating transient from b = 1: extreme values of the settled
    // tail approach the nontrivial period-two points of f
    const Grid g = make_grid(0.3, 15);
    const auto f = NonlinearitySpec::catalog("atan-shifted");
    const Trajectory x = extend(InitialData::constant(g, 1.0), f, 40.0);
    CHECK(classify(x, g.eps, 40.0).slowly_oscillating);
    double mn = 1e300, mx = -1e300;
    for (std::int64_t i = g.node_nearest(30.0); i <= g.node_nearest(40.0); ++i) {
        mn = std::min(mn, x.at_node(i));
        mx = std::max(mx, x.at_node(i));
    }
    const auto roots = period_two_points(f, -6.0, 6.0, 1e-4);
    REQUIRE(roots.size() == 3);
    CHECK(std::fabs(mx - roots[2]) <= 0.05 * roots[2]);
    CHECK(std::fabs(mn - roots[0]) <= 0.05 * std::fabs(roots[0]));
}
