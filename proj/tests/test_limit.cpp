#include <doctest.h>

#include <cmath>

#include "vlab/barriers.hpp"
#include "vlab/errors.hpp"
#include "vlab/limit.hpp"
#include "vlab/nonlinearity.hpp"

using namespace vlab;

namespace {
constexpr double kPi = 3.14159265358979323846;
const long double kPiL = 3.141592653589793238462643383279502884L;
} // namespace

TEST_CASE("square wave plateau selection by floor parity") {
    CHECK(square_wave(3.0, 1.5) == 3.0);
    CHECK(square_wave(3.0, 0.5) == -3.0);
    CHECK(square_wave(3.0, 2.5) == -3.0);
    CHECK(square_wave(3.0, 3.25) == 3.0);
    CHECK(square_wave(3.0, -0.5) == 3.0);  // floor = -1, odd
    CHECK(square_wave(3.0, -1.5) == -3.0); // floor = -2, even
    CHECK_THROWS_AS(square_wave(-1.0, 0.5), DomainError);
}

TEST_CASE("lambda_ak closed form") {
    // k = 1 coincides with the principal eigenvalue
    for (double eps : {0.3, 0.1, 0.01}) {
        CHECK(lambda_ak(-2.5, 1, eps) == doctest::Approx(lambda0(-2.5, eps)).epsilon(1e-15));
    }
    // eps -> 0 limit is -a
    CHECK(lambda_ak(-1.2, 3, 1e-8) == doctest::Approx(1.2).epsilon(1e-10));
    // extended-precision evaluation of the display
    const long double expect =
        -(2.0L * (-1.2L) / (3.0L * kPiL * 0.1L)) * sinl(3.0L * kPiL * 0.1L / 2.0L);
    CHECK(lambda_ak(-1.2, 3, 0.1) ==
          doctest::Approx(static_cast<double>(expect)).epsilon(1e-14));
    CHECK_THROWS_AS(lambda_ak(1.0, 1, 0.1), DomainError);
    CHECK_THROWS_AS(lambda_ak(-1.0, 0, 0.1), DomainError);
}

TEST_CASE("plateau pair extraction from period-two roots") {
    const auto p_odd =
        plateau_from_period_two(period_two_points(NonlinearitySpec::catalog("odd-sine-clipped"),
                                                  -6.0, 6.0, 1e-4));
    CHECK(p_odd.lower == doctest::Approx(-3.0).epsilon(1e-3));
    CHECK(p_odd.upper == doctest::Approx(3.0).epsilon(1e-3));
    CHECK(p_odd.symmetric());

    const auto p_atan = plateau_from_period_two(
        period_two_points(NonlinearitySpec::catalog("atan-shifted"), -6.0, 6.0, 1e-4));
    CHECK(p_atan.lower < 0.0);
    CHECK(p_atan.upper > 0.0);
    CHECK_FALSE(p_atan.symmetric());

    CHECK_THROWS_AS(plateau_from_period_two({0.0}), NumericsError);
}

TEST_CASE("align_phase puts a downward crossing at t = 0") {
    const Grid g = make_grid(0.3, 15);
    const auto f = NonlinearitySpec::catalog("atan-shifted");
    const auto plateaus =
        plateau_from_period_two(period_two_points(f, -6.0, 6.0, 1e-4));
    const auto orbit = find_periodic(InitialData::constant(g, 1.0), f, 1e-8, 300);
    REQUIRE(orbit.converged);
    const auto ao = align_phase(orbit, plateaus);
    REQUIRE(ao.aligned.samples.size() == static_cast<std::size_t>(2 * g.K) + 1);
    // the lobe following t = 0 matches the lower plateau's sign
    for (double t = 0.3; t <= 0.7; t += 0.05)
        CHECK(ao.aligned.value(t) < 0.0);
    for (double t = 1.3; t <= 1.7; t += 0.05)
        CHECK(ao.aligned.value(t) > 0.0);
    CHECK(ao.l1_error > 0.0);
    // the chosen crossing is one of the orbit's two zeros per period
    CHECK(ao.shift >= -1e-12);
    CHECK(ao.shift <= orbit.period);
}

TEST_CASE("sweep rows shrink toward the square wave (odd-sine-clipped)") {
    const auto f = NonlinearitySpec::catalog("odd-sine-clipped");
    SweepOptions opt;
    const auto rows = sweep(f, {0.3, 0.1}, opt);
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) {
        CHECK(r.converged);
        CHECK(r.period > 2.0 - r.eps);
        CHECK(r.period < 2.0 + r.eps);
        // the non-monotone case keeps a positive overshoot (Gibbs)
        CHECK(r.overshoot > 0.0);
    }
    CHECK(rows[1].l1_error < rows[0].l1_error);
    CHECK(rows[1].sup_error_on_I <= rows[0].sup_error_on_I + 1e-12);
}

TEST_CASE("sweep honors the m override and snaps eps exactly") {
    const auto f = NonlinearitySpec::catalog("atan-shifted");
    SweepOptions opt;
    opt.m_override = 15;
    const auto rows = sweep(f, {0.3}, opt);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].m == 15);
    CHECK(rows[0].eps == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(rows[0].converged);
}

TEST_CASE("align_phase picks the downward crossing of the orbit") {
    const Grid g = make_grid(0.25, 10);
    const auto f = NonlinearitySpec::catalog("odd-sine-clipped");
    const auto plateaus =
        plateau_from_period_two(period_two_points(f, -6.0, 6.0, 1e-4));
    const auto orbit = find_periodic(InitialData::constant(g, 1.0), f, 1e-8, 400);
    REQUIRE(orbit.converged);
    const auto zr = zeros(orbit.one_period, orbit.orbit_start - 2.0 * g.dt,
                          orbit.orbit_start + orbit.period - 2.0 * g.dt);
    REQUIRE(zr.times.size() == 2);
    double down = zr.times[zr.signs_after[0] < 0 ? 0 : 1];
    const auto ao = align_phase(orbit, plateaus);
    CHECK(ao.shift == doctest::Approx(down - orbit.orbit_start).epsilon(1e-12));
}
