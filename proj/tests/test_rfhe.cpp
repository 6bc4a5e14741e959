#include <doctest.h>

#include <cmath>
#include <numbers>

#include "obsgap/errors.hpp"
#include "obsgap/quadrature.hpp"
#include "obsgap/rfhe.hpp"

using namespace obsgap;
using std::numbers::pi;

namespace {

const EvolutionParams kEvo{0.5, std::polar(1.0, pi / 4), 1.0};

Grid1D resolved_grid(double L, double h, double xi0 = 1.0) {
    return Grid1D::closed(-L, L, static_cast<std::size_t>(std::ceil(2 * L * 8 * 1.5 * xi0 / h)) + 1);
}

}  // namespace

TEST_CASE("cutoff shape") {
    const CutoffSpec c{1.0};
    CHECK(cutoff_eval(c, 0.0) == 1.0);
    CHECK(cutoff_eval(c, 0.25) == 1.0);
    CHECK(cutoff_eval(c, 1.0) == 0.0);
    CHECK(cutoff_eval(c, 0.5) == 0.0);
    const double m = cutoff_eval(c, 3.0 / 8);
    CHECK(m > 0.0);
    CHECK(m < 1.0);
    CHECK(m == doctest::Approx(0.5));  // mpmath
    CHECK(cutoff_eval(c, -3.0 / 8) == m);
    double prev = 1.0;
    for (int i = 0; i <= 100; ++i) {
        const double s = 0.25 + 0.25 * i / 100.0;
        const double v = cutoff_eval(c, s);
        CHECK(v <= prev);
        CHECK(v >= 0.0);
        prev = v;
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS((EvolutionParams{1.0, 1.0, 1.0}.validate()), ParameterError);
    CHECK_THROWS_AS((EvolutionParams{0.5, cplx(0, 1), 1.0}.validate()), ParameterError);
    CHECK_THROWS_AS((EvolutionParams{0.5, 1.0, 0.0}.validate()), ParameterError);
    CHECK_NOTHROW((EvolutionParams{0.0, 1.0, 1.0}.validate()));
    CHECK_THROWS_AS((CoherentStateSpec{0.0, 0.1}.validate()), ParameterError);
    CHECK_THROWS_AS((CoherentStateSpec{1.0, -0.1}.validate()), ParameterError);
}

TEST_CASE("band-limited state") {
    const CoherentStateSpec cs{1.0, 0.1};
    const CutoffSpec cut{1.0};
    const double x0[] = {0.0};
    // mpmath quadrature of the defining integral.
    const cplx g0 = evolve_line_at(cs, cut, kEvo, 0.0, x0)[0];
    CHECK(std::abs(g0 - 1.0156733034243566) < 1e-10);
    // The plateau is narrower than one Gaussian width, so the cutoff is not a tail-only change.
    CHECK(std::abs(g0) < std::pow(pi * cs.h, -0.25));

    CHECK(frequency_profile(cs, cut, kEvo, 0.0, 0.49) == cplx{});
    CHECK(frequency_profile(cs, cut, kEvo, 0.0, 1.51) == cplx{});
    CHECK(frequency_profile(cs, cut, kEvo, 1.0, -1.0) == cplx{});

    const auto grid = resolved_grid(6, cs.h);
    const auto g = bandlimited_state(cs, cut, grid);
    for (std::size_t i = 0; i < grid.size() / 2; ++i)
        CHECK(std::abs(std::abs(g.values[i]) - std::abs(g.values[grid.size() - 1 - i])) < 1e-12);

    CHECK_THROWS_AS(bandlimited_state(cs, cut, Grid1D::closed(-6, 6, 200)), ResolutionError);
}

TEST_CASE("evolution on the line") {
    const CoherentStateSpec cs{1.0, 0.1};
    const CutoffSpec cut{1.0};
    const double xs[] = {0.0, 0.7};
    const auto g = evolve_line_at(cs, cut, kEvo, 1.0, xs);
    CHECK(std::abs(g[0] - cplx(-0.06225745932114096, 0.090389050567432166)) < 1e-8 * std::abs(g[0]));
    CHECK(std::abs(g[1] - cplx(-0.013306590720113433, 0.016482197962224523)) < 1e-8 * std::abs(g[1]));

    // Same value through the adaptive quadrature of the defining integral.
    const auto oracle = adaptive_integrate(
        [&](double xi) { return frequency_profile(cs, cut, kEvo, 1.0, xi) * std::exp(cplx(0, 0.7 * xi / cs.h)); }, 0.5,
        1.5, 1e-12);
    CHECK(std::abs(oracle.value / std::sqrt(2 * pi * cs.h) - g[1]) < 1e-9);

    const auto grid = resolved_grid(4, cs.h);
    const auto a = bandlimited_state(cs, cut, grid);
    const auto b = evolve_line(cs, cut, kEvo, 0.0, grid);
    CHECK(a.values == b.values);

    CHECK_THROWS_AS(evolve_line(cs, cut, kEvo, -0.1, grid), ParameterError);

    for (double xi : {0.6, 0.9, 1.0, 1.3}) {
        for (double t : {0.25, 1.0}) {
            const double ratio = std::abs(frequency_profile(cs, cut, kEvo, t, xi)) /
                                 std::abs(frequency_profile(cs, cut, kEvo, 0.0, xi));
            CHECK(ratio == doctest::Approx(std::exp(-t * kEvo.z.real() * std::pow(xi / cs.h, 0.5))).epsilon(1e-13));
            CHECK(ratio <= 1.0);
        }
    }
}

TEST_CASE("line semigroup and norm decay") {
    const CoherentStateSpec cs{1.0, 0.1};
    const CutoffSpec cut{1.0};
    for (double xi : {0.55, 0.8, 1.2}) {
        const cplx s = frequency_profile(cs, cut, kEvo, 0.3, xi) / frequency_profile(cs, cut, kEvo, 0.0, xi);
        const cplx t = frequency_profile(cs, cut, kEvo, 0.5, xi) / frequency_profile(cs, cut, kEvo, 0.0, xi);
        const cplx st = frequency_profile(cs, cut, kEvo, 0.8, xi) / frequency_profile(cs, cut, kEvo, 0.0, xi);
        CHECK(std::abs(s * t - st) < 1e-15);
    }
    const auto grid = resolved_grid(30, cs.h);
    double prev = 1e300;
    for (double t : {0.0, 0.25, 0.5, 1.0}) {
        const double n = l2_norm(evolve_line(cs, cut, kEvo, t, grid)).value;
        CHECK(n < prev);
        prev = n;
    }
}

TEST_CASE("torus evolution") {
    const CoherentStateSpec cs{1.0, 0.1};
    const CutoffSpec cut{1.0};
    const auto c0 = torus_initial_coeffs(cs, cut);
    CHECK(c0.n_min <= 5);
    CHECK(c0.n_max >= 15);
    const auto same = evolve_torus(c0, kEvo, 0.0);
    CHECK(same.c == c0.c);

    const auto ab = evolve_torus(evolve_torus(c0, kEvo, 0.3), kEvo, 0.45);
    const auto direct = evolve_torus(c0, kEvo, 0.75);
    for (int n = c0.n_min; n <= c0.n_max; ++n) {
        CHECK(std::abs(ab[n] - direct[n]) < 1e-14);
        CHECK(std::abs(direct[n]) <= std::abs(c0[n]));
    }

    const FourierCoeffs z(-2, 2, {1, 2, 3, 4, 5});
    const auto zt = evolve_torus(z, kEvo, 5.0);
    CHECK(zt[0] == cplx(3));
    CHECK_THROWS_AS(evolve_torus(z, kEvo, -1.0), ParameterError);
}

TEST_CASE("pointwise bounds") {
    const double hs[] = {0.2, 0.1, 0.05};
    const auto rep = verify_pointwise_bounds(1.0, CutoffSpec{1.0}, kEvo, hs, 0.5);
    REQUIRE(rep.rows.size() == 3);
    CHECK(rep.slope_log_m_out < 0.0);
    for (const auto& r : rep.rows) {
        CAPTURE(r.h);
        CHECK(r.h * std::log(r.m_out) < 0.0);
        CHECK(r.m_in < 1.0);
        CHECK(r.peak_at_t0 >= std::pow(pi * r.h, -0.25) / 2);
    }
    CHECK_THROWS_AS(verify_pointwise_bounds(1.0, CutoffSpec{1.0}, kEvo, hs, 4.0), ParameterError);
    const double rising[] = {0.1, 0.2};
    CHECK_THROWS_AS(verify_pointwise_bounds(1.0, CutoffSpec{1.0}, kEvo, rising, 0.5), ParameterError);
}
