#include <doctest.h>

#include <cmath>
#include <numbers>

#include "obsgap/eigen_bounded.hpp"
#include "obsgap/errors.hpp"

using namespace obsgap;
using std::numbers::pi;

namespace {

double lgamma_ratio_free(int n) {
    // log((n-1)! / (2n)!)
    return std::lgamma(n) - std::lgamma(2.0 * n + 1.0);
}

}  // namespace

TEST_CASE("series coefficients") {
    const cplx xi(7, -2), rho(0.3, 0.1);
    const auto c = series_coeffs(xi, rho);
    CHECK(c[0] == cplx(1));
    CHECK(std::abs(c[1] - (-rho / 2.0)) < 1e-16);
    CHECK(std::abs(c[2] - (4.0 * xi - rho) * (-rho / 2.0) / 12.0) < 1e-15);

    // Closed form from unrolling the recurrence.
    for (int n = 1; n < 30; ++n) {
        cplx prod = 1.0;
        for (int k = 1; k < n; ++k) prod *= 1.0 - rho / (4.0 * xi * static_cast<double>(k));
        const cplx closed = -rho * std::pow(4.0 * xi, n - 1) * std::exp(lgamma_ratio_free(n)) * prod;
        CAPTURE(n);
        CHECK(std::abs(c[n] - closed) <= 1e-12 * std::abs(closed));
    }

    const auto flat = series_coeffs(xi, 0.0);
    for (std::size_t n = 1; n < flat.size(); ++n) CHECK(flat[n] == cplx{});
    CHECK(boundary_value(xi, 0.0) == cplx(1));
    CHECK_THROWS_AS(series_coeffs(cplx(-1, 0), 0.1), DomainError);
    SeriesOptions tiny;
    tiny.hard_cap = 5;
    CHECK_THROWS_AS(series_coeffs(20.0, 0.1, tiny), TruncationError);
}

TEST_CASE("boundary value is holomorphic in rho") {
    const cplx xi = std::polar(6.0, -pi / 5);
    const cplx rho = rho_asymptotic(xi);
    const auto s = series_coeffs_with_derivative(xi, rho);
    cplx exact = 0.0;
    for (auto d : s.d_coeffs) exact += d;
    const double eps = 1e-6;
    const cplx fd_re = (boundary_value(xi, rho + eps) - boundary_value(xi, rho - eps)) / (2 * eps);
    const cplx fd_im = (boundary_value(xi, rho + cplx(0, eps)) - boundary_value(xi, rho - cplx(0, eps))) / cplx(0, 2 * eps);
    CHECK(std::abs(fd_re - exact) < 1e-6 * std::abs(exact));
    CHECK(std::abs(fd_im - exact) < 1e-6 * std::abs(exact));

    // xi = 5 with the asymptotic seed: small but not zero (magnitude recorded here).
    const double b5 = std::abs(boundary_value(5.0, rho_asymptotic(5.0)));
    CHECK(b5 > 1e-4);
    CHECK(b5 < 1.0);
}

TEST_CASE("truncation self-consistency") {
    for (double r : {3.0, 10.0, 20.0}) {
        const cplx xi = std::polar(r, -pi / 4);
        const auto ed = solve_rho(xi);
        auto c = series_coeffs(xi, ed.rho);
        cplx full = 0.0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) full += *it;
        SeriesOptions loose;
        loose.tol = 1e-8;
        auto short_c = series_coeffs(xi, ed.rho, loose);
        CHECK(short_c.size() < c.size());
        // Doubling the length: tail is below the truncation tolerance scale.
        const auto longer = [&] {
            auto v = c;
            for (std::size_t k = c.size() - 1; v.size() < 2 * c.size(); ++k) {
                const double n = 2.0 * static_cast<double>(k);
                v.push_back((2.0 * n * xi - ed.rho) / ((n + 1) * (n + 2)) * v.back());
            }
            return v;
        }();
        cplx sum2 = 0.0;
        for (auto it = longer.rbegin(); it != longer.rend(); ++it) sum2 += *it;
        CHECK(std::abs(sum2 - full) < 1e-15);
    }
}

TEST_CASE("solve_rho against frozen high-precision roots") {
    // mpmath findroot on the 40-digit series
    const std::pair<cplx, cplx> frozen[] = {{5.0, 0.15303833695445023},
                                            {10.0, 0.0030560395144221903},
                                            {20.0, 4.0504270809521066e-7},
                                            {std::polar(10.0, -pi / 4), {0.053831354870509184, -0.024485533413961948}}};
    for (auto [xi, rho] : frozen) {
        CAPTURE(xi);
        const auto ed = solve_rho(xi);
        CHECK(std::abs(ed.rho - rho) < 1e-12 * std::max(1.0, std::abs(rho)) + 1e-14);
        CHECK(ed.lambda == ed.xi_tilde + ed.rho);
        CHECK(ed.boundary_residual <= 1e-12);
        CHECK(ed.coeffs[0] == cplx(1));
        CHECK(ed.trunc_n + 1 == ed.coeffs.size());
    }
}

TEST_CASE("solve_rho properties") {
    for (double r : {1.2, 3.0, 8.0, 14.0}) {
        const auto ed = solve_rho(r);
        CHECK(std::abs(ed.rho.imag()) < 1e-14);
        CHECK(ed.rho.real() > 0);
    }
    const cplx xi(6, -4);
    const auto a = solve_rho(xi), b = solve_rho(std::conj(xi));
    CHECK(std::abs(std::conj(a.rho) - b.rho) < 1e-12);

    const auto r10 = solve_rho(10.0), r20 = solve_rho(20.0);
    const double q10 = std::abs(r10.rho / rho_asymptotic(10.0)), q20 = std::abs(r20.rho / rho_asymptotic(20.0));
    CHECK(std::abs(q10 - 1) < 0.15);
    CHECK(std::abs(q20 - 1) < 0.15);
    CHECK(std::abs(q20 - 1) < std::abs(q10 - 1));

    CHECK_THROWS_AS(solve_rho(0.5), DomainError);
    CHECK_THROWS_AS(solve_rho(cplx(-3, 0)), DomainError);
    CHECK_THROWS_AS(solve_rho(std::polar(5.0, 0.45 * pi)), DomainError);

    SolveOptions stingy;
    stingy.max_iter = 1;
    stingy.seed_switch = 1e9;
    try {
        solve_rho(20.0, stingy);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(e.iterates().size() >= 2);
    }
}

TEST_CASE("eigenfunction") {
    const auto ed = solve_rho(10.0);
    CHECK(eigenfunction_eval(ed, 0.0) == cplx(1));
    CHECK(std::abs(eigenfunction_eval(ed, 1.0)) <= 1e-10);
    CHECK(std::abs(eigenfunction_eval(ed, -1.0)) <= 1e-10);
    for (double v : {0.1, 0.37, 0.8}) CHECK(eigenfunction_eval(ed, v) == eigenfunction_eval(ed, -v));
    CHECK_THROWS_AS(eigenfunction_eval(ed, 1.5), ParameterError);

    // Residual of -g'' + (xi v)^2 g - lambda g by central differences.
    const double d = 1e-4;
    for (double v : {0.2, 0.5, 0.9}) {
        const cplx g = eigenfunction_eval(ed, v);
        const cplx g2 = (eigenfunction_eval(ed, v + d) - 2.0 * g + eigenfunction_eval(ed, v - d)) / (d * d);
        CHECK(std::abs(-g2 + 100.0 * v * v * g - ed.lambda * g) < 1e-5 * std::max(1.0, std::abs(g2)));
    }
}

TEST_CASE("agmon and lower bounds") {
    std::vector<double> up;
    for (double r : {5.0, 10.0, 15.0, 20.0}) up.push_back(agmon_upper_check(solve_rho(r), 0.1));
    for (double u : up) CHECK(u < 1.5);
    const auto ed = solve_rho(12.0);
    CHECK(agmon_upper_check(ed, 1.0) >= 1.0);
    const double origin[] = {0.0};
    CHECK(agmon_upper_check(ed, 0.1, origin) == 1.0);

    EigenData flat = ed;
    flat.rho = 0.0;
    flat.coeffs = series_coeffs(flat.xi_tilde, 0.0);
    CHECK(lower_bound_check(flat, 0.2) == 0.0);

    std::vector<double> x, y;
    for (double r : {8.0, 12.0, 16.0, 20.0}) {
        const auto e = solve_rho(r);
        CHECK(lower_bound_check(e, 0.2) <= lower_bound_check(e, 0.1));
        x.push_back(r);
        y.push_back(std::log(lower_bound_check(e, 0.2)));
    }
    for (std::size_t i = 1; i < y.size(); ++i) CHECK(y[i] < y[i - 1]);
    CHECK(fit_line(x, y).slope < 0);
    CHECK_THROWS_AS(lower_bound_check(ed, 1.0), ParameterError);
}

TEST_CASE("delta product") {
    ProductParams zero{0.0};
    for (cplx z : {cplx(2, 0), cplx(3, 40), cplx(900, -10)}) CHECK(delta_product(zero, z).value == cplx(1));

    // mpmath: Gamma(1+z+mu) / (Gamma(1+mu) Gamma(1+z))
    CHECK(std::abs(delta_product({0.3}, 7.0).value - 2.05192898625) < 1e-10);
    CHECK(std::abs(delta_product({0.3}, {2, 5}).value - cplx(1.7758189398093007, 0.59783546979179173)) < 1e-13);
    const auto far = delta_product({cplx(0.2, -0.1)}, {40, -300});
    CHECK(std::abs(far.value - cplx(1.8797210892267253, -2.3075617111681614)) < 1e-11 * std::abs(far.value));
    CHECK(far.converged);
    CHECK(std::abs(far.tail) <= far.tail_bound);

    const ProductParams p{cplx(0.2, 0.15)};
    const cplx z(3, 2);
    CHECK(std::abs(delta_product({std::conj(p.mu)}, std::conj(z)).value - std::conj(delta_product(p, z).value)) < 1e-14);

    // Partial products: successive differences shrink like 1/K.
    double prev = 1e300;
    for (std::size_t K : {100, 200, 400, 800}) {
        const double diff = std::abs(std::log(delta_partial(p, z, K)) - std::log(delta_partial(p, z, 2 * K)));
        CHECK(diff < prev);
        CHECK(diff * K < 2 * std::abs(p.mu) * std::abs(z) + 1);
        prev = diff;
    }
    // Along the reals the partial products in K are Cauchy at every fixed z.
    for (double x : {10.0, 100.0, 1000.0}) {
        const double a = std::abs(delta_partial({0.3}, x, 20000)), b = std::abs(delta_partial({0.3}, x, 40000));
        CHECK(std::abs(a - b) < 0.3 * x / 20000 * b);
        CHECK(std::abs(delta_product({0.3}, x).value - b) < 0.3 * x / 40000 * b);
    }

    CHECK_THROWS_AS(delta_product({0.6}, 2.0), ParameterError);
    CHECK_THROWS_AS(delta_product({0.3}, cplx(-1, 2)), ParameterError);
    CHECK_THROWS_AS(delta_product({0.3}, 0.4), ParameterError);
}

TEST_CASE("delta growth") {
    const auto s = growth_samples(200);
    REQUIRE(s.size() == 200);
    for (cplx z : s) {
        CHECK(z.real() > 0);
        CHECK(std::abs(z) > 1.0);
        CHECK(std::abs(z) <= 1e3 * (1 + 1e-12));
    }
    CHECK(s == growth_samples(200));

    const auto g0 = delta_growth_check({0.0}, s);
    CHECK(g0.fit.slope == 0.0);
    CHECK(g0.fit.intercept == 0.0);
    const auto g3 = delta_growth_check({0.3}, s);
    const auto g15 = delta_growth_check({0.15}, s);
    CHECK(g3.fit.max_residual < 0.5);
    const double ratio = g15.fit.slope / g3.fit.slope;
    CHECK(ratio > 0.35);
    CHECK(ratio < 0.65);
    const auto eps = ProductParams::from(solve_rho(8.0));
    CHECK(std::abs(eps.mu + solve_rho(8.0).rho / 32.0) < 1e-18);
}

TEST_CASE("finite-difference oracle") {
    CHECK(std::abs(fd_oracle(0.0, 2000) - pi * pi / 4) < 1e-5);
    double prev = 0;
    for (double xi : {0.5, 2.0, 5.0, 10.0}) {
        const double l = fd_oracle(xi, 800);
        CHECK(l > prev);
        prev = l;
    }
    const auto ed = solve_rho(10.0);
    CHECK(std::abs(fd_oracle(10.0, 4000) - ed.lambda.real()) < 1e-6 * ed.lambda.real());
    CHECK_THROWS_AS(fd_oracle(1.0, 100), ParameterError);
    CHECK_THROWS_AS(fd_oracle(-1.0, 1000), ParameterError);
}
