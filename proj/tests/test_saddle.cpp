#include <doctest.h>

#include <cmath>
#include <numbers>

#include "obsgap/errors.hpp"
#include "obsgap/saddle.hpp"

using namespace obsgap;
using std::numbers::pi;

namespace {

const cplx kZ = std::polar(1.0, pi / 4);

HoloFunction linear(cplx a, cplx b) { return HoloFunction::polynomial({b, a}); }

}  // namespace

TEST_CASE("critical points") {
    CHECK(find_critical_point(HoloFunction::constant(3.0), 0.01, 0.5) == cplx{});
    CHECK(std::abs(find_critical_point(linear(1, 0), 0.01, 0.5) - 0.1) < 1e-14);
    CHECK(std::abs(find_critical_point(HoloFunction::polynomial({0, 0, 1}), 0.01, 0.5)) < 1e-14);

    // Cauchy-integral derivatives when none is supplied.
    const HoloFunction cubic{[](cplx z) { return z * z * z / 3.0 + z; }, 1.0};
    CHECK(std::abs(cubic.deriv(0.2, 1) - 1.04) < 1e-13);
    CHECK(std::abs(cubic.deriv(0.2, 2) - 0.4) < 1e-12);
    const cplx xi = find_critical_point(cubic, 0.01, 0.5);
    CHECK(std::abs(xi - 0.1 * (xi * xi + 1.0)) < 1e-12);

    const auto r = coherent_phase(0.5, kZ, 1.0, 1.0, 0.9);
    for (double h : {0.1, 0.05, 0.02}) {
        const cplx x = find_critical_point(r, h, 0.5);
        CHECK(std::abs(x - std::sqrt(h) * r.deriv(x)) < 1e-12);
        CHECK(std::abs(x) < 1.5 * std::sqrt(h));
    }
}

TEST_CASE("critical point failures") {
    // h' r'' = 10: the fixed-point map expands.
    const auto steep = HoloFunction::polynomial({0, 0, 1000});
    CHECK_THROWS_AS(find_critical_point(steep, 0.01, 0.5), DomainError);
    CHECK_THROWS_AS(find_critical_point(linear(1, 0), 0.0, 0.5), ParameterError);
    CHECK_THROWS_AS(find_critical_point(linear(1, 0), 0.01, 1.0), ParameterError);

    // Root driven out of the disc: exp(z) derivative pushes zeta = h' e^zeta with large h'.
    const HoloFunction e{[](cplx z) { return 4.0 * std::exp(z); }, 1.0};
    CriticalPointOptions o;
    o.contraction_bound = 1e9;
    try {
        find_critical_point(e, 0.81, 0.5, o);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& err) {
        CHECK(!err.iterates().empty());
    }
}

TEST_CASE("critical values") {
    CHECK(critical_value(HoloFunction::constant(0.0), 0.01, 0.5, 0.0) == cplx{});
    CHECK(std::abs(critical_value(HoloFunction::constant(2.0), 0.01, 0.5, 0.0) - 0.2) < 1e-15);
    const auto r = linear(1, 0);
    CHECK(std::abs(critical_value(r, 0.01, 0.5, find_critical_point(r, 0.01, 0.5)) - 0.005) < 1e-15);
}

TEST_CASE("gaussian baseline") {
    const auto zero = HoloFunction::constant(0.0);
    const auto one = HoloFunction::constant(1.0);
    CHECK(std::abs(saddle_estimate(one, zero, 0.01, 0.5, 1.0) - std::sqrt(2 * pi * 0.01)) < 1e-15);
    // mpmath: \int_{-1}^{1} e^{-x^2/2h}
    const auto o1 = quadrature_oracle(one, zero, 0.01, 0.5, 1.0);
    CHECK(o1.converged);
    CHECK(std::abs(o1.value - 0.25066282746310005) < 1e-12);
    const auto o2 = quadrature_oracle(one, zero, 0.02, 0.5, 1.0);
    CHECK(std::abs(o2.value - 0.35449077018055819) < 1e-12);

    const auto odd = linear(1, 0);
    CHECK(std::abs(quadrature_oracle(odd, zero, 0.02, 0.5, 1.0).value) < 1e-14);

    const double c = 0.3;
    const auto shifted = quadrature_oracle(one, HoloFunction::constant(c), 0.02, 0.5, 1.0).value;
    CHECK(std::abs(shifted - std::exp(c / std::sqrt(0.02)) * o2.value) < 1e-12);

    // oracle / sqrt(2 pi h) -> u(0)
    const auto u = HoloFunction::polynomial({2.0, 0.0, 1.0});
    double prev = 1e300;
    for (double h : {0.1, 0.01, 0.001}) {
        const double dev = std::abs(quadrature_oracle(u, zero, h, 0.5, 1.0).value / std::sqrt(2 * pi * h) - 2.0);
        CHECK(dev < prev);
        prev = dev;
    }
}

TEST_CASE("coherent phase against frozen oracle") {
    const auto r = coherent_phase(0.5, kZ, 1.0, 1.0, 0.9);
    const auto one = HoloFunction::constant(1.0, 0.9);
    // mpmath quadrature over [-0.9, 0.9]
    const std::pair<double, cplx> frozen[] = {{0.1, {-0.040866313793575411, 0.075751044714619024}},
                                              {0.05, {-0.023820346491544291, 0.0032903300020078636}},
                                              {0.02, {0.00034636180764671263, -0.002385086684777688}}};
    double prev = 1e300;
    std::vector<double> scaled;
    for (auto [h, ref] : frozen) {
        const auto res = saddle_compare(one, r, h, 0.5, 0.9);
        CHECK(std::abs(res.oracle - ref) < 1e-10 * std::abs(ref));
        CHECK(res.oracle_converged);
        CHECK(res.rel_err < prev);
        prev = res.rel_err;
        scaled.push_back(res.rel_err / std::sqrt(h));
    }
    CHECK(*std::max_element(scaled.begin(), scaled.end()) / *std::min_element(scaled.begin(), scaled.end()) < 3.0);
}

TEST_CASE("conjugation and linearity") {
    const double h = 0.05;
    const auto r = coherent_phase(0.5, kZ, 1.0, 1.0, 0.9);
    const auto rc = coherent_phase(0.5, std::conj(kZ), 1.0, 1.0, 0.9);
    const auto u = HoloFunction::polynomial({cplx(1, 0.5), cplx(0.3, 0)}, 0.9);
    const auto uc = HoloFunction::polynomial({cplx(1, -0.5), cplx(0.3, 0)}, 0.9);
    const auto a = saddle_compare(u, r, h, 0.5, 0.9);
    const auto b = saddle_compare(uc, rc, h, 0.5, 0.9);
    CHECK(std::abs(std::conj(a.estimate) - b.estimate) < 1e-14);
    CHECK(std::abs(std::conj(a.oracle) - b.oracle) < 1e-12);

    const auto u2 = HoloFunction::polynomial({cplx(0, 1), cplx(-2, 1)}, 0.9);
    const auto sum = HoloFunction::polynomial({cplx(1, 0.5) + 3.0 * cplx(0, 1), 0.3 + 3.0 * cplx(-2, 1)}, 0.9);
    const auto c = saddle_compare(u2, r, h, 0.5, 0.9);
    const auto d = saddle_compare(sum, r, h, 0.5, 0.9);
    CHECK(std::abs(d.estimate - (a.estimate + 3.0 * c.estimate)) < 1e-14);
    CHECK(std::abs(d.oracle - (a.oracle + 3.0 * c.oracle)) < 1e-12);
}

TEST_CASE("expansion terms") {
    const auto zero = HoloFunction::constant(0.0);
    CHECK(expansion_terms(zero, HoloFunction::constant(5.0), 0.01, 0.5, 1).c1 == cplx(5));
    CHECK(std::abs(expansion_terms(HoloFunction::constant(1.0), zero, 0.01, 0.5, 0).u0 - 2.5066282746310002) < 1e-15);
    CHECK(expansion_terms(zero, linear(1, 3), 0.01, 0.5, 1).c1 == cplx(3));
    CHECK_THROWS_AS(expansion_terms(zero, zero, 0.01, 0.5, 2), ParameterError);
}
