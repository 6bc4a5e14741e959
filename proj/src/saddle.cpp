#include "obsgap/saddle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "obsgap/errors.hpp"
#include "obsgap/quadrature.hpp"

namespace obsgap {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kCauchyPoints = 64;

void check_h_alpha(double h, double alpha) {
    if (!(h > 0.0)) throw ParameterError("saddle: h must be positive");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("saddle: alpha must lie in (0, 1)");
}

}  // namespace

cplx HoloFunction::deriv(cplx zeta, int k) const {
    if (k < 0) throw ParameterError("HoloFunction::deriv: negative order");
    if (k == 0) return eval(zeta);
    if (k == 1 && derivative) return derivative(zeta);
    const double room = radius - std::abs(zeta);
    if (!(room > 0.0)) throw DomainError("HoloFunction::deriv: point outside the disc");
    // Circle well inside the disc; the trapezoidal rule on it converges geometrically.
    const double rho = std::min(0.25 * room, 0.1);
    cplx acc = 0.0;
    for (int j = 0; j < kCauchyPoints; ++j) {
        const double theta = 2.0 * kPi * j / kCauchyPoints;
        acc += eval(zeta + std::polar(rho, theta)) * std::polar(1.0, -k * theta);
    }
    return std::tgamma(k + 1.0) * acc / (static_cast<double>(kCauchyPoints) * std::pow(rho, k));
}

HoloFunction HoloFunction::constant(cplx c, double radius) {
    return {[c](cplx) { return c; }, radius, [](cplx) { return cplx{}; }};
}

HoloFunction HoloFunction::polynomial(std::vector<cplx> coeffs, double radius) {
    auto eval = [coeffs](cplx zeta) {
        cplx acc = 0.0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * zeta + *it;
        return acc;
    };
    auto deriv = [coeffs](cplx zeta) {
        cplx acc = 0.0;
        for (std::size_t k = coeffs.size(); k-- > 1;) acc = acc * zeta + static_cast<double>(k) * coeffs[k];
        return acc;
    };
    return {eval, radius, deriv};
}

HoloFunction coherent_phase(double alpha, cplx z, double t, double xi0, double radius) {
    if (!(radius < xi0)) throw ParameterError("coherent_phase: radius must be below xi0");
    const cplx k = -t * std::conj(z);
    auto eval = [=](cplx zeta) { return k * std::pow(zeta + xi0, alpha); };
    auto deriv = [=](cplx zeta) { return k * alpha * std::pow(zeta + xi0, alpha - 1.0); };
    return {eval, radius, deriv};
}

cplx find_critical_point(const HoloFunction& r, double h, double alpha, const CriticalPointOptions& opts) {
    check_h_alpha(h, alpha);
    const double hp = std::pow(h, 1.0 - alpha);

    // Lipschitz sampling of the fixed-point map on the half-radius circle;
    // by the maximum principle this bounds |h' r''| on the whole sub-disc.
    const double sub = 0.5 * r.radius;
    double lip = 0.0;
    for (int j = 0; j < 32; ++j) lip = std::max(lip, hp * std::abs(r.deriv(std::polar(sub, 2.0 * kPi * j / 32), 2)));
    if (!(lip < opts.contraction_bound))
        throw DomainError("find_critical_point: zeta -> h' r'(zeta) is not a contraction (sup |h' r''| = " +
                          std::to_string(lip) + ")");

    auto F = [&](cplx zeta) { return zeta - hp * r.deriv(zeta, 1); };
    cplx zeta = hp * r.deriv(0.0, 1);
    std::vector<cplx> trace{zeta};
    if (!(std::abs(zeta) < sub))
        throw ConvergenceError("find_critical_point: starting point h' r'(0) lies outside the sub-disc",
                               std::abs(zeta), trace);
    cplx res = F(zeta);
    for (int it = 0; it < opts.max_iter; ++it) {
        if (std::abs(res) < opts.tol) return zeta;
        const cplx step = res / (1.0 - hp * r.deriv(zeta, 2));
        double damp = 1.0;
        cplx next = zeta - step;
        // Leaving the sub-disc means the iteration has lost the root.
        if (!(std::abs(next) < sub)) {
            trace.push_back(next);
            break;
        }
        cplx next_res = F(next);
        while (std::abs(next_res) > std::abs(res) && damp > 1e-4) {
            damp *= 0.5;
            next = zeta - damp * step;
            next_res = F(next);
        }
        zeta = next;
        res = next_res;
        trace.push_back(zeta);
    }
    if (std::abs(res) < opts.tol && std::abs(zeta) < sub) return zeta;
    throw ConvergenceError("find_critical_point: Newton iteration did not converge", std::abs(res), trace);
}

cplx critical_value(const HoloFunction& r, double h, double alpha, cplx xi_crit) {
    check_h_alpha(h, alpha);
    return -xi_crit * xi_crit / 2.0 + std::pow(h, 1.0 - alpha) * r(xi_crit);
}

cplx saddle_estimate(const HoloFunction& u, const HoloFunction& r, double h, double alpha, double a) {
    if (!(a > 0.0) || a > u.radius || a > r.radius) throw ParameterError("saddle_estimate: a must lie in (0, radius]");
    const cplx xi = find_critical_point(r, h, alpha);
    const cplx c = critical_value(r, h, alpha, xi);
    return std::exp(c / h) * std::sqrt(2.0 * kPi * h) * u(xi);
}

OracleResult quadrature_oracle(const HoloFunction& u, const HoloFunction& r, double h, double alpha, double a,
                               double rel_tol) {
    check_h_alpha(h, alpha);
    if (!(a > 0.0)) throw ParameterError("quadrature_oracle: a must be positive");
    const double ha = std::pow(h, alpha);
    auto f = [&](double xi) { return std::exp(-xi * xi / (2.0 * h) + r(xi) / ha) * u(xi); };
    // Split at the Gaussian peak so each half sees a monotone envelope.
    const auto left = adaptive_integrate(f, -a, 0.0, rel_tol);
    const auto right = adaptive_integrate(f, 0.0, a, rel_tol);
    const cplx value = left.value + right.value;
    const double err = left.error_estimate + right.error_estimate;
    // The tolerance applies to the whole integral, not to each half.
    const bool ok = (left.converged && right.converged) || err <= rel_tol * std::abs(value);
    return {value, err, ok};
}

ExpansionTerms expansion_terms(const HoloFunction& u, const HoloFunction& r, double h, double alpha, int order) {
    check_h_alpha(h, alpha);
    if (order < 0) throw ParameterError("expansion_terms: negative order");
    if (order > 1) throw ParameterError("expansion_terms: orders above 1 are not supported");
    return {r(0.0), std::sqrt(2.0 * kPi) * u(0.0)};
}

SaddleResult saddle_compare(const HoloFunction& u, const HoloFunction& r, double h, double alpha, double a) {
    SaddleResult out{};
    out.xi_crit = find_critical_point(r, h, alpha);
    out.c_crit = critical_value(r, h, alpha, out.xi_crit);
    out.estimate = saddle_estimate(u, r, h, alpha, a);
    const auto oracle = quadrature_oracle(u, r, h, alpha, a);
    out.oracle = oracle.value;
    out.oracle_converged = oracle.converged;
    out.rel_err = std::abs(out.oracle) > 0.0 ? std::abs(out.estimate - out.oracle) / std::abs(out.oracle) : 0.0;
    return out;
}

}  // namespace obsgap
