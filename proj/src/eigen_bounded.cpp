#include "obsgap/eigen_bounded.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "obsgap/errors.hpp"

namespace obsgap {
namespace {

constexpr double kPi = std::numbers::pi;

// Stirling series for log Gamma, accurate to machine precision for |w| >= 40 in
// the right half-plane.
cplx lgamma_stirling(cplx w) {
    const cplx iw = 1.0 / w;
    const cplx iw2 = iw * iw;
    const cplx series =
        iw * (1.0 / 12.0 + iw2 * (-1.0 / 360.0 + iw2 * (1.0 / 1260.0 + iw2 * (-1.0 / 1680.0 + iw2 / 1188.0))));
    return (w - 0.5) * std::log(w) - w + 0.5 * std::log(2.0 * kPi) + series;
}

void check_xi(cplx xi) {
    if (!(xi.real() > 0.0)) throw DomainError("eigen_bounded: Re(xi_tilde) must be positive");
}

}  // namespace

SeriesWithDerivative series_coeffs_with_derivative(cplx xi, cplx rho, const SeriesOptions& opts) {
    check_xi(xi);
    SeriesWithDerivative out;
    out.coeffs.push_back(1.0);
    out.d_coeffs.push_back(0.0);
    double max_term = 1.0;
    // Terms grow until k ~ |xi| before the factorial wins; never stop before that.
    const double turning = 2.0 * std::abs(xi) + 4.0;
    for (std::size_t k = 0;; ++k) {
        const double n = 2.0 * static_cast<double>(k);
        const double denom = (n + 1.0) * (n + 2.0);
        const cplx f = (2.0 * n * xi - rho) / denom;
        const cplx c = f * out.coeffs.back();
        const cplx d = f * out.d_coeffs.back() - out.coeffs.back() / denom;
        out.coeffs.push_back(c);
        out.d_coeffs.push_back(d);
        max_term = std::max(max_term, std::abs(c));
        if (static_cast<double>(k) > turning && std::abs(c) <= opts.tol * max_term &&
            std::abs(d) <= opts.tol * std::max(max_term, 1.0))
            break;
        if (c == 0.0 && d == 0.0) break;
        if (out.coeffs.size() > opts.hard_cap)
            throw TruncationError("series_coeffs: no convergence within " + std::to_string(opts.hard_cap) + " terms");
    }
    return out;
}

std::vector<cplx> series_coeffs(cplx xi, cplx rho, const SeriesOptions& opts) {
    return series_coeffs_with_derivative(xi, rho, opts).coeffs;
}

cplx boundary_value(cplx xi, cplx rho, const SeriesOptions& opts) {
    const auto c = series_coeffs(xi, rho, opts);
    cplx s = 0.0;
    // Smallest terms first.
    for (auto it = c.rbegin(); it != c.rend(); ++it) s += *it;
    return s;
}

cplx rho_asymptotic(cplx xi) { return 4.0 / std::sqrt(kPi) * std::pow(xi, 1.5) * std::exp(-xi); }

EigenData solve_rho(cplx xi, const SolveOptions& opts) {
    check_xi(xi);
    if (std::abs(xi) < opts.floor)
        throw DomainError("solve_rho: |xi_tilde| = " + std::to_string(std::abs(xi)) + " is below the floor " +
                          std::to_string(opts.floor));
    if (std::abs(std::arg(xi)) > opts.max_arg) throw DomainError("solve_rho: |arg xi_tilde| exceeds the limit");

    auto evaluate = [&](cplx rho) {
        auto s = series_coeffs_with_derivative(xi, rho, opts.series);
        cplx v = 0.0, dv = 0.0;
        for (std::size_t i = s.coeffs.size(); i-- > 0;) {
            v += s.coeffs[i];
            dv += s.d_coeffs[i];
        }
        return std::tuple{v, dv, std::move(s.coeffs)};
    };

    cplx rho = std::abs(xi) >= opts.seed_switch ? rho_asymptotic(xi) : cplx{0.0};
    std::vector<cplx> trace{rho};
    auto [val, dval, coeffs] = evaluate(rho);
    for (int it = 0; it <= opts.max_iter; ++it) {
        if (std::abs(val) < opts.tol) {
            EigenData ed{xi, rho, xi + rho, std::move(coeffs), 0, std::abs(val), it};
            ed.trunc_n = ed.coeffs.size() - 1;
            return ed;
        }
        if (it == opts.max_iter || dval == 0.0) break;
        const cplx step = val / dval;
        double damp = 1.0;
        for (;;) {
            const cplx cand = rho - damp * step;
            auto next = evaluate(cand);
            if (std::abs(std::get<0>(next)) < std::abs(val) || damp < 1e-3) {
                rho = cand;
                std::tie(val, dval, coeffs) = std::move(next);
                break;
            }
            damp *= 0.5;
        }
        trace.push_back(rho);
        if (!std::isfinite(std::abs(rho))) break;
    }
    throw ConvergenceError("solve_rho: Newton did not converge at xi_tilde = (" + std::to_string(xi.real()) + ", " +
                               std::to_string(xi.imag()) + ")",
                           std::abs(val), trace);
}

cplx series_eval(const EigenData& ed, double v) {
    if (std::abs(v) > 1.0) throw ParameterError("series_eval: |v| must be at most 1");
    const double w = v * v;
    cplx acc = 0.0;
    for (auto it = ed.coeffs.rbegin(); it != ed.coeffs.rend(); ++it) acc = acc * w + *it;
    return acc;
}

cplx eigenfunction_eval(const EigenData& ed, double v) {
    return std::exp(-ed.xi_tilde * (v * v / 2.0)) * series_eval(ed, v);
}

double agmon_upper_check(const EigenData& ed, double eps, std::span<const double> v) {
    if (!(eps > 0.0 && eps <= 1.0)) throw ParameterError("agmon_upper_check: eps must lie in (0, 1]");
    double sup = 0.0;
    for (double x : v) sup = std::max(sup, std::abs(std::exp(-eps * ed.xi_tilde * (x * x / 2.0)) * series_eval(ed, x)));
    return sup;
}

double agmon_upper_check(const EigenData& ed, double eps, std::size_t samples) {
    const auto v = Grid1D::closed(-1.0, 1.0, std::max<std::size_t>(samples, 2)).nodes();
    return agmon_upper_check(ed, eps, std::span<const double>(v));
}

double lower_bound_check(const EigenData& ed, double eps, std::size_t samples) {
    if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("lower_bound_check: eps must lie in (0, 1)");
    const auto grid = Grid1D::closed(-(1.0 - eps), 1.0 - eps, std::max<std::size_t>(samples, 2));
    double sup = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) sup = std::max(sup, std::abs(series_eval(ed, grid.node(i)) - 1.0));
    return sup;
}

ProductParams ProductParams::from(const EigenData& ed) { return {-ed.rho / (4.0 * ed.xi_tilde)}; }

void ProductParams::validate() const {
    if (!(std::abs(mu) < 0.5)) throw ParameterError("ProductParams: |mu| must be below 1/2");
}

cplx delta_partial(const ProductParams& pp, cplx z, std::size_t K) {
    cplx acc = 0.0;
    for (std::size_t k = 1; k <= K; ++k) {
        const double kd = static_cast<double>(k);
        acc += std::log(1.0 + pp.mu / kd) - std::log(1.0 + pp.mu / (kd + z));
    }
    return std::exp(acc);
}

DeltaProduct delta_product(const ProductParams& pp, cplx z, std::size_t min_terms) {
    pp.validate();
    if (!(z.real() > 0.0) || !(std::abs(z) > 0.5)) throw ParameterError("delta_product: need Re z > 0 and |z| > 1/2");
    DeltaProduct out{};
    if (pp.mu == 0.0) {
        out.value = 1.0;
        out.converged = true;
        return out;
    }
    const auto K = std::max<std::size_t>(min_terms, static_cast<std::size_t>(std::ceil(2.0 * std::abs(z))));
    cplx log_partial = 0.0;
    for (std::size_t k = 1; k <= K; ++k) {
        const double kd = static_cast<double>(k);
        log_partial += std::log(1.0 + pp.mu / kd) - std::log(1.0 + pp.mu / (kd + z));
    }
    const double Kp1 = static_cast<double>(K) + 1.0;
    out.tail = lgamma_stirling(Kp1) + lgamma_stirling(Kp1 + z + pp.mu) - lgamma_stirling(Kp1 + pp.mu) -
               lgamma_stirling(Kp1 + z);
    out.terms = K;
    out.tail_bound = 2.0 * std::abs(pp.mu) * std::abs(z) / static_cast<double>(K);
    out.converged = std::abs(out.tail) <= out.tail_bound;
    out.log_value = log_partial + out.tail;
    out.value = std::exp(out.log_value);
    return out;
}

GrowthFit delta_growth_check(const ProductParams& pp, std::span<const cplx> z_samples) {
    if (z_samples.size() < 2) throw ParameterError("delta_growth_check: need at least two samples");
    std::vector<double> x, y;
    for (cplx z : z_samples) {
        if (!(z.real() > 0.0) || !(std::abs(z) > 1.0)) throw ParameterError("delta_growth_check: sample outside range");
        x.push_back(std::log(std::abs(z)));
        y.push_back(delta_product(pp, z).log_value.real());
    }
    return {fit_line(x, y), z_samples.size()};
}

std::vector<cplx> growth_samples(std::size_t count, double r_max, unsigned seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> log_r(0.0, std::log(r_max));
    std::uniform_real_distribution<double> ang(-0.49 * kPi, 0.49 * kPi);
    std::vector<cplx> out;
    out.reserve(count);
    while (out.size() < count) {
        const double r = std::exp(log_r(gen));
        if (!(r > 1.0)) continue;
        out.push_back(std::polar(r, ang(gen)));
    }
    return out;
}

double fd_oracle(double xi, std::size_t nodes) {
    if (!(xi >= 0.0)) throw ParameterError("fd_oracle: xi_tilde must be real and non-negative");
    if (nodes < 500) throw ParameterError("fd_oracle: need at least 500 nodes");
    const double dv = 2.0 / static_cast<double>(nodes + 1);
    Eigen::VectorXd diag(static_cast<Eigen::Index>(nodes));
    Eigen::VectorXd off = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(nodes - 1), -1.0 / (dv * dv));
    for (std::size_t i = 0; i < nodes; ++i) {
        const double v = -1.0 + dv * static_cast<double>(i + 1);
        diag[static_cast<Eigen::Index>(i)] = 2.0 / (dv * dv) + xi * xi * v * v;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw ConvergenceError("fd_oracle: tridiagonal eigensolver failed", 0.0);
    return solver.eigenvalues()[0];
}

}  // namespace obsgap
