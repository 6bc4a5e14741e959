#pragma once

#include <span>
#include <vector>

#include "obsgap/grid.hpp"
#include "obsgap/quadrature.hpp"

namespace obsgap {

/// Ground state of -d^2/dv^2 + (xi v)^2 on (-1, 1) with Dirichlet conditions,
/// written as g(v) = e^{-xi v^2/2} u(v), u(v) = sum_n coeffs[n] v^{2n}.
struct EigenData {
    cplx xi_tilde;
    cplx rho;
    cplx lambda;  ///< xi_tilde + rho
    std::vector<cplx> coeffs;
    std::size_t trunc_n = 0;
    double boundary_residual = 0.0;
    int newton_iterations = 0;
};

struct SeriesOptions {
    /// Stop once |term| < tol * max |term| (and past the turning index).
    double tol = 1e-17;
    std::size_t hard_cap = 200000;
};

/// Even coefficients of the solution of -u'' + 2 xi v u' - rho u = 0 with u(0) = 1, u'(0) = 0.
std::vector<cplx> series_coeffs(cplx xi_tilde, cplx rho, const SeriesOptions& opts = {});

/// Coefficients together with their derivative in rho.
struct SeriesWithDerivative {
    std::vector<cplx> coeffs;
    std::vector<cplx> d_coeffs;
};
SeriesWithDerivative series_coeffs_with_derivative(cplx xi_tilde, cplx rho, const SeriesOptions& opts = {});

/// u(1) = sum of the even coefficients; the eigenvalue condition is u(1) = 0.
cplx boundary_value(cplx xi_tilde, cplx rho, const SeriesOptions& opts = {});

/// (4 / sqrt(pi)) xi^{3/2} e^{-xi}: large-|xi| behaviour of rho.
cplx rho_asymptotic(cplx xi_tilde);

struct SolveOptions {
    double tol = 1e-12;
    int max_iter = 100;
    double floor = 1.0;
    double max_arg = 3.0 * 3.14159265358979323846 / 8.0;
    /// Below this modulus the Newton seed is 0 instead of the asymptotic value.
    double seed_switch = 5.0;
    SeriesOptions series{};
};

/// Newton on rho -> boundary_value with the exact rho-derivative.
EigenData solve_rho(cplx xi_tilde, const SolveOptions& opts = {});

/// g(v) = e^{-xi v^2 / 2} u(v), |v| <= 1.
cplx eigenfunction_eval(const EigenData& ed, double v);

/// u(v) alone.
cplx series_eval(const EigenData& ed, double v);

/// sup_v |e^{(1 - eps) xi v^2 / 2} g(v)| over a uniform v-grid on [-1, 1].
double agmon_upper_check(const EigenData& ed, double eps, std::size_t samples = 2001);

/// Same over an explicit set of abscissae in [-1, 1].
double agmon_upper_check(const EigenData& ed, double eps, std::span<const double> v);

/// sup_{|v| < 1 - eps} |u(v) - 1|.
double lower_bound_check(const EigenData& ed, double eps, std::size_t samples = 2001);

/// Product parameter mu = -rho / (4 xi).
struct ProductParams {
    cplx mu;

    static ProductParams from(const EigenData& ed);
    void validate() const;
};

struct DeltaProduct {
    cplx value;
    cplx log_value;
    std::size_t terms;   ///< factors summed directly
    cplx tail;           ///< log of the remaining factors, from Stirling series
    double tail_bound;   ///< 2 |mu| |z| / K
    bool converged;
};

/// prod_{k >= 1} (1 + mu/k) / (1 + mu/(k + z)).
DeltaProduct delta_product(const ProductParams& pp, cplx z, std::size_t min_terms = 50);

/// Partial product over k <= K, for convergence studies.
cplx delta_partial(const ProductParams& pp, cplx z, std::size_t K);

struct GrowthFit {
    LinearFit fit;  ///< log|delta| against log|z|
    std::size_t samples;
};

GrowthFit delta_growth_check(const ProductParams& pp, std::span<const cplx> z_samples);

/// Deterministic samples with 1 < |z| <= r_max and Re z > 0.
std::vector<cplx> growth_samples(std::size_t count, double r_max = 1e3, unsigned seed = 20240917u);

/// Lowest eigenvalue of the central-difference matrix of -d^2/dv^2 + (xi v)^2
/// on (-1, 1), Dirichlet rows removed. Independent check for real xi.
double fd_oracle(double xi_tilde, std::size_t nodes);

}  // namespace obsgap
