#pragma once

#include <functional>
#include <vector>

#include "obsgap/grid.hpp"

namespace obsgap {

/// Bounded holomorphic function on the disc |zeta| < radius.
///
/// Callbacks may be invoked concurrently. When no derivative callback is
/// given, derivatives come from the Cauchy integral on a small circle.
struct HoloFunction {
    std::function<cplx(cplx)> eval;
    double radius = 1.0;
    std::function<cplx(cplx)> derivative{};

    cplx operator()(cplx zeta) const { return eval(zeta); }

    /// k-th derivative at zeta (k = 0, 1, 2, ...).
    cplx deriv(cplx zeta, int k = 1) const;

    static HoloFunction constant(cplx c, double radius = 1.0);
    static HoloFunction polynomial(std::vector<cplx> coeffs, double radius = 1.0);
};

/// The phase r(zeta) = -t conj(z) (zeta + xi0)^alpha, holomorphic for |zeta| < xi0.
HoloFunction coherent_phase(double alpha, cplx z, double t, double xi0, double radius);

struct SaddleResult {
    cplx xi_crit;
    cplx c_crit;
    cplx estimate;
    cplx oracle;
    double rel_err;
    bool oracle_converged;
};

struct CriticalPointOptions {
    double tol = 1e-12;
    int max_iter = 60;
    /// sup |h' r''| must stay below this on the sampling disc.
    double contraction_bound = 1.0;
};

/// Root of zeta = h' r'(zeta), h' = h^{1 - alpha}, by damped Newton from h' r'(0).
cplx find_critical_point(const HoloFunction& r, double h, double alpha, const CriticalPointOptions& opts = {});

/// -xi^2 / 2 + h' r(xi).
cplx critical_value(const HoloFunction& r, double h, double alpha, cplx xi_crit);

/// e^{c/h} sqrt(2 pi h) u(xi_crit).
cplx saddle_estimate(const HoloFunction& u, const HoloFunction& r, double h, double alpha, double a);

struct OracleResult {
    cplx value;
    double error_estimate;
    bool converged;  ///< false: tolerance missed, value is the best estimate
};

/// \int_{-a}^{a} e^{-xi^2/2h + r(xi)/h^alpha} u(xi) dxi by adaptive Gauss-Kronrod.
OracleResult quadrature_oracle(const HoloFunction& u, const HoloFunction& r, double h, double alpha, double a,
                               double rel_tol = 1e-10);

struct ExpansionTerms {
    cplx c1;  ///< r(0)
    cplx u0;  ///< sqrt(2 pi) u(0)
};

/// Leading coefficients of the full expansion. Only order 0 and 1 exist.
ExpansionTerms expansion_terms(const HoloFunction& u, const HoloFunction& r, double h, double alpha, int order);

/// Estimate and oracle side by side.
SaddleResult saddle_compare(const HoloFunction& u, const HoloFunction& r, double h, double alpha, double a);

}  // namespace obsgap
