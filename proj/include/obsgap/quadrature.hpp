#pragma once

#include <functional>
#include <span>
#include <vector>

#include "obsgap/grid.hpp"

namespace obsgap {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule mapped onto (a, b).
QuadratureRule gauss_legendre(std::size_t n, double a, double b);

struct AdaptiveResult {
    cplx value;
    double error_estimate;
    bool converged;
};

/// Adaptive Gauss-Kronrod (15-point) integration of a complex integrand on
/// [a, b]. Reports convergence instead of throwing when the tolerance is
/// not reached within max_depth bisections.
AdaptiveResult adaptive_integrate(const std::function<cplx(double)>& f, double a, double b,
                                  double rel_tol = 1e-10, unsigned max_depth = 30);

struct LinearFit {
    double slope;
    double intercept;
    double max_residual;  ///< max |y - (intercept + slope x)|
};

/// Ordinary least squares y ~ intercept + slope x.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace obsgap
