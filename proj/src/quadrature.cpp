#include "obsgap/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/legendre.hpp>

#include "obsgap/errors.hpp"

namespace obsgap {

QuadratureRule gauss_legendre(std::size_t n, double a, double b) {
    if (n == 0) throw ParameterError("gauss_legendre: need at least one node");
    if (!(b > a)) throw ParameterError("gauss_legendre: need b > a");
    const int order = static_cast<int>(n);
    // boost returns the non-negative roots in increasing order.
    const auto half = boost::math::legendre_p_zeros<double>(order);
    std::vector<double> ref;
    ref.reserve(n);
    for (auto it = half.rbegin(); it != half.rend(); ++it)
        if (*it != 0.0) ref.push_back(-*it);
    for (double x : half) ref.push_back(x);

    QuadratureRule rule;
    const double mid = 0.5 * (a + b);
    const double rad = 0.5 * (b - a);
    for (double x : ref) {
        const double dp = boost::math::legendre_p_prime<double>(order, x);
        rule.nodes.push_back(mid + rad * x);
        rule.weights.push_back(rad * 2.0 / ((1.0 - x * x) * dp * dp));
    }
    return rule;
}

AdaptiveResult adaptive_integrate(const std::function<cplx(double)>& f, double a, double b,
                                  double rel_tol, unsigned max_depth) {
    if (!(b > a)) throw ParameterError("adaptive_integrate: need b > a");
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    double err = 0.0;
    double l1 = 0.0;
    cplx value = GK::integrate(f, a, b, max_depth, rel_tol, &err, &l1);
    auto done = [&] { return err <= rel_tol * std::abs(value) || err <= 1e-15 * l1; };
    // Boost measures the tolerance against the L1 norm. With cancellation the
    // value is much smaller, so ask again with the tolerance rescaled.
    if (!done() && l1 > 0.0 && std::abs(value) > 0.0) {
        const double tol = std::max(rel_tol * std::abs(value) / l1, 1e-15);
        value = GK::integrate(f, a, b, max_depth + 10, tol, &err, &l1);
    }
    return {value, err, done()};
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw ParameterError("fit_line: need two or more paired samples");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw ParameterError("fit_line: abscissae are all equal");
    LinearFit fit{sxy / sxx, 0.0, 0.0};
    fit.intercept = my - fit.slope * mx;
    for (std::size_t i = 0; i < x.size(); ++i)
        fit.max_residual = std::max(fit.max_residual, std::abs(y[i] - fit.intercept - fit.slope * x[i]));
    return fit;
}

}  // namespace obsgap
