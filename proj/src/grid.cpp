#include "obsgap/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "obsgap/errors.hpp"

namespace obsgap {

Grid1D::Grid1D(double lo, double hi, std::size_t n, bool periodic)
    : lo_(lo), hi_(hi), n_(n), periodic_(periodic), spacing_(0.0) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo))
        throw ParameterError("Grid1D: need finite endpoints with hi > lo");
    if (n < 2) throw ParameterError("Grid1D: need at least 2 nodes");
    spacing_ = periodic ? (hi - lo) / static_cast<double>(n) : (hi - lo) / static_cast<double>(n - 1);
}

Grid1D Grid1D::closed(double lo, double hi, std::size_t n) { return Grid1D(lo, hi, n, false); }

Grid1D Grid1D::periodic(double lo, double hi, std::size_t n) { return Grid1D(lo, hi, n, true); }

std::vector<double> Grid1D::nodes() const {
    std::vector<double> x(n_);
    for (std::size_t i = 0; i < n_; ++i) x[i] = node(i);
    if (!periodic_) x.back() = hi_;
    return x;
}

double Grid1D::weight(std::size_t i) const noexcept {
    if (periodic_) return spacing_;
    return (i == 0 || i + 1 == n_) ? 0.5 * spacing_ : spacing_;
}

double Grid1D::max_abs() const noexcept {
    const double last = periodic_ ? node(n_ - 1) : hi_;
    return std::max(std::abs(lo_), std::abs(last));
}

Grid1D torus_grid(std::size_t n) { return Grid1D::periodic(-std::numbers::pi, std::numbers::pi, n); }

Grid1D aligned_line_grid(std::size_t per_period, int blocks_each_side) {
    if (blocks_each_side < 0) throw ParameterError("aligned_line_grid: negative block count");
    const auto blocks = static_cast<std::size_t>(2 * blocks_each_side + 1);
    const double half = static_cast<double>(blocks) * std::numbers::pi;
    return Grid1D::periodic(-half, half, per_period * blocks);
}

SampledField::SampledField(Grid1D g, std::vector<cplx> v, Side s)
    : grid(g), values(std::move(v)), side(s) {
    if (values.size() != grid.size())
        throw ParameterError("SampledField: " + std::to_string(values.size()) + " values for " +
                             std::to_string(grid.size()) + " nodes");
    for (const auto& z : values)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw ParameterError("SampledField: non-finite sample");
}

double SampledField::sup_norm() const noexcept {
    double m = 0.0;
    for (const auto& z : values) m = std::max(m, std::abs(z));
    return m;
}

FourierCoeffs::FourierCoeffs(int lo, int hi, std::vector<cplx> coeffs)
    : n_min(lo), n_max(hi), c(std::move(coeffs)) {
    if (n_min > n_max) throw ParameterError("FourierCoeffs: n_min > n_max");
    if (c.size() != static_cast<std::size_t>(n_max - n_min + 1))
        throw ParameterError("FourierCoeffs: length does not match mode range");
}

}  // namespace obsgap
