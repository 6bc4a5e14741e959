#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

namespace obsgap {

using cplx = std::complex<double>;

/// Uniform 1-D grid. A closed grid has nodes at both endpoints; a periodic
/// grid covers [lo, hi) and omits hi.
class Grid1D {
public:
    static Grid1D closed(double lo, double hi, std::size_t n);
    static Grid1D periodic(double lo, double hi, std::size_t n);

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    std::size_t size() const noexcept { return n_; }
    bool is_periodic() const noexcept { return periodic_; }

    double spacing() const noexcept { return spacing_; }
    double node(std::size_t i) const noexcept { return lo_ + static_cast<double>(i) * spacing_; }
    std::vector<double> nodes() const;
    /// Trapezoidal weight of node i.
    double weight(std::size_t i) const noexcept;
    /// Largest |x| over the nodes.
    double max_abs() const noexcept;

private:
    Grid1D(double lo, double hi, std::size_t n, bool periodic);

    double lo_;
    double hi_;
    std::size_t n_;
    bool periodic_;
    double spacing_;
};

/// [-pi, pi) with n nodes.
Grid1D torus_grid(std::size_t n);

/// [-(2K+1)pi, (2K+1)pi) with per_period nodes in each 2pi block, so that
/// shifts by 2pi map nodes onto nodes.
Grid1D aligned_line_grid(std::size_t per_period, int blocks_each_side);

struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    static Interval whole() { return {}; }
    double length() const noexcept { return hi - lo; }
};

enum class Side { physical, frequency };

/// Complex samples of a function on a Grid1D.
struct SampledField {
    SampledField(Grid1D grid, std::vector<cplx> values, Side side = Side::physical);

    Grid1D grid;
    std::vector<cplx> values;
    Side side;

    double sup_norm() const noexcept;
};

/// Fourier coefficients c_n for n_min <= n <= n_max.
struct FourierCoeffs {
    FourierCoeffs(int n_min, int n_max, std::vector<cplx> c);

    int n_min;
    int n_max;
    std::vector<cplx> c;

    cplx operator[](int n) const { return c[static_cast<std::size_t>(n - n_min)]; }
    cplx& operator[](int n) { return c[static_cast<std::size_t>(n - n_min)]; }
    std::size_t size() const noexcept { return c.size(); }
};

}  // namespace obsgap
