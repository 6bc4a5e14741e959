#pragma once

#include <functional>
#include <span>

#include "obsgap/grid.hpp"

namespace obsgap {

struct TransformOptions {
    /// Allowed |f| at the truncation endpoints, relative to sup|f|.
    double decay_tol = 1e-10;
    /// Enforce spacing <= h / (8 * max|output node|).
    bool check_resolution = true;
};

/// xi -> (2 pi h)^{-1/2} \int f(x) e^{-i x xi / h} dx by the trapezoidal rule.
SampledField semiclassical_fourier(const SampledField& f, double h, const Grid1D& out_grid,
                                   const TransformOptions& opts = {});

/// x -> (2 pi h)^{-1/2} \int fhat(xi) e^{+i x xi / h} dxi.
SampledField inverse_semiclassical_fourier(const SampledField& fhat, double h, const Grid1D& out_grid,
                                           const TransformOptions& opts = {});

struct NormResult {
    double value = 0.0;
    bool empty = false;  ///< sub does not meet the grid span
};

/// L2 norm over sub: trapezoidal rule on the nodes inside sub, with the two
/// partial end cells closed by linear interpolation of |f|^2.
NormResult l2_norm(const SampledField& f, Interval sub = Interval::whole());

/// Squared-norm version, summed over disjoint pieces.
double l2_norm_squared(const SampledField& f, std::span<const Interval> pieces);

struct Snapshot {
    double t;
    SampledField field;
};

/// sqrt of the trapezoidal time integral of l2_norm(snapshot, sub)^2.
double spacetime_l2_norm(std::span<const Snapshot> snapshots, Interval sub);

/// Same with explicit time weights (e.g. a Gauss-Legendre rule).
double spacetime_l2_norm(std::span<const Snapshot> snapshots, std::span<const double> time_weights,
                         Interval sub);

struct PeriodizeOptions {
    int k_max = 64;
    /// Stop once the sup of the newest +-k pair drops below tol * sup|f|.
    double tol = 1e-13;
};

struct PeriodizeResult {
    SampledField field;  ///< samples on [-pi, pi)
    int k_used;
    double last_increment;
};

/// x -> sum_{|k| <= K} f(x + 2 pi k) for a field sampled on an
/// aligned_line_grid. Throws ConvergenceError when the blocks run out
/// before the tail drops below tolerance.
PeriodizeResult periodize(const SampledField& f_line, const PeriodizeOptions& opts = {});

/// Same for a callable, evaluated on a torus grid of the given size.
/// eval receives all shifted abscissae of one block at once.
PeriodizeResult periodize(const std::function<std::vector<cplx>(std::span<const double>)>& f,
                          std::size_t torus_nodes, const PeriodizeOptions& opts = {});

/// c_n = (2 pi)^{-1} \int_T f e^{-i n x} dx for n_min <= n <= n_max.
/// Throws ResolutionError if |n| reaches the Nyquist index.
FourierCoeffs fourier_coeffs(const SampledField& f_torus, int n_min, int n_max);

/// All resolved modes, |n| < N/2.
FourierCoeffs fourier_coeffs(const SampledField& f_torus);

/// x -> sum_n c_n e^{i n x} on the given grid.
SampledField synthesize(const FourierCoeffs& c, const Grid1D& grid);

struct CoeffIdentityOptions {
    int n_min = 0;
    int n_max = 16;
    std::size_t torus_nodes = 128;
    PeriodizeOptions periodize{};
    /// Independent line quadrature for the Fourier-transform side.
    double line_half_width = 60.0;
    std::size_t line_nodes = 0;  ///< 0: chosen from the resolution rule
    double decay_tol = 1e-8;
};

/// max_n |c_n(per f) - (2 pi)^{-1/2} F(f)(n)|, with the periodized side and
/// the transform side computed on independent grids.
double coeff_identity_check(const std::function<std::vector<cplx>(std::span<const double>)>& f_line,
                            const CoeffIdentityOptions& opts = {});

}  // namespace obsgap

namespace obsgap {

/// Point-set versions of the transforms.
std::vector<cplx> semiclassical_fourier_at(const SampledField& f, double h, std::span<const double> xi,
                                           const TransformOptions& opts = {});
std::vector<cplx> inverse_semiclassical_fourier_at(const SampledField& fhat, double h,
                                                   std::span<const double> x, const TransformOptions& opts = {});

}  // namespace obsgap
