#pragma once

#include <span>
#include <vector>

#include "obsgap/grid.hpp"
#include "obsgap/spectral.hpp"

namespace obsgap {

/// Rotated fractional heat semigroup e^{-t conj(z) (-Delta)^{alpha/2}} on [0, T].
struct EvolutionParams {
    double alpha = 0.5;
    cplx z = std::polar(1.0, 0.25 * 3.14159265358979323846);
    double T = 1.0;

    void validate() const;
};

/// Coherent state (pi h)^{-1/4} e^{i x xi0 / h - x^2 / 2h}.
struct CoherentStateSpec {
    double xi0 = 1.0;
    double h = 0.1;

    void validate() const;
};

/// Smooth even cutoff: 1 on [-xi0/4, xi0/4], 0 outside [-xi0/2, xi0/2].
struct CutoffSpec {
    double xi0 = 1.0;

    double inner() const noexcept { return xi0 / 4.0; }
    double outer() const noexcept { return xi0 / 2.0; }
};

double cutoff_eval(const CutoffSpec& spec, double s);

cplx coherent_state(const CoherentStateSpec& cs, double x);

/// F_h of the evolved band-limited state:
/// (pi h)^{-1/4} chi(xi - xi0) e^{-(xi - xi0)^2 / 2h - t conj(z) |xi|^alpha / h^alpha}.
/// Zero outside the cutoff support; |xi|^alpha is never evaluated there.
cplx frequency_profile(const CoherentStateSpec& cs, const CutoffSpec& cut, const EvolutionParams& evo,
                       double t, double xi);

struct LineOptions {
    std::size_t xi_nodes = 0;  ///< 0: chosen from the resolution rule
    TransformOptions transform{};
};

/// Closed grid on the support [xi0/2, 3 xi0/2] of the cutoff, fine enough to
/// resolve e^{i x xi / h} up to |x| = x_max.
Grid1D frequency_grid(const CoherentStateSpec& cs, const CutoffSpec& cut, double x_max,
                      std::size_t xi_nodes = 0);

/// g_{0,h} = F_h^{-1}(chi(xi - xi0) F_h(phi)(xi)).
SampledField bandlimited_state(const CoherentStateSpec& cs, const CutoffSpec& cut, const Grid1D& grid,
                               const LineOptions& opts = {});

/// e^{-t A*} g_{0,h} on the real line.
SampledField evolve_line(const CoherentStateSpec& cs, const CutoffSpec& cut, const EvolutionParams& evo,
                         double t, const Grid1D& x_grid, const LineOptions& opts = {});

/// Pointwise version of evolve_line at arbitrary abscissae.
std::vector<cplx> evolve_line_at(const CoherentStateSpec& cs, const CutoffSpec& cut,
                                 const EvolutionParams& evo, double t, std::span<const double> x,
                                 const LineOptions& opts = {});

/// Fourier coefficients of the periodized initial state,
/// c_n = (2 pi)^{-1/2} sqrt(h) F_h(g_{0,h})(h n), over every n the cutoff lets through.
FourierCoeffs torus_initial_coeffs(const CoherentStateSpec& cs, const CutoffSpec& cut);

/// c_n -> c_n e^{-t conj(z) |n|^alpha}.
FourierCoeffs evolve_torus(const FourierCoeffs& c0, const EvolutionParams& evo, double t);

struct PointwiseBoundRow {
    double h;
    double m_out;        ///< sup_{|x| > eps} |x|^2 |g_h(t, x)|
    double x_at_m_out;
    double m_in;         ///< h^alpha sup_{|x| < xi0/8} |log|g_h(t, x)| + x^2 / 2h|
    double peak_at_t0;   ///< |g_h(0, 0)|
};

struct PointwiseBoundReport {
    std::vector<PointwiseBoundRow> rows;
    double slope_log_m_out;  ///< fitted slope of log m_out against 1/h
    double max_m_in;
};

struct PointwiseBoundOptions {
    double t = 1.0;
    double line_half_width = 40.0;
    std::size_t inner_samples = 201;
    LineOptions line{};
};

PointwiseBoundReport verify_pointwise_bounds(double xi0, const CutoffSpec& cut, const EvolutionParams& evo,
                                             std::span<const double> h_list, double eps,
                                             const PointwiseBoundOptions& opts = {});

}  // namespace obsgap
