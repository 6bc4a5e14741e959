#include "obsgap/rfhe.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "obsgap/errors.hpp"
#include "obsgap/quadrature.hpp"

namespace obsgap {
namespace {

constexpr double kPi = std::numbers::pi;

double smooth_step(double t) {
    auto f = [](double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; };
    const double a = f(t), b = f(1.0 - t);
    return a / (a + b);
}

// Minimum spacing rule shared by the physical grids: 8 points per radian of
// e^{i x xi / h} at the top of the cutoff support.
void check_physical_resolution(const CoherentStateSpec& cs, const CutoffSpec& cut, const Grid1D& grid) {
    const double xi_max = cs.xi0 + cut.outer();
    const double limit = cs.h / (8.0 * xi_max);
    if (grid.spacing() > limit)
        throw ResolutionError("x grid spacing " + std::to_string(grid.spacing()) +
                              " does not resolve e^{i x xi/h}; need <= " + std::to_string(limit));
}

SampledField frequency_field(const CoherentStateSpec& cs, const CutoffSpec& cut, const EvolutionParams& evo,
                             double t, const Grid1D& xi_grid) {
    std::vector<cplx> v(xi_grid.size());
    const auto xi = xi_grid.nodes();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = frequency_profile(cs, cut, evo, t, xi[i]);
    return {xi_grid, std::move(v), Side::frequency};
}

}  // namespace

void EvolutionParams::validate() const {
    if (!(alpha >= 0.0 && alpha < 1.0)) throw ParameterError("EvolutionParams: alpha must lie in [0, 1)");
    if (!(z.real() > 0.0)) throw ParameterError("EvolutionParams: Re(z) must be positive");
    if (!(T > 0.0)) throw ParameterError("EvolutionParams: T must be positive");
}

void CoherentStateSpec::validate() const {
    if (!(xi0 > 0.0)) throw ParameterError("CoherentStateSpec: xi0 must be positive");
    if (!(h > 0.0)) throw ParameterError("CoherentStateSpec: h must be positive");
}

double cutoff_eval(const CutoffSpec& spec, double s) {
    const double a = std::abs(s);
    if (a <= spec.inner()) return 1.0;
    if (a >= spec.outer()) return 0.0;
    return smooth_step((spec.outer() - a) / (spec.outer() - spec.inner()));
}

cplx coherent_state(const CoherentStateSpec& cs, double x) {
    return std::pow(kPi * cs.h, -0.25) * std::exp(cplx(-x * x / (2.0 * cs.h), x * cs.xi0 / cs.h));
}

cplx frequency_profile(const CoherentStateSpec& cs, const CutoffSpec& cut, const EvolutionParams& evo,
                       double t, double xi) {
    const double c = cutoff_eval(cut, xi - cs.xi0);
    if (c == 0.0) return {0.0, 0.0};
    const double d = xi - cs.xi0;
    cplx expo = -d * d / (2.0 * cs.h);
    if (t != 0.0) {
        const double power = std::exp(evo.alpha * std::log(std::abs(xi / cs.h)));
        expo -= t * std::conj(evo.z) * power;
    }
    return std::pow(kPi * cs.h, -0.25) * c * std::exp(expo);
}

Grid1D frequency_grid(const CoherentStateSpec& cs, const CutoffSpec& cut, double x_max, std::size_t xi_nodes) {
    const double lo = cs.xi0 - cut.outer(), hi = cs.xi0 + cut.outer();
    if (xi_nodes == 0) {
        const double limit = cs.h / (8.0 * std::max(x_max, 1e-12));
        xi_nodes = std::max<std::size_t>(513, static_cast<std::size_t>(std::ceil((hi - lo) / limit)) + 1);
    }
    return Grid1D::closed(lo, hi, xi_nodes);
}

SampledField bandlimited_state(const CoherentStateSpec& cs, const CutoffSpec& cut, const Grid1D& grid,
                               const LineOptions& opts) {
    return evolve_line(cs, cut, EvolutionParams{}, 0.0, grid, opts);
}

SampledField evolve_line(const CoherentStateSpec& cs, const CutoffSpec& cut, const EvolutionParams& evo,
                         double t, const Grid1D& x_grid, const LineOptions& opts) {
    check_physical_resolution(cs, cut, x_grid);
    const auto x = x_grid.nodes();
    return {x_grid, evolve_line_at(cs, cut, evo, t, x, opts)};
}

std::vector<cplx> evolve_line_at(const CoherentStateSpec& cs, const CutoffSpec& cut,
                                 const EvolutionParams& evo, double t, std::span<const double> x,
                                 const LineOptions& opts) {
    cs.validate();
    evo.validate();
    if (t < 0.0) throw ParameterError("evolve_line: t must be non-negative");
    double x_max = 0.0;
    for (double v : x) x_max = std::max(x_max, std::abs(v));
    const Grid1D xi_grid = frequency_grid(cs, cut, x_max, opts.xi_nodes);
    const SampledField fhat = frequency_field(cs, cut, evo, t, xi_grid);
    return inverse_semiclassical_fourier_at(fhat, cs.h, x, opts.transform);
}

FourierCoeffs torus_initial_coeffs(const CoherentStateSpec& cs, const CutoffSpec& cut) {
    cs.validate();
    const int n_lo = static_cast<int>(std::floor((cs.xi0 - cut.outer()) / cs.h));
    const int n_hi = static_cast<int>(std::ceil((cs.xi0 + cut.outer()) / cs.h));
    std::vector<cplx> c;
    const double scale = std::sqrt(cs.h / (2.0 * kPi));
    const EvolutionParams still{};
    for (int n = n_lo; n <= n_hi; ++n) c.push_back(scale * frequency_profile(cs, cut, still, 0.0, cs.h * n));
    return {n_lo, n_hi, std::move(c)};
}

FourierCoeffs evolve_torus(const FourierCoeffs& c0, const EvolutionParams& evo, double t) {
    evo.validate();
    if (t < 0.0) throw ParameterError("evolve_torus: t must be non-negative");
    FourierCoeffs out = c0;
    const cplx rate = -t * std::conj(evo.z);
    for (int n = c0.n_min; n <= c0.n_max; ++n) {
        // pow(0, 0) = 1: for alpha = 0 the generator is the identity on every mode.
        const double power = std::pow(std::abs(static_cast<double>(n)), evo.alpha);
        out[n] = c0[n] * std::exp(rate * power);
    }
    return out;
}

PointwiseBoundReport verify_pointwise_bounds(double xi0, const CutoffSpec& cut, const EvolutionParams& evo,
                                             std::span<const double> h_list, double eps,
                                             const PointwiseBoundOptions& opts) {
    evo.validate();
    if (!(eps > 0.0 && eps < kPi)) throw ParameterError("verify_pointwise_bounds: eps must lie in (0, pi)");
    if (h_list.size() < 2) throw ParameterError("verify_pointwise_bounds: need at least two h values");
    for (std::size_t i = 0; i < h_list.size(); ++i)
        if (!(h_list[i] > 0.0) || (i > 0 && !(h_list[i] < h_list[i - 1])))
            throw ParameterError("verify_pointwise_bounds: h_list must be positive and decreasing");

    PointwiseBoundReport report{};
    for (double h : h_list) {
        const CoherentStateSpec cs{xi0, h};
        const double L = opts.line_half_width;
        const double limit = h / (8.0 * (xi0 + cut.outer()));
        const auto n = static_cast<std::size_t>(std::ceil(2.0 * L / limit)) + 1;
        const Grid1D grid = Grid1D::closed(-L, L, n);
        const auto g = evolve_line(cs, cut, evo, opts.t, grid, opts.line);

        PointwiseBoundRow row{h, 0.0, 0.0, 0.0, 0.0};
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double x = grid.node(i);
            if (std::abs(x) <= eps) continue;
            const double m = x * x * std::abs(g.values[i]);
            if (m > row.m_out) {
                row.m_out = m;
                row.x_at_m_out = x;
            }
        }

        const Grid1D inner = Grid1D::closed(-xi0 / 8.0, xi0 / 8.0, opts.inner_samples);
        const auto xs = inner.nodes();
        const auto gi = evolve_line_at(cs, cut, evo, opts.t, xs, opts.line);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double dev = std::abs(std::log(std::abs(gi[i])) + xs[i] * xs[i] / (2.0 * h));
            row.m_in = std::max(row.m_in, dev * std::pow(h, evo.alpha));
        }
        const double origin = 0.0;
        row.peak_at_t0 = std::abs(evolve_line_at(cs, cut, evo, 0.0, std::span(&origin, 1), opts.line)[0]);
        report.rows.push_back(row);
    }

    std::vector<double> inv_h, log_m;
    for (const auto& r : report.rows) {
        inv_h.push_back(1.0 / r.h);
        log_m.push_back(std::log(r.m_out));
        report.max_m_in = std::max(report.max_m_in, r.m_in);
    }
    report.slope_log_m_out = fit_line(inv_h, log_m).slope;
    return report;
}

}  // namespace obsgap
