#include "obsgap/kolmogorov.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "obsgap/errors.hpp"
#include "obsgap/parallel.hpp"

namespace obsgap {
namespace {

constexpr double kPi = std::numbers::pi;

double max_abs(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

// Shared quadrature: for each v, the inverse transform of
// (pi h)^{-1/4} chi(xi - xi0) e^{-(xi - xi0)^2/2h} * factor(k, v).
template <class Factor>
Field2D build_generic(const KolmSolutionSpec& spec, std::span<const double> x, std::span<const double> v,
                      const BuildOptions& opts, const Grid1D& xi_grid, Factor factor) {
    const CoherentStateSpec cs{spec.xi0, spec.h};
    std::vector<cplx> base(xi_grid.size());
    for (std::size_t k = 0; k < base.size(); ++k)
        base[k] = frequency_profile(cs, spec.cutoff, EvolutionParams{}, 0.0, xi_grid.node(k));

    Field2D out{{x.begin(), x.end()}, {v.begin(), v.end()}, {}};
    out.values.reserve(x.size() * v.size());
    std::vector<cplx> fhat(base.size());
    for (double vj : v) {
        for (std::size_t k = 0; k < base.size(); ++k) fhat[k] = base[k] == 0.0 ? cplx{} : base[k] * factor(k, vj);
        const SampledField f{xi_grid, fhat, Side::frequency};
        const auto vals = inverse_semiclassical_fourier_at(f, spec.h, x, opts.transform);
        out.values.insert(out.values.end(), vals.begin(), vals.end());
    }
    return out;
}

Grid1D kolm_xi_grid(const KolmSolutionSpec& spec, std::span<const double> x, const BuildOptions& opts) {
    return frequency_grid(CoherentStateSpec{spec.xi0, spec.h}, spec.cutoff, max_abs(x), opts.xi_nodes);
}

}  // namespace

LineEigenData line_eigen(int n) { return {n, std::sqrt(cplx(0.0, -static_cast<double>(n)))}; }

void KolmSolutionSpec::validate() const {
    if (!(h > 0.0)) throw ParameterError("KolmSolutionSpec: h must be positive");
    if (!(xi0 > 0.0)) throw ParameterError("KolmSolutionSpec: xi0 must be positive");
    if (!(T > 0.0)) throw ParameterError("KolmSolutionSpec: T must be positive");
    if (cutoff.xi0 != xi0) throw ParameterError("KolmSolutionSpec: cutoff must be centred on xi0");
}

std::shared_ptr<const EigenData> EigenCache::get(cplx xi_tilde) {
    {
        std::shared_lock lock(mutex_);
        if (auto it = table_.find(xi_tilde); it != table_.end()) return it->second;
    }
    // Solve outside the lock; a concurrent duplicate solve is harmless.
    auto ed = std::make_shared<const EigenData>(solve_rho(xi_tilde, opts_));
    std::unique_lock lock(mutex_);
    return table_.emplace(xi_tilde, std::move(ed)).first->second;
}

std::size_t EigenCache::size() const {
    std::shared_lock lock(mutex_);
    return table_.size();
}

cplx scaled_frequency(double xi, double h) { return std::sqrt(cplx(0.0, -xi / h)); }

cplx correction_factor(const KolmSolutionSpec& spec, double t, double v, double xi, EigenCache* cache) {
    if (spec.domain_v == DomainV::line) return 1.0;
    if (!cache) throw ParameterError("correction_factor: interval case needs an eigen cache");
    if (std::abs(v) > 1.0) throw ParameterError("correction_factor: |v| must be at most 1");
    const auto ed = cache->get(scaled_frequency(xi, spec.h));
    return series_eval(*ed, v) * std::exp(-t * ed->rho);
}

double Field2D::sup_norm() const noexcept {
    double m = 0.0;
    for (const auto& c : values) m = std::max(m, std::abs(c));
    return m;
}

Field2D build_solution_line(const KolmSolutionSpec& spec, double t, std::span<const double> x,
                            std::span<const double> v, const BuildOptions& opts) {
    spec.validate();
    if (t < 0.0) throw ParameterError("build_solution_line: t must be non-negative");
    const Grid1D xi_grid = kolm_xi_grid(spec, x, opts);
    std::vector<cplx> xt(xi_grid.size());
    for (std::size_t k = 0; k < xt.size(); ++k) xt[k] = scaled_frequency(xi_grid.node(k), spec.h);
    return build_generic(spec, x, v, opts, xi_grid,
                         [&](std::size_t k, double vj) { return std::exp(-xt[k] * (vj * vj / 2.0 + t)); });
}

Field2D build_solution_interval(const KolmSolutionSpec& spec, double t, std::span<const double> x,
                                std::span<const double> v, EigenCache& cache, const BuildOptions& opts) {
    spec.validate();
    if (t < 0.0) throw ParameterError("build_solution_interval: t must be non-negative");
    for (double vj : v)
        if (std::abs(vj) > 1.0) throw ParameterError("build_solution_interval: |v| must be at most 1");
    const Grid1D xi_grid = kolm_xi_grid(spec, x, opts);
    std::vector<std::shared_ptr<const EigenData>> eig(xi_grid.size());
    parallel_for(eig.size(), [&](std::size_t k) {
        const double xi = xi_grid.node(k);
        if (cutoff_eval(spec.cutoff, xi - spec.xi0) == 0.0) return;
        try {
            eig[k] = cache.get(scaled_frequency(xi, spec.h));
        } catch (const Error& e) {
            throw ConvergenceError("build_solution_interval: eigensolve failed at xi = " + std::to_string(xi) +
                                       ": " + e.what(),
                                   0.0);
        }
    });
    return build_generic(spec, x, v, opts, xi_grid, [&](std::size_t k, double vj) {
        const auto& ed = *eig[k];
        return std::exp(-ed.lambda * t) * eigenfunction_eval(ed, vj);
    });
}

LineBuilder solution_builder(const KolmSolutionSpec& spec, double t, EigenCache* cache, const BuildOptions& opts) {
    if (spec.domain_v == DomainV::interval && !cache)
        throw ParameterError("solution_builder: interval case needs an eigen cache");
    return [spec, t, cache, opts](std::span<const double> x, double v) {
        const double vv[1] = {v};
        auto f = spec.domain_v == DomainV::line ? build_solution_line(spec, t, x, vv, opts)
                                                : build_solution_interval(spec, t, x, vv, *cache, opts);
        return std::move(f.values);
    };
}

Field2D periodize_xv(const LineBuilder& builder, std::size_t torus_nodes, std::span<const double> v,
                     const PeriodizeOptions& opts) {
    Field2D out{torus_grid(torus_nodes).nodes(), {v.begin(), v.end()}, {}};
    out.values.reserve(torus_nodes * v.size());
    for (double vj : v) {
        const auto p = periodize([&](std::span<const double> x) { return builder(x, vj); }, torus_nodes, opts);
        out.values.insert(out.values.end(), p.field.values.begin(), p.field.values.end());
    }
    return out;
}

double kolm_amplitude(const KolmSolutionSpec& spec, int n) {
    const double s = spec.h * n - spec.xi0;
    const double c = cutoff_eval(spec.cutoff, s);
    if (c == 0.0) return 0.0;
    return std::pow(2.0, -0.5) * std::pow(kPi, -0.75) * std::pow(spec.h, 0.25) * c * std::exp(-s * s / (2.0 * spec.h));
}

cplx TorusModes::profile(std::size_t k, double v) const {
    if (eigen.empty()) return std::exp(-lambda[k] * (v * v / 2.0));
    return eigenfunction_eval(*eigen[k], v);
}

TorusModes torus_modes(const KolmSolutionSpec& spec, EigenCache* cache) {
    spec.validate();
    if (spec.domain_v == DomainV::interval && !cache)
        throw ParameterError("torus_modes: interval case needs an eigen cache");
    TorusModes m;
    const int lo = static_cast<int>(std::floor((spec.xi0 - spec.cutoff.outer()) / spec.h));
    const int hi = static_cast<int>(std::ceil((spec.xi0 + spec.cutoff.outer()) / spec.h));
    for (int n = lo; n <= hi; ++n) {
        const double a = kolm_amplitude(spec, n);
        if (a == 0.0) continue;
        m.n.push_back(n);
        m.a.push_back(a);
    }
    m.lambda.resize(m.n.size());
    if (spec.domain_v == DomainV::line) {
        for (std::size_t k = 0; k < m.n.size(); ++k) m.lambda[k] = line_eigen(m.n[k]).lambda;
    } else {
        m.eigen.resize(m.n.size());
        parallel_for(m.n.size(), [&](std::size_t k) {
            m.eigen[k] = cache->get(scaled_frequency(spec.h * m.n[k], spec.h));
            m.lambda[k] = m.eigen[k]->lambda;
        });
    }
    return m;
}

std::vector<cplx> mode_coefficients(const TorusModes& modes, double t, double v) {
    std::vector<cplx> b(modes.n.size());
    for (std::size_t k = 0; k < b.size(); ++k) b[k] = modes.a[k] * std::exp(-modes.lambda[k] * t) * modes.profile(k, v);
    return b;
}

Field2D synthesize_xv(const TorusModes& modes, double t, std::span<const double> x, std::span<const double> v) {
    Field2D out{{x.begin(), x.end()}, {v.begin(), v.end()}, std::vector<cplx>(x.size() * v.size())};
    for (std::size_t j = 0; j < v.size(); ++j) {
        const auto b = mode_coefficients(modes, t, v[j]);
        for (std::size_t i = 0; i < x.size(); ++i) {
            cplx acc = 0.0;
            for (std::size_t k = 0; k < b.size(); ++k) acc += b[k] * std::polar(1.0, modes.n[k] * x[i]);
            out.values[j * x.size() + i] = acc;
        }
    }
    return out;
}

OdeCheckReport coefficient_ode_check(const KolmSolutionSpec& spec, std::span<const double> t_samples,
                                     std::span<const double> v_samples, EigenCache* cache,
                                     const OdeCheckOptions& opts) {
    const TorusModes modes = torus_modes(spec, cache);
    if (modes.n.empty()) return {0.0, 0.0};
    const int lo = std::max(modes.n.front() - 2, -static_cast<int>(opts.torus_nodes / 2) + 1);
    const int hi = std::min(modes.n.back() + 2, static_cast<int>(opts.torus_nodes / 2) - 1);
    if (modes.n.back() >= static_cast<int>(opts.torus_nodes / 2))
        throw ResolutionError("coefficient_ode_check: torus grid does not resolve the highest mode");

    auto coeffs_at = [&](double t, double v) {
        const auto builder = solution_builder(spec, t, cache, opts.build);
        const double vv[1] = {v};
        const Field2D f = periodize_xv(builder, opts.torus_nodes, vv, opts.periodize);
        return fourier_coeffs(SampledField{torus_grid(opts.torus_nodes), f.values}, lo, hi);
    };

    OdeCheckReport rep{0.0, 0.0};
    for (double v : v_samples) {
        const FourierCoeffs c0 = coeffs_at(0.0, v);
        double scale0 = 0.0, scale_form = 0.0;
        for (int n = lo; n <= hi; ++n) scale0 = std::max(scale0, std::abs(c0[n]));
        for (std::size_t k = 0; k < modes.n.size(); ++k)
            scale_form = std::max(scale_form, modes.a[k] * std::abs(modes.profile(k, v)));
        for (double t : t_samples) {
            const FourierCoeffs ct = t == 0.0 ? c0 : coeffs_at(t, v);
            const auto b = mode_coefficients(modes, t, v);
            std::size_t k = 0;
            for (int n = lo; n <= hi; ++n) {
                const bool active = k < modes.n.size() && modes.n[k] == n;
                // Modes outside the cutoff carry only rounding; any decay rate will do for them.
                const cplx lambda = active ? modes.lambda[k] : line_eigen(n).lambda;
                const cplx decay = std::exp(-lambda * t);
                const cplx expected_form = active ? b[k] : cplx{};
                rep.max_deviation = std::max(rep.max_deviation, std::abs(ct[n] - c0[n] * decay) / scale0);
                rep.max_mode_form_deviation =
                    std::max(rep.max_mode_form_deviation, std::abs(ct[n] - expected_form) / scale_form);
                if (active) ++k;
            }
        }
    }
    return rep;
}

}  // namespace obsgap
