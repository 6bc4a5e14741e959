#pragma once

#include <functional>
#include <map>
#include <memory>
#include <shared_mutex>
#include <span>
#include <vector>

#include "obsgap/eigen_bounded.hpp"
#include "obsgap/rfhe.hpp"
#include "obsgap/spectral.hpp"

namespace obsgap {

/// Mode n of -d^2/dv^2 - i n v^2 on the whole line.
struct LineEigenData {
    int n;
    cplx lambda;  ///< sqrt(-i n), principal branch

    cplx profile(double v) const { return std::exp(-lambda * (v * v / 2.0)); }
};

LineEigenData line_eigen(int n);

enum class DomainV { line, interval };

struct KolmSolutionSpec {
    double h = 0.1;
    double xi0 = 1.0;
    CutoffSpec cutoff{1.0};
    DomainV domain_v = DomainV::line;
    double T = 1.0;

    void validate() const;
};

/// Thread-safe memo of solve_rho keyed by xi_tilde.
class EigenCache {
public:
    explicit EigenCache(SolveOptions opts = {}) : opts_(opts) {}

    std::shared_ptr<const EigenData> get(cplx xi_tilde);
    std::size_t size() const;

private:
    struct Less {
        bool operator()(cplx a, cplx b) const {
            return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
        }
    };
    SolveOptions opts_;
    mutable std::shared_mutex mutex_;
    std::map<cplx, std::shared_ptr<const EigenData>, Less> table_;
};

/// sqrt(-i xi / h), principal branch.
cplx scaled_frequency(double xi, double h);

/// delta_{h,t,v}(xi): 1 on the line, e^{xi~ v^2/2} g_{xi~}(v) e^{-t rho} on (-1, 1).
cplx correction_factor(const KolmSolutionSpec& spec, double t, double v, double xi, EigenCache* cache);

/// Samples on an x point set times a v point set, stored v-major:
/// values[j * x.size() + i] is the value at (x[i], v[j]).
struct Field2D {
    std::vector<double> x;
    std::vector<double> v;
    std::vector<cplx> values;

    cplx at(std::size_t i, std::size_t j) const { return values[j * x.size() + i]; }
    double sup_norm() const noexcept;
};

struct BuildOptions {
    std::size_t xi_nodes = 0;  ///< 0: chosen from the resolution rule
    TransformOptions transform{};
};

/// g_h(t, x, v) by quadrature over the cutoff support, v on the whole line.
Field2D build_solution_line(const KolmSolutionSpec& spec, double t, std::span<const double> x,
                            std::span<const double> v, const BuildOptions& opts = {});

/// Same with the bounded-v eigendata; every xi node gets its own eigensolve.
Field2D build_solution_interval(const KolmSolutionSpec& spec, double t, std::span<const double> x,
                                std::span<const double> v, EigenCache& cache, const BuildOptions& opts = {});

/// Builder of line-in-x samples at one v: (x points, v) -> values.
using LineBuilder = std::function<std::vector<cplx>(std::span<const double>, double)>;

LineBuilder solution_builder(const KolmSolutionSpec& spec, double t, EigenCache* cache, const BuildOptions& opts = {});

/// x-periodization at each v onto a torus grid of torus_nodes points.
Field2D periodize_xv(const LineBuilder& builder, std::size_t torus_nodes, std::span<const double> v,
                     const PeriodizeOptions& opts = {});

/// a_{h,n} = 2^{-1/2} pi^{-3/4} h^{1/4} chi(h n - xi0) e^{-(h n - xi0)^2 / 2h}.
double kolm_amplitude(const KolmSolutionSpec& spec, int n);

/// Mode description of the periodized solution:
/// sum_n a_n e^{-lambda_n t} g_n(v) e^{i n x}.
struct TorusModes {
    std::vector<int> n;
    std::vector<double> a;
    std::vector<cplx> lambda;
    std::vector<std::shared_ptr<const EigenData>> eigen;  ///< empty on the line

    cplx profile(std::size_t k, double v) const;
};

TorusModes torus_modes(const KolmSolutionSpec& spec, EigenCache* cache);

/// Coefficient vector b_n = a_n e^{-lambda_n t} g_n(v).
std::vector<cplx> mode_coefficients(const TorusModes& modes, double t, double v);

/// Field on arbitrary x and v points from the mode form.
Field2D synthesize_xv(const TorusModes& modes, double t, std::span<const double> x, std::span<const double> v);

struct OdeCheckOptions {
    std::size_t torus_nodes = 128;
    PeriodizeOptions periodize{};
    BuildOptions build{};
};

struct OdeCheckReport {
    double max_deviation;  ///< max |c_n(t,v) - c_n(0,v) e^{-lambda_n t}| / max |c_n(0,v)|
    double max_mode_form_deviation;  ///< max |c_n(t,v) - a_n e^{-lambda_n t} g_n(v)|, same scale
};

/// Fourier coefficients of the periodized line-quadrature solution against the mode ODE.
OdeCheckReport coefficient_ode_check(const KolmSolutionSpec& spec, std::span<const double> t_samples,
                                     std::span<const double> v_samples, EigenCache* cache,
                                     const OdeCheckOptions& opts = {});

}  // namespace obsgap
