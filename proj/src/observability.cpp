#include "obsgap/observability.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "obsgap/errors.hpp"
#include "obsgap/parallel.hpp"
#include "obsgap/quadrature.hpp"

namespace obsgap {

const char* const kCsvHeader = "h,alpha,z_re,z_im,xi0,epsilon,T,num_l2,den_l2,quotient,log_quotient,h_log_quotient";

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kPanelNodes = 16;

// Composite Gauss-Legendre on [a, b] with panels of at most max_width.
QuadratureRule composite_rule(double a, double b, double max_width) {
    const auto panels = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((b - a) / max_width)));
    QuadratureRule out;
    const double w = (b - a) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        const auto r = gauss_legendre(kPanelNodes, a + w * p, a + w * (p + 1));
        out.nodes.insert(out.nodes.end(), r.nodes.begin(), r.nodes.end());
        out.weights.insert(out.weights.end(), r.weights.begin(), r.weights.end());
    }
    return out;
}

QuadratureRule join(QuadratureRule a, const QuadratureRule& b) {
    a.nodes.insert(a.nodes.end(), b.nodes.begin(), b.nodes.end());
    a.weights.insert(a.weights.end(), b.weights.begin(), b.weights.end());
    return a;
}

// Panel width from the node budget per 2 pi (or the resolution rule).
double panel_width(const ExperimentConfig& cfg, double h) {
    const double xi_max = cfg.xi0 * 1.5;
    const double per_2pi = cfg.x_nodes > 0 ? static_cast<double>(cfg.x_nodes) : std::ceil(2.0 * kPi * 8.0 * xi_max / h);
    return 2.0 * kPi * static_cast<double>(kPanelNodes) / per_2pi;
}

// x rules over the full domain and over the control region.
struct XRules {
    QuadratureRule full;
    QuadratureRule omega;
};

XRules x_rules(const ExperimentConfig& cfg, double h, double lo, double hi) {
    const double w = panel_width(cfg, h);
    XRules r;
    r.full = join(join(composite_rule(lo, -cfg.eps, w), composite_rule(-cfg.eps, cfg.eps, w)),
                  composite_rule(cfg.eps, hi, w));
    r.omega = join(composite_rule(lo, -cfg.eps, w), composite_rule(cfg.eps, hi, w));
    return r;
}

QuadratureRule v_rule(const ExperimentConfig& cfg, const TorusModes& modes) {
    if (cfg.equation == Equation::kolm_interval_v) return gauss_legendre(cfg.v_nodes, -1.0, 1.0);
    double re_min = std::numeric_limits<double>::infinity();
    for (cplx l : modes.lambda) re_min = std::min(re_min, l.real());
    const double V = std::sqrt(2.0 * std::log(1.0 / cfg.v_tail_tol) / re_min);
    const Grid1D g = Grid1D::closed(-V, V, cfg.v_nodes);
    QuadratureRule r;
    for (std::size_t j = 0; j < g.size(); ++j) {
        r.nodes.push_back(g.node(j));
        r.weights.push_back(g.weight(j));
    }
    return r;
}

double weighted_sq(const std::vector<cplx>& f, const std::vector<double>& w) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * std::norm(f[i]);
    return s;
}

// Fills num and den for the torus-in-x equations from the mode form.
void torus_norms(const ExperimentConfig& cfg, double h, ObservabilityRow& row) {
    const EvolutionParams evo = cfg.effective_evo();
    const QuadratureRule tr = gauss_legendre(cfg.t_nodes, 0.0, evo.T);
    const XRules xr = x_rules(cfg, h, -kPi, kPi);

    TorusModes modes;
    // rfhe has no v variable: one unit-weight node.
    QuadratureRule vr{{0.0}, {1.0}};
    EigenCache cache;
    if (cfg.equation == Equation::rfhe_torus) {
        const CoherentStateSpec cs{cfg.xi0, h};
        const FourierCoeffs c = torus_initial_coeffs(cs, CutoffSpec{cfg.xi0});
        for (int n = c.n_min; n <= c.n_max; ++n) {
            if (c[n] == 0.0) continue;
            modes.n.push_back(n);
            modes.a.push_back(c[n].real());
            // e^{-t conj(z) |n|^alpha} written as e^{-lambda t}.
            modes.lambda.push_back(std::conj(evo.z) * std::pow(std::abs(static_cast<double>(n)), evo.alpha));
        }
    } else {
        KolmSolutionSpec spec{h, cfg.xi0, CutoffSpec{cfg.xi0},
                              cfg.equation == Equation::kolm_line_v ? DomainV::line : DomainV::interval, evo.T};
        modes = torus_modes(spec, &cache);
        vr = v_rule(cfg, modes);
    }
    auto phase_matrix = [&](const std::vector<double>& x) {
        std::vector<cplx> E(x.size() * modes.n.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            for (std::size_t k = 0; k < modes.n.size(); ++k) E[i * modes.n.size() + k] = std::polar(1.0, modes.n[k] * x[i]);
        return E;
    };
    const auto E_full = phase_matrix(xr.full.nodes);
    const auto E_omega = phase_matrix(xr.omega.nodes);
    const std::size_t M = modes.n.size();

    auto field = [&](const std::vector<cplx>& E, std::size_t nx, const std::vector<cplx>& b) {
        std::vector<cplx> f(nx);
        for (std::size_t i = 0; i < nx; ++i) {
            cplx acc = 0.0;
            for (std::size_t k = 0; k < M; ++k) acc += E[i * M + k] * b[k];
            f[i] = cfg.amplitude * acc;
        }
        return f;
    };
    auto coeffs = [&](double t, double v) {
        if (cfg.equation == Equation::rfhe_torus) {
            std::vector<cplx> b(M);
            for (std::size_t k = 0; k < M; ++k) b[k] = modes.a[k] * std::exp(-modes.lambda[k] * t);
            return b;
        }
        return mode_coefficients(modes, t, v);
    };

    double num2 = 0.0;
    for (std::size_t j = 0; j < vr.nodes.size(); ++j)
        num2 += vr.weights[j] * weighted_sq(field(E_full, xr.full.nodes.size(), coeffs(evo.T, vr.nodes[j])), xr.full.weights);

    std::vector<double> den_t(tr.nodes.size(), 0.0);
    parallel_for(tr.nodes.size(), [&](std::size_t m) {
        double s = 0.0;
        for (std::size_t j = 0; j < vr.nodes.size(); ++j)
            s += vr.weights[j] *
                 weighted_sq(field(E_omega, xr.omega.nodes.size(), coeffs(tr.nodes[m], vr.nodes[j])), xr.omega.weights);
        den_t[m] = tr.weights[m] * s;
    });
    double den2 = 0.0;
    for (double d : den_t) den2 += d;
    row.num = std::sqrt(num2);
    row.den = std::sqrt(den2);

    if (cfg.equation == Equation::kolm_interval_v) {
        // Dirichlet residual on the torus grid, at the time nodes and both ends.
        std::vector<double> xs = torus_grid(std::max<std::size_t>(256, 4 * (modes.n.back() + 1))).nodes();
        const auto E = phase_matrix(xs);
        double peak = 0.0, edge = 0.0;
        std::vector<double> times = tr.nodes;
        times.push_back(0.0);
        times.push_back(evo.T);
        for (double v : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
            for (double t : times) {
                const auto f = field(E, xs.size(), coeffs(t, v));
                for (const auto& c : f) {
                    if (std::abs(v) == 1.0) edge = std::max(edge, std::abs(c));
                    else peak = std::max(peak, std::abs(c));
                }
            }
        }
        row.dirichlet_residual = peak > 0.0 ? edge / peak : 0.0;
    }
}

void line_norms(const ExperimentConfig& cfg, double h, ObservabilityRow& row) {
    const EvolutionParams evo = cfg.effective_evo();
    const CoherentStateSpec cs{cfg.xi0, h};
    const CutoffSpec cut{cfg.xi0};
    const QuadratureRule tr = gauss_legendre(cfg.t_nodes, 0.0, evo.T);
    const XRules xr = x_rules(cfg, h, -cfg.trunc_l, cfg.trunc_l);
    const LineOptions lo{};

    auto sq = [&](double t, const QuadratureRule& r) {
        auto f = evolve_line_at(cs, cut, evo, t, r.nodes, lo);
        for (auto& c : f) c *= cfg.amplitude;
        return weighted_sq(f, r.weights);
    };
    row.num = std::sqrt(sq(evo.T, xr.full));
    double den2 = 0.0;
    for (std::size_t m = 0; m < tr.nodes.size(); ++m) den2 += tr.weights[m] * sq(tr.nodes[m], xr.omega);
    row.den = std::sqrt(den2);
}

void fill_derived(ObservabilityRow& row) {
    if (row.num == 0.0 && row.den == 0.0) {
        row.degenerate = true;
        row.quotient = row.log_quotient = row.h_log_quotient = std::numeric_limits<double>::quiet_NaN();
        return;
    }
    row.quotient = row.num / row.den;
    row.log_quotient = std::log(row.quotient);
    row.h_log_quotient = row.h * row.log_quotient;
}

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

}  // namespace

std::string to_string(Equation e) {
    switch (e) {
        case Equation::rfhe_line: return "rfhe_line";
        case Equation::rfhe_torus: return "rfhe_torus";
        case Equation::kolm_line_v: return "kolm_line_v";
        case Equation::kolm_interval_v: return "kolm_interval_v";
    }
    return "?";
}

Equation equation_from_string(const std::string& s) {
    for (auto e : {Equation::rfhe_line, Equation::rfhe_torus, Equation::kolm_line_v, Equation::kolm_interval_v})
        if (to_string(e) == s) return e;
    throw ParameterError("unknown equation '" + s + "'");
}

void ExperimentConfig::validate() const {
    effective_evo().validate();
    if (!(xi0 > 0.0)) throw ParameterError("ExperimentConfig: xi0 must be positive");
    if (!(eps > 0.0 && eps < kPi)) throw ParameterError("ExperimentConfig: epsilon must lie in (0, pi)");
    if (h_list.empty()) throw ParameterError("ExperimentConfig: h_list is empty");
    for (std::size_t i = 0; i < h_list.size(); ++i)
        if (!(h_list[i] > 0.0) || (i > 0 && !(h_list[i] < h_list[i - 1])))
            throw ParameterError("ExperimentConfig: h_list must be positive and strictly decreasing");
    if (t_nodes < 8) throw ParameterError("ExperimentConfig: t_nodes must be at least 8");
    if (v_nodes < 2) throw ParameterError("ExperimentConfig: v_nodes must be at least 2");
    if (equation == Equation::rfhe_line && !(trunc_l > eps)) throw ParameterError("ExperimentConfig: trunc_l too small");
    if (!(v_tail_tol > 0.0 && v_tail_tol < 1.0)) throw ParameterError("ExperimentConfig: v_tail_tol must lie in (0, 1)");
}

EvolutionParams ExperimentConfig::effective_evo() const {
    if (equation == Equation::kolm_line_v || equation == Equation::kolm_interval_v)
        return {0.5, std::polar(1.0, kPi / 4.0), evo.T};
    return evo;
}

bool ObservabilityReport::complete() const {
    return std::none_of(rows.begin(), rows.end(), [](const auto& r) { return r.failed; });
}

ObservabilityRow quotient(const ExperimentConfig& cfg, double h) {
    cfg.validate();
    if (!(h > 0.0)) throw ParameterError("quotient: h must be positive");
    ObservabilityRow row;
    row.h = h;
    try {
        if (cfg.equation == Equation::rfhe_line) line_norms(cfg, h, row);
        else torus_norms(cfg, h, row);
    } catch (const ConvergenceError& e) {
        throw ConvergenceError("h = " + fmt(h) + ": " + e.what(), e.last_increment(), e.iterates());
    } catch (const Error& e) {
        throw Error("h = " + fmt(h) + ": " + e.what());
    }
    fill_derived(row);
    return row;
}

ObservabilityReport sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    ObservabilityReport rep{cfg, std::vector<ObservabilityRow>(cfg.h_list.size()), std::nullopt, std::nullopt};
    parallel_for(cfg.h_list.size(), [&](std::size_t i) {
        try {
            rep.rows[i] = quotient(cfg, cfg.h_list[i]);
        } catch (const Error& e) {
            auto& r = rep.rows[i];
            r.h = cfg.h_list[i];
            r.failed = true;
            r.message = e.what();
            r.num = r.den = r.quotient = r.log_quotient = r.h_log_quotient = std::numeric_limits<double>::quiet_NaN();
        }
    });
    std::vector<double> inv_h, lq, ld;
    for (const auto& r : rep.rows) {
        if (r.failed || r.degenerate) continue;
        inv_h.push_back(1.0 / r.h);
        lq.push_back(r.log_quotient);
        ld.push_back(std::log(r.den));
    }
    if (inv_h.size() >= 2) {
        rep.slope_log_quotient = fit_line(inv_h, lq).slope;
        rep.slope_log_den = fit_line(inv_h, ld).slope;
    }
    return rep;
}

void write_csv(const ObservabilityReport& report, std::ostream& os) {
    const EvolutionParams evo = report.cfg.effective_evo();
    os << kCsvHeader << '\n';
    for (const auto& r : report.rows) {
        os << fmt(r.h) << ',' << fmt(evo.alpha) << ',' << fmt(evo.z.real()) << ',' << fmt(evo.z.imag()) << ','
           << fmt(report.cfg.xi0) << ',' << fmt(report.cfg.eps) << ',' << fmt(evo.T) << ',' << fmt(r.num) << ','
           << fmt(r.den) << ',' << fmt(r.quotient) << ',' << fmt(r.log_quotient) << ',' << fmt(r.h_log_quotient)
           << '\n';
    }
}

void export_csv(const ObservabilityReport& report, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw Error("export_csv: cannot open '" + path + "' for writing");
    write_csv(report, os);
    os.flush();
    if (!os) throw Error("export_csv: write to '" + path + "' failed");
}

std::vector<CsvRow> import_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("import_csv: cannot open '" + path + "'");
    std::string line;
    if (!std::getline(is, line) || line != kCsvHeader) throw Error("import_csv: '" + path + "' has an unexpected header");
    std::vector<CsvRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        double v[12];
        std::size_t k = 0;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            if (k == 12) throw Error("import_csv: too many columns in '" + path + "'");
            // strtod accepts "nan", which from_chars may not in every library.
            char* end = nullptr;
            v[k] = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str() || *end != '\0') throw Error("import_csv: bad number '" + cell + "' in '" + path + "'");
            ++k;
        }
        if (k != 12) throw Error("import_csv: wrong column count in '" + path + "'");
        rows.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10], v[11]});
    }
    return rows;
}

}  // namespace obsgap
