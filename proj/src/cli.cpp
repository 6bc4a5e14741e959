#include "obsgap/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

#include "obsgap/eigen_bounded.hpp"
#include "obsgap/errors.hpp"
#include "obsgap/kolmogorov.hpp"
#include "obsgap/observability.hpp"
#include "obsgap/quadrature.hpp"
#include "obsgap/rfhe.hpp"
#include "obsgap/saddle.hpp"
#include "obsgap/spectral.hpp"

namespace obsgap::cli {
namespace {

constexpr double kPi = std::numbers::pi;

// Every flag of every subcommand. Unused ones are ignored by a subcommand
// but still validated by the parser.
struct Settings {
    double alpha = 0.5;
    double z_re = std::cos(kPi / 4.0);
    double z_im = std::sin(kPi / 4.0);
    double xi0 = 1.0;
    double epsilon = 0.5;
    double t_final = 1.0;
    std::vector<double> h_list;
    std::string domain = "torus";
    std::string omega_v = "line";
    std::size_t grid_n = 0;
    double trunc_l = 40.0;
    std::size_t t_nodes = 16;
    double tol = 0.0;  // 0: module default
    std::string out;
    std::string config;
    bool dry_run = false;
    std::vector<double> xi_re;
    double xi_arg = 0.0;
};

std::string num(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

// Parameter columns echoed by the verification tables.
constexpr const char* kParamCols = "alpha,z_re,z_im,xi0,T";
std::string params(const Settings& s) {
    return num(s.alpha) + ',' + num(s.z_re) + ',' + num(s.z_im) + ',' + num(s.xi0) + ',' + num(s.t_final);
}

class Output {
public:
    Output(const std::string& path, std::ostream& fallback) : os_(&fallback) {
        if (path.empty() || path == "-") return;
        file_.open(path);
        if (!file_) throw Error("cannot open '" + path + "' for writing");
        os_ = &file_;
    }
    std::ostream& stream() { return *os_; }

private:
    std::ofstream file_;
    std::ostream* os_;
};

void add_common(CLI::App* sub, Settings& s, std::vector<double> default_h) {
    s.h_list = std::move(default_h);
    sub->add_option("--config", s.config, "Flat key = value file; command-line flags take precedence");
    sub->add_option("--alpha", s.alpha, "Fractional order in [0, 1)")->capture_default_str();
    sub->add_option("--z-re", s.z_re, "Re z (rotation)")->capture_default_str();
    sub->add_option("--z-im", s.z_im, "Im z (rotation)")->capture_default_str();
    sub->add_option("--xi0", s.xi0, "Coherent-state frequency")->capture_default_str();
    sub->add_option("--epsilon", s.epsilon, "Control region is |x| > epsilon")->capture_default_str();
    sub->add_option("--t-final", s.t_final, "Final time T")->capture_default_str();
    sub->add_option("--h-list", s.h_list, "Semiclassical parameters, comma separated")
        ->delimiter(',')
        ->capture_default_str();
    sub->add_option("--domain", s.domain, "x domain for rfhe")
        ->check(CLI::IsMember({"line", "torus"}))
        ->capture_default_str();
    sub->add_option("--omega-v", s.omega_v, "v domain for Kolmogorov")
        ->check(CLI::IsMember({"line", "interval"}))
        ->capture_default_str();
    sub->add_option("--grid-n", s.grid_n, "Grid size (x nodes per 2 pi, torus nodes or FD nodes; 0 = auto)")
        ->capture_default_str();
    sub->add_option("--trunc-l", s.trunc_l, "Half-width of the truncated real line")->capture_default_str();
    sub->add_option("--t-nodes", s.t_nodes, "Gauss-Legendre time nodes")->capture_default_str();
    sub->add_option("--tol", s.tol, "Tolerance override (0 = module default)")->capture_default_str();
    sub->add_option("--out", s.out, "Output CSV path (default stdout)");
    sub->add_flag("--dry-run", s.dry_run, "Print the resolved configuration and exit");
}

ExperimentConfig experiment(const Settings& s, Equation eq) {
    ExperimentConfig cfg;
    cfg.equation = eq;
    cfg.evo = {s.alpha, {s.z_re, s.z_im}, s.t_final};
    cfg.xi0 = s.xi0;
    cfg.eps = s.epsilon;
    cfg.h_list = s.h_list;
    cfg.t_nodes = s.t_nodes;
    cfg.x_nodes = s.grid_n;
    cfg.trunc_l = s.trunc_l;
    if (s.tol > 0.0) cfg.v_tail_tol = s.tol;
    return cfg;
}

int report_sweep(const ObservabilityReport& rep, const Settings& s, std::ostream& out, std::ostream& err) {
    Output o(s.out, out);
    write_csv(rep, o.stream());
    std::ostream& log = s.out.empty() ? err : out;
    log << "summary: equation=" << to_string(rep.cfg.equation) << " rows=" << rep.rows.size();
    if (rep.slope_log_quotient) log << " slope_log_quotient=" << num(*rep.slope_log_quotient);
    if (rep.slope_log_den) log << " slope_log_den=" << num(*rep.slope_log_den);
    double dirichlet = 0.0;
    for (const auto& r : rep.rows) dirichlet = std::max(dirichlet, r.dirichlet_residual);
    if (rep.cfg.equation == Equation::kolm_interval_v) log << " dirichlet_residual=" << num(dirichlet);
    log << '\n';
    int rc = 0;
    for (const auto& r : rep.rows) {
        if (r.failed) {
            log << "row h=" << num(r.h) << " failed: " << r.message << '\n';
            rc = 1;
        } else if (r.degenerate) {
            log << "row h=" << num(r.h) << " degenerate (zero state)\n";
        }
    }
    return rc;
}

int rfhe_sweep(const Settings& s, std::ostream& out, std::ostream& err) {
    const auto cfg = experiment(s, s.domain == "line" ? Equation::rfhe_line : Equation::rfhe_torus);
    return report_sweep(sweep(cfg), s, out, err);
}

int kolmogorov_sweep(const Settings& s, std::ostream& out, std::ostream& err) {
    const auto cfg = experiment(s, s.omega_v == "line" ? Equation::kolm_line_v : Equation::kolm_interval_v);
    return report_sweep(sweep(cfg), s, out, err);
}

int eigen_table(const Settings& s, std::ostream& out, std::ostream& /*err*/) {
    SolveOptions so;
    if (s.tol > 0.0) so.tol = s.tol;
    const std::size_t fd_nodes = s.grid_n == 0 ? 4000 : s.grid_n;
    Output o(s.out, out);
    auto& os = o.stream();
    os << "xi_re,xi_im,rho_re,rho_im,asym_re,asym_im,ratio,boundary_residual,fd_lambda,fd_rel_err\n";
    for (double r : s.xi_re) {
        const cplx xi = std::polar(r, s.xi_arg);
        const EigenData ed = solve_rho(xi, so);
        const cplx asym = rho_asymptotic(xi);
        const double ratio = std::abs(ed.rho / asym);
        os << num(xi.real()) << ',' << num(xi.imag()) << ',' << num(ed.rho.real()) << ',' << num(ed.rho.imag()) << ','
           << num(asym.real()) << ',' << num(asym.imag()) << ',' << num(ratio) << ',' << num(ed.boundary_residual);
        if (s.xi_arg == 0.0 && fd_nodes >= 500) {
            const double fd = fd_oracle(xi.real(), fd_nodes);
            os << ',' << num(fd) << ',' << num(std::abs(ed.lambda.real() - fd) / fd);
        } else {
            os << ",nan,nan";
        }
        os << '\n';
    }
    return 0;
}

int saddle_verify(const Settings& s, std::ostream& out, std::ostream& err) {
    const double a = 0.9;
    const auto r = coherent_phase(s.alpha, {s.z_re, s.z_im}, s.t_final, s.xi0, a);
    const auto u = HoloFunction::constant(1.0, a);
    Output o(s.out, out);
    auto& os = o.stream();
    os << "h," << kParamCols << ",radius,xi_crit_re,xi_crit_im,estimate_re,estimate_im,oracle_re,oracle_im,rel_err,rel_err_over_h_order\n";
    std::vector<double> lh, le, bad;
    for (double h : s.h_list) {
        const SaddleResult res = saddle_compare(u, r, h, s.alpha, a);
        const double scaled = res.rel_err / std::pow(h, 1.0 - s.alpha);
        os << num(h) << ',' << params(s) << ',' << num(a) << ',' << num(res.xi_crit.real()) << ',' << num(res.xi_crit.imag()) << ','
           << num(res.estimate.real()) << ',' << num(res.estimate.imag()) << ',' << num(res.oracle.real()) << ','
           << num(res.oracle.imag()) << ',' << num(res.rel_err) << ',' << num(scaled) << '\n';
        lh.push_back(std::log(h));
        le.push_back(std::log(res.rel_err));
        if (!res.oracle_converged) bad.push_back(h);
    }
    std::ostream& log = s.out.empty() ? err : out;
    if (lh.size() >= 2) log << "summary: fitted_order=" << num(fit_line(lh, le).slope) << '\n';
    for (double h : bad) log << "row h=" << num(h) << " failed: quadrature oracle did not reach tolerance\n";
    return bad.empty() ? 0 : 1;
}

int periodize_verify(const Settings& s, std::ostream& out, std::ostream& /*err*/) {
    Output o(s.out, out);
    auto& os = o.stream();
    os << "h," << kParamCols << ",coeff_identity_dev,semigroup_dev,plancherel_dev\n";
    const EvolutionParams evo{s.alpha, {s.z_re, s.z_im}, s.t_final};
    const CutoffSpec cut{s.xi0};
    for (double h : s.h_list) {
        const CoherentStateSpec cs{s.xi0, h};
        CoeffIdentityOptions opts;
        if (s.grid_n > 0) opts.torus_nodes = s.grid_n;
        opts.line_half_width = std::max(opts.line_half_width, s.trunc_l);
        if (s.tol > 0.0) opts.periodize.tol = s.tol;
        const int top = static_cast<int>(std::ceil((s.xi0 + cut.outer()) / h));
        opts.n_min = 0;
        opts.n_max = std::min(top + 2, static_cast<int>(opts.torus_nodes / 2) - 1);
        const double dev = coeff_identity_check(
            [&](std::span<const double> x) { return evolve_line_at(cs, cut, evo, 0.0, x); }, opts);

        const FourierCoeffs c0 = torus_initial_coeffs(cs, cut);
        const auto a = evolve_torus(evolve_torus(c0, evo, 0.5 * s.t_final), evo, 0.5 * s.t_final);
        const auto b = evolve_torus(c0, evo, s.t_final);
        double semi = 0.0;
        for (int n = c0.n_min; n <= c0.n_max; ++n) semi = std::max(semi, std::abs(a[n] - b[n]));

        const double L = s.trunc_l;
        const Grid1D xg = Grid1D::closed(-L, L, static_cast<std::size_t>(std::ceil(2.0 * L * 8.0 * 1.5 * s.xi0 / h)) + 1);
        const auto g = bandlimited_state(cs, cut, xg);
        const Grid1D xig = frequency_grid(cs, cut, L);
        std::vector<cplx> fh(xig.size());
        for (std::size_t i = 0; i < fh.size(); ++i) fh[i] = frequency_profile(cs, cut, evo, 0.0, xig.node(i));
        const double pl = std::abs(l2_norm(g).value - l2_norm(SampledField{xig, fh, Side::frequency}).value);
        os << num(h) << ',' << params(s) << ',' << num(dev) << ',' << num(semi) << ',' << num(pl) << '\n';
    }
    return 0;
}

int estimates_verify(const Settings& s, std::ostream& out, std::ostream& err) {
    const EvolutionParams evo{s.alpha, {s.z_re, s.z_im}, s.t_final};
    PointwiseBoundOptions opts;
    opts.t = s.t_final;
    opts.line_half_width = s.trunc_l;
    if (s.tol > 0.0) opts.line.transform.decay_tol = s.tol;
    const auto rep = verify_pointwise_bounds(s.xi0, CutoffSpec{s.xi0}, evo, s.h_list, s.epsilon, opts);
    Output o(s.out, out);
    auto& os = o.stream();
    os << "h," << kParamCols << ",epsilon,m_out,x_at_m_out,m_in,peak_at_t0,h_log_m_out\n";
    for (const auto& r : rep.rows)
        os << num(r.h) << ',' << params(s) << ',' << num(s.epsilon) << ',' << num(r.m_out) << ',' << num(r.x_at_m_out) << ',' << num(r.m_in) << ','
           << num(r.peak_at_t0) << ',' << num(r.h * std::log(r.m_out)) << '\n';
    std::ostream& log = s.out.empty() ? err : out;
    log << "summary: slope_log_m_out=" << num(rep.slope_log_m_out) << " max_m_in=" << num(rep.max_m_in) << '\n';
    return 0;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Fills options that were not given on the command line from a flat
// `key = value` file. Keys are flag names without the leading dashes.
void apply_config(CLI::App* sub, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CLI::FileError::Missing(path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find_first_of("#;"); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = path + ":" + std::to_string(lineno);
        if (eq == std::string::npos) throw CLI::ConversionError(where + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        while (!key.empty() && key.front() == '-') key.erase(0, 1);
        std::replace(key.begin(), key.end(), '_', '-');
        CLI::Option* opt = key == "config" ? nullptr : sub->get_option_no_throw("--" + key);
        if (opt == nullptr) throw CLI::ExtrasError(where + ": unknown key '" + key + "'", CLI::ExitCodes::ExtrasError);
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        if (opt->count() > 0) continue;
        opt->add_result(value);
        opt->run_callback();
    }
}

void dump(const Settings& s, const std::string& name, std::ostream& os) {
    auto list = [](const std::vector<double>& v) {
        std::string r;
        for (std::size_t i = 0; i < v.size(); ++i) r += (i ? "," : "") + num(v[i]);
        return r;
    };
    os << "# " << name << '\n'
       << "alpha = " << num(s.alpha) << '\n'
       << "z-re = " << num(s.z_re) << '\n'
       << "z-im = " << num(s.z_im) << '\n'
       << "xi0 = " << num(s.xi0) << '\n'
       << "epsilon = " << num(s.epsilon) << '\n'
       << "t-final = " << num(s.t_final) << '\n'
       << "h-list = " << list(s.h_list) << '\n'
       << "domain = " << s.domain << '\n'
       << "omega-v = " << s.omega_v << '\n'
       << "grid-n = " << s.grid_n << '\n'
       << "trunc-l = " << num(s.trunc_l) << '\n'
       << "t-nodes = " << s.t_nodes << '\n'
       << "tol = " << num(s.tol) << '\n';
    if (name == "eigen-table") os << "xi-re = " << list(s.xi_re) << '\n' << "xi-arg = " << num(s.xi_arg) << '\n';
    if (!s.out.empty()) os << "out = " << s.out << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Counterexamples to observability inequalities: sweeps and estimate checks", "obsgap"};
    app.require_subcommand(1);

    Settings rfhe, kolm, eig, sad, per, est;
    auto* s_rfhe = app.add_subcommand("rfhe-sweep", "Observability quotient of the rotated fractional heat equation");
    add_common(s_rfhe, rfhe, {0.2, 0.1, 0.05, 0.025});
    auto* s_kolm = app.add_subcommand("kolmogorov-sweep", "Observability quotient of the Kolmogorov equation");
    add_common(s_kolm, kolm, {0.2, 0.1, 0.05});
    auto* s_eig = app.add_subcommand("eigen-table", "Bounded-v eigenvalues against their asymptotic form");
    add_common(s_eig, eig, {});
    s_eig->add_option("--xi-re", eig.xi_re, "Moduli of xi~, comma separated")->delimiter(',');
    s_eig->add_option("--xi-arg", eig.xi_arg, "Argument of xi~")->capture_default_str();
    eig.xi_re = {8, 12, 16, 20};
    auto* s_sad = app.add_subcommand("saddle-verify", "Saddle-point estimate against quadrature");
    add_common(s_sad, sad, {0.1, 0.05, 0.02});
    auto* s_per = app.add_subcommand("periodize-verify", "Coefficient identity, torus semigroup and Plancherel");
    add_common(s_per, per, {0.1});
    auto* s_est = app.add_subcommand("estimates-verify", "Pointwise bounds of the evolved coherent state");
    add_common(s_est, est, {0.2, 0.1, 0.05});

    struct Entry {
        CLI::App* app;
        Settings* s;
        int (*fn)(const Settings&, std::ostream&, std::ostream&);
    };
    const Entry table[] = {{s_rfhe, &rfhe, rfhe_sweep},          {s_kolm, &kolm, kolmogorov_sweep},
                           {s_eig, &eig, eigen_table},           {s_sad, &sad, saddle_verify},
                           {s_per, &per, periodize_verify},      {s_est, &est, estimates_verify}};

    try {
        app.parse(argc, argv);
        for (const auto& e : table)
            if (e.app->parsed() && !e.s->config.empty()) apply_config(e.app, e.s->config);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e, out, err);  // --help
        err << "obsgap: " << e.what() << "\nRun with --help for usage.\n";
        return 2;
    }

    for (const auto& e : table) {
        if (!e.app->parsed()) continue;
        if (e.s->dry_run) {
            dump(*e.s, e.app->get_name(), out);
            return 0;
        }
        try {
            return e.fn(*e.s, out, err);
        } catch (const Error& ex) {
            err << "obsgap " << e.app->get_name() << ": " << ex.what() << '\n';
            return 1;
        }
    }
    return 2;
}

}  // namespace obsgap::cli
