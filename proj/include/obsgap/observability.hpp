#pragma once

#include <optional>
#include <string>
#include <vector>

#include "obsgap/kolmogorov.hpp"
#include "obsgap/rfhe.hpp"

namespace obsgap {

enum class Equation { rfhe_line, rfhe_torus, kolm_line_v, kolm_interval_v };

std::string to_string(Equation e);
Equation equation_from_string(const std::string& s);

struct ExperimentConfig {
    Equation equation = Equation::rfhe_torus;
    /// Fractional order and rotation; the Kolmogorov variants always use
    /// alpha = 1/2 and z = e^{i pi/4}.
    EvolutionParams evo{};
    double xi0 = 1.0;
    double eps = 0.5;
    std::vector<double> h_list{0.2, 0.1, 0.05, 0.025};
    std::size_t t_nodes = 16;
    /// x quadrature nodes per 2 pi; 0 picks 8 points per radian of the top mode.
    std::size_t x_nodes = 0;
    /// v quadrature nodes (line: trapezoid on [-V, V]; interval: Gauss-Legendre).
    std::size_t v_nodes = 129;
    /// Half-width of the truncated real line for rfhe_line.
    double trunc_l = 40.0;
    /// v-tail tolerance that fixes V on the whole line.
    double v_tail_tol = 1e-12;
    /// Multiplies the initial state.
    cplx amplitude = 1.0;

    void validate() const;
    /// alpha and z actually used by the equation.
    EvolutionParams effective_evo() const;
};

struct ObservabilityRow {
    double h = 0.0;
    double num = 0.0;
    double den = 0.0;
    double quotient = 0.0;
    double log_quotient = 0.0;
    double h_log_quotient = 0.0;
    bool degenerate = false;  ///< both norms vanish
    bool failed = false;
    std::string message;
    /// Interval case only: sup |g| at v = +-1 over peak |g|.
    double dirichlet_residual = 0.0;
};

struct ObservabilityReport {
    ExperimentConfig cfg;
    std::vector<ObservabilityRow> rows;
    std::optional<double> slope_log_quotient;  ///< against 1/h
    std::optional<double> slope_log_den;       ///< against 1/h

    bool complete() const;
};

ObservabilityRow quotient(const ExperimentConfig& cfg, double h);

/// Rows computed concurrently; a failing row is marked instead of aborting.
ObservabilityReport sweep(const ExperimentConfig& cfg);

/// Throws Error with the path on I/O failure.
void export_csv(const ObservabilityReport& report, const std::string& path);
void write_csv(const ObservabilityReport& report, std::ostream& os);

struct CsvRow {
    double h, alpha, z_re, z_im, xi0, epsilon, T, num_l2, den_l2, quotient, log_quotient, h_log_quotient;
};

std::vector<CsvRow> import_csv(const std::string& path);

extern const char* const kCsvHeader;

}  // namespace obsgap
