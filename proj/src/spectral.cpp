#include "obsgap/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "obsgap/errors.hpp"
#include "obsgap/parallel.hpp"

namespace obsgap {
namespace {

constexpr double kPi = std::numbers::pi;
// Phase recurrences are reseeded with an exact exponential this often.
constexpr std::size_t kReseed = 128;

// sum_j a_j e^{i omega (x0 + j dx)}
cplx oscillatory_sum(std::span<const cplx> a, double x0, double dx, double omega) {
    const cplx step = std::polar(1.0, omega * dx);
    cplx acc{0.0, 0.0};
    cplx phase{};
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (j % kReseed == 0)
            phase = std::polar(1.0, omega * (x0 + static_cast<double>(j) * dx));
        else
            phase *= step;
        acc += a[j] * phase;
    }
    return acc;
}

void check_decay(const SampledField& f, double tol, const char* who) {
    const double peak = f.sup_norm();
    const double edge = std::max(std::abs(f.values.front()), std::abs(f.values.back()));
    if (edge > tol * peak)
        throw TruncationError(std::string(who) + ": |f| at the truncation boundary is " +
                              std::to_string(edge) + " (peak " + std::to_string(peak) + ")");
}

void check_resolution(const Grid1D& in, double h, double max_out, const char* who) {
    const double limit = h / (8.0 * max_out);
    if (max_out > 0.0 && in.spacing() > limit)
        throw ResolutionError(std::string(who) + ": spacing " + std::to_string(in.spacing()) +
                              " exceeds h/(8 max|out|) = " + std::to_string(limit));
}

std::vector<cplx> transform_at(const SampledField& f, double h, std::span<const double> out, double sign,
                               const TransformOptions& opts, const char* who) {
    if (!(h > 0.0)) throw ParameterError(std::string(who) + ": h must be positive");
    check_decay(f, opts.decay_tol, who);
    if (opts.check_resolution) {
        double max_out = 0.0;
        for (double s : out) max_out = std::max(max_out, std::abs(s));
        check_resolution(f.grid, h, max_out, who);
    }
    std::vector<cplx> weighted(f.values.size());
    for (std::size_t i = 0; i < weighted.size(); ++i) weighted[i] = f.grid.weight(i) * f.values[i];
    const double norm = 1.0 / std::sqrt(2.0 * kPi * h);
    std::vector<cplx> result(out.size());
    parallel_for(out.size(), [&](std::size_t k) {
        result[k] = norm * oscillatory_sum(weighted, f.grid.lo(), f.grid.spacing(), sign * out[k] / h);
    });
    return result;
}

}  // namespace

std::vector<cplx> semiclassical_fourier_at(const SampledField& f, double h, std::span<const double> xi,
                                           const TransformOptions& opts) {
    return transform_at(f, h, xi, -1.0, opts, "semiclassical_fourier");
}

std::vector<cplx> inverse_semiclassical_fourier_at(const SampledField& fhat, double h,
                                                   std::span<const double> x, const TransformOptions& opts) {
    return transform_at(fhat, h, x, +1.0, opts, "inverse_semiclassical_fourier");
}

SampledField semiclassical_fourier(const SampledField& f, double h, const Grid1D& out_grid,
                                   const TransformOptions& opts) {
    const auto xi = out_grid.nodes();
    return {out_grid, semiclassical_fourier_at(f, h, xi, opts), Side::frequency};
}

SampledField inverse_semiclassical_fourier(const SampledField& fhat, double h, const Grid1D& out_grid,
                                           const TransformOptions& opts) {
    const auto x = out_grid.nodes();
    return {out_grid, inverse_semiclassical_fourier_at(fhat, h, x, opts), Side::physical};
}

NormResult l2_norm(const SampledField& f, Interval sub) {
    const double sq = l2_norm_squared(f, std::span<const Interval>(&sub, 1));
    const Grid1D& g = f.grid;
    const double span_hi = g.is_periodic() ? g.hi() : g.node(g.size() - 1);
    const bool empty = std::min(sub.hi, span_hi) <= std::max(sub.lo, g.lo());
    return {std::sqrt(sq), empty};
}

double l2_norm_squared(const SampledField& f, std::span<const Interval> pieces) {
    const Grid1D& g = f.grid;
    const std::size_t n = g.size();
    // Piecewise-linear |f|^2 on the nodes; a periodic grid closes the last cell with f(x_0).
    const std::size_t cells = g.is_periodic() ? n : n - 1;
    auto x_at = [&](std::size_t i) { return i == n ? g.hi() : g.node(i); };
    auto y_at = [&](std::size_t i) { return std::norm(f.values[i == n ? 0 : i]); };

    double total = 0.0;
    for (const Interval& sub : pieces) {
        const double a = std::max(sub.lo, g.lo());
        const double b = std::min(sub.hi, x_at(cells));
        if (!(b > a)) continue;
        const double dx = g.spacing();
        auto first = static_cast<std::size_t>(std::max(0.0, std::floor((a - g.lo()) / dx)));
        first = std::min(first, cells - 1);
        for (std::size_t c = first; c < cells; ++c) {
            const double x0 = x_at(c), x1 = x_at(c + 1);
            if (x0 >= b) break;
            const double lo = std::max(a, x0), hi = std::min(b, x1);
            if (hi <= lo) continue;
            const double y0 = y_at(c), y1 = y_at(c + 1);
            const double slope = (y1 - y0) / (x1 - x0);
            const double ylo = y0 + slope * (lo - x0), yhi = y0 + slope * (hi - x0);
            total += 0.5 * (ylo + yhi) * (hi - lo);
        }
    }
    return total;
}

double spacetime_l2_norm(std::span<const Snapshot> snapshots, Interval sub) {
    if (snapshots.size() < 2) throw ParameterError("spacetime_l2_norm: need at least 2 snapshots");
    double acc = 0.0;
    double prev = std::pow(l2_norm(snapshots[0].field, sub).value, 2);
    for (std::size_t i = 1; i < snapshots.size(); ++i) {
        const double dt = snapshots[i].t - snapshots[i - 1].t;
        if (!(dt > 0.0)) throw ParameterError("spacetime_l2_norm: times must be strictly increasing");
        const double cur = std::pow(l2_norm(snapshots[i].field, sub).value, 2);
        acc += 0.5 * dt * (prev + cur);
        prev = cur;
    }
    return std::sqrt(acc);
}

double spacetime_l2_norm(std::span<const Snapshot> snapshots, std::span<const double> time_weights,
                         Interval sub) {
    if (snapshots.size() < 2) throw ParameterError("spacetime_l2_norm: need at least 2 snapshots");
    if (time_weights.size() != snapshots.size())
        throw ParameterError("spacetime_l2_norm: one weight per snapshot");
    double acc = 0.0;
    for (std::size_t i = 0; i < snapshots.size(); ++i) {
        if (i > 0 && !(snapshots[i].t > snapshots[i - 1].t))
            throw ParameterError("spacetime_l2_norm: times must be strictly increasing");
        acc += time_weights[i] * std::pow(l2_norm(snapshots[i].field, sub).value, 2);
    }
    return std::sqrt(acc);
}

PeriodizeResult periodize(const SampledField& f_line, const PeriodizeOptions& opts) {
    const Grid1D& g = f_line.grid;
    const double blocks_f = (g.hi() - g.lo()) / (2.0 * kPi);
    const auto blocks = static_cast<std::size_t>(std::lround(blocks_f));
    if (!g.is_periodic() || blocks % 2 == 0 || std::abs(blocks_f - static_cast<double>(blocks)) > 1e-9 ||
        g.size() % blocks != 0 || std::abs(g.lo() + g.hi()) > 1e-9 * g.hi())
        throw ParameterError("periodize: field must live on an aligned_line_grid");
    const std::size_t per = g.size() / blocks;
    const int K = static_cast<int>(blocks / 2);
    const double peak = f_line.sup_norm();

    auto block = [&](int k) { return static_cast<std::size_t>(K + k) * per; };
    std::vector<cplx> acc(f_line.values.begin() + static_cast<std::ptrdiff_t>(block(0)),
                          f_line.values.begin() + static_cast<std::ptrdiff_t>(block(0) + per));
    double increment = 0.0;
    int k = 1;
    for (; k <= std::min(K, opts.k_max); ++k) {
        increment = 0.0;
        for (std::size_t j = 0; j < per; ++j) {
            const cplx add = f_line.values[block(k) + j] + f_line.values[block(-k) + j];
            acc[j] += add;
            increment = std::max(increment, std::abs(add));
        }
        if (increment <= opts.tol * peak) break;
    }
    if (k > std::min(K, opts.k_max) && K > 0 && increment > opts.tol * peak)
        throw ConvergenceError("periodize: tail still above tolerance after K = " + std::to_string(K),
                               increment);
    return {SampledField(torus_grid(per), std::move(acc)), std::min(k, K), increment};
}

PeriodizeResult periodize(const std::function<std::vector<cplx>(std::span<const double>)>& f,
                          std::size_t torus_nodes, const PeriodizeOptions& opts) {
    const Grid1D torus = torus_grid(torus_nodes);
    const auto base = torus.nodes();
    std::vector<double> shifted(base.size());
    auto eval = [&](int k) {
        for (std::size_t j = 0; j < base.size(); ++j) shifted[j] = base[j] + 2.0 * kPi * k;
        auto v = f(shifted);
        if (v.size() != base.size()) throw ParameterError("periodize: evaluator returned wrong size");
        return v;
    };
    std::vector<cplx> acc = eval(0);
    double peak = 0.0;
    for (const auto& z : acc) peak = std::max(peak, std::abs(z));
    double increment = 0.0;
    for (int k = 1; k <= opts.k_max; ++k) {
        const auto plus = eval(k);
        const auto minus = eval(-k);
        increment = 0.0;
        for (std::size_t j = 0; j < acc.size(); ++j) {
            const cplx add = plus[j] + minus[j];
            acc[j] += add;
            increment = std::max(increment, std::abs(add));
            peak = std::max(peak, std::abs(plus[j]));
            peak = std::max(peak, std::abs(minus[j]));
        }
        if (increment <= opts.tol * peak) return {SampledField(torus, std::move(acc)), k, increment};
    }
    throw ConvergenceError("periodize: tail still above tolerance after K = " + std::to_string(opts.k_max),
                           increment);
}

FourierCoeffs fourier_coeffs(const SampledField& f, int n_min, int n_max) {
    const Grid1D& g = f.grid;
    if (!g.is_periodic() || std::abs(g.hi() - g.lo() - 2.0 * kPi) > 1e-12)
        throw ParameterError("fourier_coeffs: need a periodic grid of length 2 pi");
    if (n_min > n_max) throw ParameterError("fourier_coeffs: n_min > n_max");
    const auto N = static_cast<long>(g.size());
    if (2L * std::max(std::abs(n_min), std::abs(n_max)) >= N)
        throw ResolutionError("fourier_coeffs: mode " + std::to_string(std::max(std::abs(n_min), std::abs(n_max))) +
                              " is not resolved by " + std::to_string(N) + " nodes");
    std::vector<cplx> c;
    c.reserve(static_cast<std::size_t>(n_max - n_min + 1));
    const double inv = 1.0 / static_cast<double>(N);
    for (int n = n_min; n <= n_max; ++n)
        c.push_back(inv * oscillatory_sum(f.values, g.lo(), g.spacing(), -static_cast<double>(n)));
    return {n_min, n_max, std::move(c)};
}

FourierCoeffs fourier_coeffs(const SampledField& f) {
    const auto N = static_cast<int>(f.grid.size());
    const int top = (N % 2 == 1) ? (N - 1) / 2 : N / 2 - 1;
    return fourier_coeffs(f, -top, top);
}

SampledField synthesize(const FourierCoeffs& c, const Grid1D& grid) {
    std::vector<cplx> out(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j)
        out[j] = oscillatory_sum(c.c, static_cast<double>(c.n_min), 1.0, grid.node(j));
    return {grid, std::move(out)};
}

double coeff_identity_check(const std::function<std::vector<cplx>(std::span<const double>)>& f_line,
                            const CoeffIdentityOptions& opts) {
    const auto per = periodize(f_line, opts.torus_nodes, opts.periodize);
    const auto lhs = fourier_coeffs(per.field, opts.n_min, opts.n_max);

    const double max_n = std::max({std::abs(opts.n_min), std::abs(opts.n_max), 1});
    std::size_t nodes = opts.line_nodes;
    if (nodes == 0)
        nodes = static_cast<std::size_t>(std::ceil(2.0 * opts.line_half_width * 8.0 * max_n)) + 1;
    const Grid1D line = Grid1D::closed(-opts.line_half_width, opts.line_half_width, nodes);
    const auto xs = line.nodes();
    SampledField sampled(line, f_line(xs));
    std::vector<double> modes;
    for (int n = opts.n_min; n <= opts.n_max; ++n) modes.push_back(n);
    TransformOptions topts;
    topts.decay_tol = opts.decay_tol;
    const auto rhs = semiclassical_fourier_at(sampled, 1.0, modes, topts);

    double dev = 0.0;
    const double scale = 1.0 / std::sqrt(2.0 * kPi);
    for (int n = opts.n_min; n <= opts.n_max; ++n)
        dev = std::max(dev, std::abs(lhs[n] - scale * rhs[static_cast<std::size_t>(n - opts.n_min)]));
    return dev;
}

}  // namespace obsgap
