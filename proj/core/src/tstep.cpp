#include "sonine/tstep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>

#include "sonine/errors.hpp"
#include "sonine/io.hpp"
#include "sonine/specfun.hpp"

namespace sonine {

namespace {

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

void check_nodes(const std::vector<double>& v) {
    if (v.size() < 2) throw PreconditionError("time grid: need at least one step");
    if (v.front() != 0.0) throw PreconditionError("time grid: first node must be 0");
    for (std::size_t j = 1; j < v.size(); ++j)
        if (!(v[j] > v[j - 1]) || !std::isfinite(v[j])) throw PreconditionError("time grid: nodes must increase strictly");
}

}  // namespace

TimeGrid TimeGrid::uniform(double T, int n_steps) {
    if (!(T > 0.0) || n_steps < 1) throw PreconditionError("time grid: need T > 0 and N >= 1");
    std::vector<double> v(n_steps + 1);
    for (int j = 0; j <= n_steps; ++j) v[j] = T * (static_cast<double>(j) / n_steps);
    check_nodes(v);
    return TimeGrid(MeshKind::Uniform, 1.0, std::move(v));
}

TimeGrid TimeGrid::graded(double T, int n_steps, double r) {
    if (!(T > 0.0) || n_steps < 1) throw PreconditionError("time grid: need T > 0 and N >= 1");
    if (!(r >= 1.0)) throw PreconditionError("time grid: grading exponent must be >= 1");
    std::vector<double> v(n_steps + 1);
    for (int j = 0; j <= n_steps; ++j) v[j] = T * std::pow(static_cast<double>(j) / n_steps, r);
    check_nodes(v);
    return TimeGrid(MeshKind::Graded, r, std::move(v));
}

TimeGrid TimeGrid::from_nodes(std::vector<double> nodes) {
    check_nodes(nodes);
    return TimeGrid(MeshKind::Custom, 1.0, std::move(nodes));
}

ConvolutionWeights::ConvolutionWeights(const KernelPair& pair, const TimeGrid& grid) : pair_(pair), grid_(grid) {
    if (grid_.is_uniform()) {
        cum_.resize(grid_.n_steps() + 1);
        for (int m = 0; m <= grid_.n_steps(); ++m) cum_[m] = pair_.cum_l(grid_[m]);
    }
}

std::vector<double> ConvolutionWeights::row(int n) const {
    if (n < 1 || n > grid_.n_steps()) throw PreconditionError("weights: row index out of range");
    std::vector<double> out;
    history(std::span<const double>(grid_.nodes().data(), n), grid_[n], out);
    return out;
}

double ConvolutionWeights::weight(int n, int j) const {
    if (n < 1 || n > grid_.n_steps() || j < 0 || j >= n) throw PreconditionError("weights: index out of range");
    if (!cum_.empty()) return cum_[n - j] - cum_[n - j - 1];
    const double tn = grid_[n];
    const double hi = pair_.cum_l(tn - grid_[j]);
    return j + 1 == n ? hi : hi - pair_.cum_l(tn - grid_[j + 1]);
}

void ConvolutionWeights::history(std::span<const double> nodes, double tn, std::vector<double>& out) const {
    const std::size_t m = nodes.size() - 1;
    out.resize(m + 1);
    const std::size_t n = m + 1;
    if (!cum_.empty() && n < cum_.size() && nodes[m] == grid_[m] && tn == grid_[n]) {
        for (std::size_t i = 0; i <= m; ++i) out[i] = cum_[n - i] - cum_[n - i - 1];
        return;
    }
    double next = pair_.cum_l(tn - nodes[m]);
    out[m] = next;
    for (std::size_t i = m; i-- > 0;) {
        const double c = pair_.cum_l(tn - nodes[i]);
        out[i] = c - next;
        next = c;
    }
}

ConvolutionWeights build_weights(const KernelPair& pair, const TimeGrid& grid) { return ConvolutionWeights(pair, grid); }

const char* to_string(RunStatus s) {
    switch (s) {
        case RunStatus::Completed: return "Completed";
        case RunStatus::BlowUp: return "BlowUp";
        case RunStatus::Failed: return "Failed";
    }
    return "?";
}

namespace {

// Solves Phi - w g(Phi) = H for the current cell. Returns false when no
// acceptable root was found.
using CellSolver = std::function<bool(double H, double w, double guess, double* out)>;

struct Marcher {
    const ConvolutionWeights& cw;
    double u0;
    std::function<double(double)> g;
    CellSolver solve;  // empty for the explicit scheme
    double threshold;
    ScalarOptions opt;

    std::vector<double> nodes, vals, rates;
    std::vector<double> w;

    // Value at trial time tn; ok = false if the implicit cell has no root.
    bool trial(double tn, double* out) {
        cw.history(nodes, tn, w);
        const std::size_t m = nodes.size() - 1;
        long double H = u0;
        if (solve) {
            for (std::size_t i = 0; i < m; ++i) H += static_cast<long double>(w[i]) * rates[i + 1];
            return solve(static_cast<double>(H), w[m], vals.back(), out);
        }
        for (std::size_t i = 0; i <= m; ++i) H += static_cast<long double>(w[i]) * rates[i];
        *out = static_cast<double>(H);
        return true;
    }

    double explicit_predictor(double tn) {
        cw.history(nodes, tn, w);
        long double H = u0;
        for (std::size_t i = 0; i < nodes.size(); ++i) H += static_cast<long double>(w[i]) * rates[i];
        return static_cast<double>(H);
    }

    void accept(double t, double v) {
        nodes.push_back(t);
        vals.push_back(v);
        rates.push_back(g(v));
    }

    bool acceptable(double v) const { return std::isfinite(v) && std::abs(v) <= threshold; }

    // Bisection in time between the last accepted node and a failing time.
    Bracket refine(double t_bad) {
        double lo = nodes.back(), hi = t_bad;
        while (hi - lo > opt.bracket_rel_width * hi) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            double v = 0.0;
            if (trial(mid, &v) && acceptable(v)) {
                accept(mid, v);
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return {lo, hi};
    }

    ScalarTrace run() {
        ScalarTrace tr;
        nodes.assign(1, 0.0);
        vals.assign(1, u0);
        rates.assign(1, g(u0));
        const auto& grid = cw.grid();
        for (int k = 1; k <= grid.n_steps(); ++k) {
            while (nodes.back() < grid[k]) {
                double tn = grid[k];
                int halvings = 0;
                for (;;) {
                    double v = 0.0;
                    const bool ok = trial(tn, &v);
                    if (ok && acceptable(v)) {
                        accept(tn, v);
                        break;
                    }
                    if (ok) {
                        tr.status = RunStatus::BlowUp;
                        tr.bracket = refine(tn);
                        tr.reason = "value exceeded threshold " + num(threshold);
                        return finish(std::move(tr));
                    }
                    if (++halvings > opt.max_halvings) {
                        const std::size_t n = vals.size();
                        const bool growing = n >= 3 && vals[n - 1] > vals[n - 2] && vals[n - 2] > vals[n - 3] &&
                                             vals[n - 1] > std::abs(u0);
                        if (growing && explicit_predictor(grid[k]) > threshold) {
                            tr.status = RunStatus::BlowUp;
                            tr.bracket = Bracket{nodes.back(), tn};
                            tr.reason = "no cell root after local refinement; values increasing";
                        } else {
                            tr.status = RunStatus::Failed;
                            tr.reason = "no cell root after " + std::to_string(opt.max_halvings) + " halvings at t=" +
                                        num(nodes.back());
                        }
                        return finish(std::move(tr));
                    }
                    tn = 0.5 * (nodes.back() + tn);
                }
            }
        }
        return finish(std::move(tr));
    }

    ScalarTrace finish(ScalarTrace tr) {
        tr.times = nodes;
        tr.values = vals;
        return tr;
    }
};

// Damped Newton for Phi - w g(Phi) = H on the branch with 1 - w g' > 0.
CellSolver newton_solver(std::function<double(double)> g, std::function<double(double)> dg) {
    return [g, dg](double H, double w, double guess, double* out) {
        double x = guess;
        auto F = [&](double y) { return y - H - w * g(y); };
        double fx = F(x);
        for (int it = 0; it < 200; ++it) {
            const double d = 1.0 - w * dg(x);
            if (!(d > 0.0) || !std::isfinite(fx)) return false;
            double step = -fx / d;
            double y = x + step;
            double fy = F(y);
            int damp = 0;
            while (!(std::abs(fy) < std::abs(fx)) && damp < 40) {
                step *= 0.5;
                y = x + step;
                fy = F(y);
                ++damp;
            }
            if (damp == 40 && !(std::abs(fy) <= std::abs(fx))) return false;
            x = y;
            fx = fy;
            const double scale = std::max({1.0, std::abs(x), std::abs(H)});
            if (std::abs(step) <= 1e-15 * scale || std::abs(fx) <= 1e-15 * scale) {
                if (!(1.0 - w * dg(x) > 0.0)) return false;
                *out = x;
                return true;
            }
        }
        return false;
    };
}

}  // namespace

ScalarTrace solve_linear_majorant(double C, const KernelPair& pair, const TimeGrid& grid) {
    if (!(C > 0.0)) throw PreconditionError("solve_linear_majorant: C must be positive");
    ConvolutionWeights cw(pair, grid);
    Marcher m{cw, 1.0, [C](double W) { return -C * W; },
              [C](double H, double w, double, double* out) {
                  *out = H / (1.0 + C * w);
                  return true;
              },
              std::numeric_limits<double>::infinity(), {}, {}, {}, {}, {}};
    return m.run();
}

ScalarTrace solve_scalar_nonlinear(const KernelPair& pair, double lambda1, const NonlinearSource& source,
                                   double phi0, const TimeGrid& grid, double blowup_threshold,
                                   const ScalarOptions& options) {
    if (!(lambda1 >= 0.0)) throw PreconditionError("solve_scalar_nonlinear: lambda1 must be nonnegative");
    if (!(phi0 >= 0.0)) throw PreconditionError("solve_scalar_nonlinear: phi0 must be nonnegative");
    if (!(blowup_threshold >= 1e3)) throw PreconditionError("solve_scalar_nonlinear: threshold must be >= 1e3");
    ConvolutionWeights cw(pair, grid);
    auto g = [&source, lambda1](double y) { return source.raw(y) - lambda1 * y; };
    auto dg = [&source, lambda1](double y) { return source.derivative(y) - lambda1; };
    Marcher implicit{cw, phi0, g, newton_solver(g, dg), blowup_threshold, options, {}, {}, {}, {}};
    ScalarTrace tr = implicit.run();
    if (tr.status == RunStatus::BlowUp && options.enclosure) {
        Marcher expl{cw, phi0, g, {}, blowup_threshold, options, {}, {}, {}, {}};
        ScalarTrace te = expl.run();
        if (te.status == RunStatus::BlowUp && te.bracket)
            tr.enclosure = Bracket{std::min(tr.bracket->t_low, te.bracket->t_low),
                                   std::max(tr.bracket->t_high, te.bracket->t_high)};
    }
    return tr;
}

ScalarTrace solve_scalar_decay(const KernelPair& pair, double C, double gamma_exp, double U0, const TimeGrid& grid) {
    if (!(C > 0.0) || !(gamma_exp > 0.0) || !(U0 >= 0.0))
        throw PreconditionError("solve_scalar_decay: need C > 0, gamma > 0, U0 >= 0");
    ConvolutionWeights cw(pair, grid);
    auto g = [C, gamma_exp](double U) { return U > 0.0 ? -C * std::pow(U, gamma_exp) : 0.0; };
    // U + w C U^gamma = H has exactly one root in [0, H] for H > 0.
    CellSolver solve = [C, gamma_exp](double H, double w, double guess, double* out) {
        if (!(H > 0.0)) {
            *out = 0.0;
            return true;
        }
        double lo = 0.0, hi = H;
        double x = std::clamp(guess, lo, hi);
        if (x <= 0.0) x = 0.5 * H;
        for (int it = 0; it < 200; ++it) {
            const double p = std::pow(x, gamma_exp);
            const double F = x + w * C * p - H;
            if (F > 0.0) hi = x; else lo = x;
            const double dF = 1.0 + w * C * gamma_exp * p / x;
            double y = x - F / dF;
            if (!(y > lo && y < hi)) y = 0.5 * (lo + hi);
            if (std::abs(y - x) <= 1e-16 * x || hi - lo <= 1e-16 * hi) {
                *out = y;
                return true;
            }
            x = y;
        }
        *out = x;
        return true;
    };
    Marcher m{cw, U0, g, solve, std::numeric_limits<double>::infinity(), {}, {}, {}, {}, {}};
    return m.run();
}

ScalarTrace solve_power_decay(double alpha, double C, double gamma_exp, double U0, const TimeGrid& grid) {
    return solve_scalar_decay(make_pair(SonineSpec::riemann_liouville(alpha)), C, gamma_exp, U0, grid);
}

Bracket bracket_blowup_bounds(double alpha, double c0) {
    if (!(c0 > 0.0)) throw PreconditionError("bracket_blowup_bounds: c0 must be positive");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw PreconditionError("bracket_blowup_bounds: alpha must be in (0, 1]");
    const double g = specfun::gamma(alpha + 1.0);
    return {std::pow(g / (4.0 * (c0 + 0.5)), 1.0 / alpha), std::pow(g / c0, 1.0 / alpha)};
}

void write_trace_csv(const ScalarTrace& trace, std::ostream& os) {
    os << "step,t,value,status\n";
    for (std::size_t n = 0; n < trace.times.size(); ++n) {
        const bool last = n + 1 == trace.times.size();
        os << n << ',' << fmt17(trace.times[n]) << ',' << fmt17(trace.values[n]) << ','
           << (last ? to_string(trace.status) : "ok") << '\n';
    }
}

}  // namespace sonine
