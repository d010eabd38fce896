#include "sonine/pde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sonine/errors.hpp"
#include "sonine/io.hpp"

namespace sonine {

namespace {

double norm2(const std::vector<double>& v) {
    long double s = 0.0L;
    for (double x : v) s += static_cast<long double>(x) * x;
    return std::sqrt(static_cast<double>(s));
}

struct Stepper {
    const ProblemSpec& spec;
    ConvolutionWeights cw;
    int nm;
    std::vector<double> a0;

    std::vector<double> nodes;
    std::vector<std::vector<double>> states;  // modal u at accepted nodes
    std::vector<double> rates;                // flat, F(u_i) - Lambda u_i
    std::vector<double> w, nodal, fnodal, fmodal, hist;

    Stepper(const ProblemSpec& s, std::vector<double> init)
        : spec(s), cw(s.pair, s.grid), nm(s.op.n_modes()), a0(std::move(init)) {
        nodal.resize(spec.op.n_nodes());
        fnodal.resize(spec.op.n_nodes());
        fmodal.resize(nm);
        hist.resize(nm);
    }

    // Pseudospectral F(u) into fmodal; false on non-finite values.
    bool eval_source(const std::vector<double>& a) {
        spec.op.modal_to_nodal(a, nodal);
        for (std::size_t i = 0; i < nodal.size(); ++i) {
            const double v = spec.source.raw(nodal[i]);
            if (!std::isfinite(v)) return false;
            fnodal[i] = v;
        }
        spec.op.nodal_to_modal(fnodal, fmodal);
        return true;
    }

    double nodal_abs_max(const std::vector<double>& a) {
        spec.op.modal_to_nodal(a, nodal);
        double m = 0.0;
        for (double v : nodal) m = std::max(m, std::abs(v));
        return m;
    }

    void accept(double t, std::vector<double> a) {
        eval_source(a);
        const auto& lam = spec.op.eigenvalues();
        for (int k = 0; k < nm; ++k) rates.push_back(fmodal[k] - lam[k] * a[k]);
        nodes.push_back(t);
        states.push_back(std::move(a));
    }

    // Picard iteration for the implicit cell ending at tn.
    bool trial(double tn, std::vector<double>* out) {
        cw.history(nodes, tn, w);
        const std::size_t m = nodes.size() - 1;
        std::vector<long double> acc(a0.begin(), a0.end());
        for (std::size_t i = 0; i < m; ++i) {
            const double wi = w[i];
            const double* r = rates.data() + (i + 1) * nm;
            for (int k = 0; k < nm; ++k) acc[k] += static_cast<long double>(wi) * r[k];
        }
        for (int k = 0; k < nm; ++k) hist[k] = static_cast<double>(acc[k]);
        const double wc = w[m];
        const auto& lam = spec.op.eigenvalues();
        std::vector<double> a = states.back(), next(nm);
        const double blow = 1e3 * spec.tol.blowup_threshold;
        double prev_d = std::numeric_limits<double>::infinity();
        int growing = 0;
        for (int it = 0; it < spec.tol.max_iters; ++it) {
            if (!eval_source(a)) return false;
            for (int k = 0; k < nm; ++k) next[k] = (hist[k] + wc * fmodal[k]) / (1.0 + wc * lam[k]);
            double d2 = 0.0;
            for (int k = 0; k < nm; ++k) d2 += (next[k] - a[k]) * (next[k] - a[k]);
            const double d = std::sqrt(d2);
            a.swap(next);
            const double na = norm2(a);
            if (!std::isfinite(na) || na > blow) return false;
            if (d <= spec.tol.fixed_point_tol * std::max(1.0, na)) {
                *out = std::move(a);
                return true;
            }
            growing = d > prev_d ? growing + 1 : 0;
            if (growing >= 5) return false;
            prev_d = d;
        }
        return false;
    }

    bool explicit_exceeds(double tn) {
        cw.history(nodes, tn, w);
        std::vector<double> a(a0);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const double* r = rates.data() + i * nm;
            for (int k = 0; k < nm; ++k) a[k] += w[i] * r[k];
        }
        return nodal_abs_max(a) > spec.tol.blowup_threshold;
    }

    bool acceptable(const std::vector<double>& a) { return nodal_abs_max(a) <= spec.tol.blowup_threshold; }

    Bracket refine(double t_bad) {
        double lo = nodes.back(), hi = t_bad;
        std::vector<double> a;
        while (hi - lo > spec.tol.bracket_rel_width * hi) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            if (trial(mid, &a) && acceptable(a)) {
                accept(mid, a);
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return {lo, hi};
    }

    void run(SolveReport& rep) {
        nodes.clear();
        states.clear();
        rates.clear();
        accept(0.0, a0);
        const auto& grid = spec.grid;
        std::vector<double> a;
        for (int k = 1; k <= grid.n_steps(); ++k) {
            while (nodes.back() < grid[k]) {
                double tn = grid[k];
                int halvings = 0;
                for (;;) {
                    const bool ok = trial(tn, &a);
                    if (ok && acceptable(a)) {
                        accept(tn, a);
                        break;
                    }
                    if (ok) {
                        rep.status = RunStatus::BlowUp;
                        rep.bracket = refine(tn);
                        rep.reason = "nodal maximum exceeded threshold";
                        return;
                    }
                    if (++halvings > spec.tol.max_halvings) {
                        const std::size_t n = states.size();
                        const bool growing = n >= 3 && norm2(states[n - 1]) > norm2(states[n - 2]) &&
                                             norm2(states[n - 2]) > norm2(states[n - 3]);
                        if (growing && explicit_exceeds(grid[k])) {
                            rep.status = RunStatus::BlowUp;
                            rep.bracket = Bracket{nodes.back(), tn};
                            rep.reason = "fixed point diverged with growing iterates";
                        } else {
                            rep.status = RunStatus::Failed;
                            rep.reason = "fixed point did not converge after cell refinement at t=" +
                                         fmt17(nodes.back());
                        }
                        return;
                    }
                    tn = 0.5 * (nodes.back() + tn);
                }
            }
        }
    }
};

}  // namespace

SolveReport solve(const ProblemSpec& spec) {
    const auto& op = spec.op;
    if (spec.tol.fixed_point_tol <= 0.0 || spec.tol.max_iters < 1 || !(spec.tol.blowup_threshold > 0.0))
        throw PreconditionError("solve: invalid tolerances");
    Field u0 = to_modal(spec.u0, op);
    if (static_cast<int>(u0.modal.size()) != op.n_modes())
        throw ShapeError("solve: initial field has " + std::to_string(u0.modal.size()) + " modes, operator has " +
                         std::to_string(op.n_modes()));
    for (double v : u0.modal)
        if (!std::isfinite(v)) throw PreconditionError("solve: initial field is not finite");

    SolveReport rep;
    rep.coercivity_constant = op.coercivity_constant();
    rep.length = op.length();
    rep.u0_norm = l2_norm(u0);

    Stepper st(spec, u0.modal);
    st.run(rep);

    rep.times = st.nodes;
    const std::size_t n = st.nodes.size();
    rep.l2_norms.resize(n);
    rep.range_min.resize(n);
    rep.range_max.resize(n);
    rep.decay_bound.resize(n);
    std::vector<double> nodal(op.n_nodes());
    for (std::size_t i = 0; i < n; ++i) {
        rep.l2_norms[i] = norm2(st.states[i]);
        op.modal_to_nodal(st.states[i], nodal);
        const auto [mn, mx] = std::minmax_element(nodal.begin(), nodal.end());
        rep.range_min[i] = *mn;
        rep.range_max[i] = *mx;
        const double c = i == 0 ? 0.0 : spec.pair.cum_l(st.nodes[i]);
        rep.decay_bound[i] = rep.u0_norm / (1.0 + rep.coercivity_constant * c);
    }
    rep.u0_min = rep.range_min[0];
    rep.u0_max = rep.range_max[0];

    const bool on_grid = st.nodes == spec.grid.nodes();
    const TimeGrid mgrid = on_grid ? spec.grid : TimeGrid::from_nodes(st.nodes.size() > 1 ? st.nodes : spec.grid.nodes());
    if (rep.coercivity_constant > 0.0) {
        rep.majorant_W = solve_linear_majorant(rep.coercivity_constant, spec.pair, mgrid).values;
        rep.majorant_W.resize(n);
    } else {
        rep.majorant_W.assign(n, 1.0);
    }
    if (spec.keep_fields) rep.fields = std::move(st.states);
    return rep;
}

DecayCheck decay_check(const SolveReport& report, double tol_abs) {
    DecayCheck out;
    if (report.u0_norm == 0.0) {
        out.skipped = true;
        return out;
    }
    if (report.status != RunStatus::Completed) throw PreconditionError("decay_check: report is not Completed");
    out.max_excess = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < report.l2_norms.size(); ++i) {
        const double e = report.l2_norms[i] - report.decay_bound[i];
        out.max_excess = std::max(out.max_excess, e);
        if (e > tol_abs) ++out.violations;
    }
    return out;
}

MajorantCheck majorant_check(const SolveReport& report, double tol_abs) {
    if (!(report.u0_norm > 0.0)) throw PreconditionError("majorant_check: ||u0|| must be positive");
    MajorantCheck out;
    out.max_gap_violation = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < report.l2_norms.size() && i < report.majorant_W.size(); ++i)
        out.max_gap_violation = std::max(out.max_gap_violation, report.l2_norms[i] / report.u0_norm - report.majorant_W[i]);
    out.pass = out.max_gap_violation <= tol_abs;
    return out;
}

double unit_integral_phi1_scale(double length) {
    return std::numbers::pi / (2.0 * std::sqrt(2.0 * length));
}

std::vector<double> eigen_projection(const SolveReport& report, Phi1Normalization norm) {
    if (report.fields.empty()) throw UnavailableError("eigen_projection: solution fields were not kept");
    const double c = norm == Phi1Normalization::UnitIntegral ? unit_integral_phi1_scale(report.length) : 1.0;
    std::vector<double> phi;
    phi.reserve(report.fields.size());
    for (const auto& a : report.fields) phi.push_back(c * a.at(0));
    return phi;
}

void write_report_csv(const SolveReport& r, std::ostream& os) {
    os << "step,t,l2_norm,range_min,range_max,decay_bound,majorant_W\n";
    for (std::size_t i = 0; i < r.times.size(); ++i)
        os << i << ',' << fmt17(r.times[i]) << ',' << fmt17(r.l2_norms[i]) << ',' << fmt17(r.range_min[i]) << ','
           << fmt17(r.range_max[i]) << ',' << fmt17(r.decay_bound[i]) << ',' << fmt17(r.majorant_W[i]) << '\n';
}

}  // namespace sonine
