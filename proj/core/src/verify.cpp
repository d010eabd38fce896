#include "sonine/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <json.hpp>

#include "sonine/errors.hpp"
#include "sonine/io.hpp"
#include "sonine/kernels.hpp"
#include "sonine/nonlin.hpp"
#include "sonine/pde.hpp"
#include "sonine/spatial.hpp"
#include "sonine/specfun.hpp"
#include "sonine/tstep.hpp"

namespace sonine::verify {

double Case::get(const std::string& quantity) const {
    for (const auto& q : measured)
        if (q.name == quantity) return q.value;
    for (const auto& q : expected)
        if (q.name == quantity) return q.value;
    return std::numeric_limits<double>::quiet_NaN();
}

int SuiteResult::passed() const {
    return static_cast<int>(std::count_if(cases.begin(), cases.end(), [](const Case& c) { return c.asserted && c.pass; }));
}

int SuiteResult::failed() const {
    return static_cast<int>(std::count_if(cases.begin(), cases.end(), [](const Case& c) { return c.asserted && !c.pass; }));
}

bool SuiteResult::numerical_failure() const {
    return std::any_of(cases.begin(), cases.end(), [](const Case& c) { return c.asserted && c.numerical_failure; });
}

const Case* SuiteResult::find(const std::string& name) const {
    for (const auto& c : cases)
        if (c.name == name) return &c;
    return nullptr;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    LineFit f;
    f.n = static_cast<int>(std::min(x.size(), y.size()));
    if (f.n < 2) return f;
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < f.n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= f.n;
    my /= f.n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (int i = 0; i < f.n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
    return f;
}

namespace {

using Task = std::function<std::vector<Case>()>;

std::string digest(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string slug(const std::string& s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        if (i > 0 && std::isupper(static_cast<unsigned char>(c)) && std::islower(static_cast<unsigned char>(s[i - 1])))
            out += '-';
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '.') out += static_cast<char>(std::tolower(c));
        else if (!out.empty() && out.back() != '-') out += '-';
    }
    while (!out.empty() && out.back() == '-') out.pop_back();
    return out;
}

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

Case failed_case(const std::string& name, const std::string& claim, const std::exception& e) {
    Case c;
    c.name = name;
    c.claim = claim;
    c.pass = false;
    c.numerical_failure = true;
    c.note = e.what();
    return c;
}

// Runs tasks on up to `jobs` threads; the output order is the task order.
std::vector<Case> run_tasks(const std::vector<Task>& tasks, const std::vector<std::pair<std::string, std::string>>& ids,
                            int jobs) {
    std::vector<std::vector<Case>> slots(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();) {
            try {
                slots[i] = tasks[i]();
            } catch (const std::exception& e) {
                slots[i] = {failed_case(ids[i].first, ids[i].second, e)};
            }
        }
    };
    const int n = std::clamp(jobs, 1, static_cast<int>(std::max<std::size_t>(tasks.size(), 1)));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < n; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    std::vector<Case> out;
    for (auto& s : slots)
        for (auto& c : s) out.push_back(std::move(c));
    return out;
}

struct Batch {
    std::vector<Task> tasks;
    std::vector<std::pair<std::string, std::string>> ids;
    void add(std::string name, std::string claim, Task t) {
        ids.emplace_back(std::move(name), std::move(claim));
        tasks.push_back(std::move(t));
    }
    std::vector<Case> run(int jobs) const { return run_tasks(tasks, ids, jobs); }
};

template <class F>
SuiteResult timed(const std::string& name, F&& body) {
    const auto t0 = std::chrono::steady_clock::now();
    SuiteResult r;
    r.suite = name;
    r.cases = body();
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

std::string report_csv(const SolveReport& r) {
    std::ostringstream os;
    write_report_csv(r, os);
    return os.str();
}

std::string trace_csv(const ScalarTrace& t) {
    std::ostringstream os;
    write_trace_csv(t, os);
    return os.str();
}

Field clamped_sine(const SpectralOperator& op) {
    std::vector<double> v(op.n_nodes());
    for (int i = 0; i < op.n_nodes(); ++i)
        v[i] = std::clamp(std::sin(std::numbers::pi * op.nodes()[i] / op.length()), 0.0, 1.0);
    return Field::from_nodal(std::move(v));
}

Field unit_mode(const SpectralOperator& op, double scale = 1.0) {
    std::vector<double> a(op.n_modes(), 0.0);
    a[0] = scale;
    return Field::from_modal(std::move(a));
}

double status_code(RunStatus s) { return static_cast<double>(static_cast<int>(s)); }

NonlinearSource square_source() {
    return NonlinearSource::custom("Square", [](double y) { return y * y; }, [](double y) { return 2.0 * y; });
}

// ---------------------------------------------------------------- sonine

Case sonine_case(const SonineSpec& spec, const SonineConfig& cfg) {
    Case c;
    c.name = slug(spec.describe());
    c.claim = "sonine-identity";
    std::string key = "sonine|" + spec.describe() + "|tol=" + num(cfg.tol);
    for (double t : cfg.times) key += "|" + num(t);
    c.digest = digest(key);
    const SonineReport rep = verify_sonine(make_pair(spec), cfg.times, cfg.tol);
    c.measured = {{"max_deviation", rep.max_deviation}};
    c.expected = {{"tolerance", cfg.tol}};
    c.pass = rep.max_deviation <= cfg.tol;
    std::ostringstream os;
    os << "t,deviation\n";
    for (std::size_t i = 0; i < rep.t.size(); ++i) os << fmt17(rep.t[i]) << ',' << fmt17(rep.deviation[i]) << '\n';
    c.files.emplace_back(c.name, os.str());
    return c;
}

Case associate_case(const SonineConfig& cfg) {
    const SonineSpec spec = SonineSpec::multi_term({0.8, 0.4});
    Case c;
    c.name = slug(spec.describe()) + "-associate";
    c.claim = "sonine-identity";
    c.digest = digest("associate|" + spec.describe() + "|T=" + num(cfg.associate_T) + "|N=" +
                      std::to_string(cfg.associate_steps));
    const AssociateResult r = numeric_associate(spec, TimeGrid::uniform(cfg.associate_T, cfg.associate_steps));
    c.measured = {{"residual_max", r.residual_max}};
    c.expected = {{"tolerance", cfg.tol}};
    c.pass = r.residual_max <= cfg.tol;
    std::ostringstream os;
    os << "t,l\n";
    for (std::size_t i = 0; i < r.midpoints.size(); ++i) os << fmt17(r.midpoints[i]) << ',' << fmt17(r.values[i]) << '\n';
    c.files.emplace_back(c.name, os.str());
    return c;
}

// int_0^inf e^{-st} / (1 + s) ds against e^t E1(t).
Case laplace_identity_case(const SonineConfig& cfg) {
    Case c;
    c.name = "distributed-order-laplace-identity";
    c.claim = "distributed-order-kernel-identity";
    std::string key = "laplace-identity";
    for (double t : cfg.times) key += "|" + num(t);
    c.digest = digest(key);
    boost::math::quadrature::exp_sinh<double> integrator;
    double worst = 0.0;
    std::ostringstream os;
    os << "t,quadrature,closed_form\n";
    for (double t : cfg.times) {
        const double q = integrator.integrate([t](double s) { return std::exp(-s * t) / (1.0 + s); });
        const double e = specfun::exp_integral_e1_scaled(t);
        worst = std::max(worst, std::abs(q - e) / e);
        os << fmt17(t) << ',' << fmt17(q) << ',' << fmt17(e) << '\n';
    }
    c.measured = {{"max_relative_difference", worst}};
    c.expected = {{"tolerance", 1e-8}};
    c.pass = worst <= 1e-8;
    c.files.emplace_back(c.name, os.str());
    return c;
}

// ------------------------------------------------------------ invariance

Case invariance_case(const SonineSpec& k, const NonlinearSource& f, const SpectralOperator& op,
                     const InvarianceConfig& cfg) {
    Case c;
    c.name = slug(k.describe()) + "--" + slug(f.describe()) + "--" + slug(op.describe());
    c.claim = "range-invariance";
    c.digest = digest("invariance|" + k.describe() + "|" + f.describe() + "|" + op.describe() + "|T=" + num(cfg.T) +
                      "|N=" + std::to_string(cfg.steps) + "|modes=" + std::to_string(cfg.modes));
    ProblemSpec ps{make_pair(k), op, f, clamped_sine(op), TimeGrid::uniform(cfg.T, cfg.steps)};
    const SolveReport r = solve(ps);
    const double lo = *std::min_element(r.range_min.begin(), r.range_min.end());
    const double hi = *std::max_element(r.range_max.begin(), r.range_max.end());
    const double excess = std::max({0.0, -lo, hi - 1.0});
    c.measured = {{"range_min", lo}, {"range_max", hi}, {"excess", excess}, {"status", status_code(r.status)}};
    c.expected = {{"max_excess", cfg.tol}};
    c.pass = r.status == RunStatus::Completed && excess <= cfg.tol;
    c.numerical_failure = r.status == RunStatus::Failed;
    if (r.status != RunStatus::Completed) c.note = std::string(to_string(r.status)) + ": " + r.reason;
    c.files.emplace_back(c.name, report_csv(r));
    return c;
}

// ----------------------------------------------------------------- decay

std::vector<Case> decay_cases(const SonineSpec& k, const DecayConfig& cfg) {
    const auto op = SpectralOperator::dirichlet_laplacian(1.0, cfg.modes);
    const KernelPair pair = make_pair(k);
    ProblemSpec ps{pair, op, NonlinearSource::fisher_kpp(), clamped_sine(op), TimeGrid::uniform(cfg.T, cfg.steps)};
    const std::string base = slug(k.describe());
    const std::string key = "decay|" + k.describe() + "|" + op.describe() + "|FisherKPP|T=" + num(cfg.T) +
                            "|N=" + std::to_string(cfg.steps);
    const SolveReport r = solve(ps);
    std::vector<Case> out;

    Case d;
    d.name = base + "-estimate";
    d.claim = "decay-estimate";
    d.digest = digest(key);
    if (r.status != RunStatus::Completed) {
        d.pass = false;
        d.numerical_failure = r.status == RunStatus::Failed;
        d.note = std::string(to_string(r.status)) + ": " + r.reason;
        out.push_back(std::move(d));
        return out;
    }
    const DecayCheck dc = decay_check(r, cfg.tol_abs);
    d.measured = {{"violations", static_cast<double>(dc.violations)}, {"max_excess", dc.max_excess}};
    d.expected = {{"violations", 0.0}, {"tol_abs", cfg.tol_abs}};
    d.pass = dc.violations == 0;
    d.files.emplace_back(d.name, report_csv(r));
    out.push_back(std::move(d));

    Case m;
    m.name = base + "-majorant";
    m.claim = "majorant-domination";
    m.digest = digest(key + "|majorant");
    const MajorantCheck mc = majorant_check(r, cfg.tol_abs);
    m.measured = {{"max_gap", mc.max_gap_violation}};
    m.expected = {{"tol_abs", cfg.tol_abs}};
    m.pass = mc.pass;
    out.push_back(std::move(m));

    auto window = [&](auto&& fy) {
        std::vector<double> x, y;
        for (std::size_t i = 0; i < r.times.size(); ++i) {
            const double t = r.times[i];
            if (t < cfg.fit_lo || t > cfg.fit_hi) continue;
            x.push_back(std::log(t));
            y.push_back(fy(i));
        }
        return fit_line(x, y);
    };
    // log(1/|u| - 1/|u0|) against log t; the bound predicts the growth of C_L (1*l)(t).
    auto power_fit = [&] { return window([&](std::size_t i) { return std::log(1.0 / r.l2_norms[i] - 1.0 / r.u0_norm); }); };

    if (k.kind() == KernelKind::RiemannLiouville || k.kind() == KernelKind::MultiTerm) {
        const bool rl = k.kind() == KernelKind::RiemannLiouville;
        const double target = rl ? k.alpha() : k.alphas().back();
        const LineFit fit = power_fit();
        Case g;
        g.name = base + "-regime";
        g.claim = rl ? "decay-regime-power" : "decay-regime-multi-term";
        g.digest = digest(key + "|fit=" + num(cfg.fit_lo) + "," + num(cfg.fit_hi));
        g.measured = {{"slope", fit.slope}, {"r2", fit.r2}};
        g.expected = {{"slope", target}, {"rel_tol", cfg.slope_rel_tol}};
        g.pass = std::abs(fit.slope - target) <= cfg.slope_rel_tol * target;
        out.push_back(std::move(g));
    } else if (k.kind() == KernelKind::DistributedOrder) {
        double worst = 0.0, band_lo = std::numeric_limits<double>::infinity(), band_hi = 0.0;
        std::ostringstream os;
        os << "t,normalized,cum_l_over_log_t\n";
        for (std::size_t i = 1; i < r.times.size(); ++i) {
            const double t = r.times[i];
            const double cl = pair.cum_l(t);
            const double v = r.l2_norms[i] * (1.0 + r.coercivity_constant * cl) / r.u0_norm;
            worst = std::max(worst, v);
            double ratio = std::numeric_limits<double>::quiet_NaN();
            if (t >= cfg.fit_lo && t <= cfg.fit_hi) {
                ratio = cl / std::log(t);
                band_lo = std::min(band_lo, ratio);
                band_hi = std::max(band_hi, ratio);
            }
            os << fmt17(t) << ',' << fmt17(v) << ',' << fmt17(ratio) << '\n';
        }
        Case g;
        g.name = base + "-regime";
        g.claim = "decay-regime-logarithmic";
        g.digest = digest(key + "|band=" + num(cfg.band_lo) + "," + num(cfg.band_hi));
        g.measured = {{"max_normalized", worst}, {"ratio_min", band_lo}, {"ratio_max", band_hi}};
        g.expected = {{"max_normalized", 1.0 + 1e-3}, {"band_lo", cfg.band_lo}, {"band_hi", cfg.band_hi}};
        g.pass = worst <= 1.0 + 1e-3 && band_lo >= cfg.band_lo && band_hi <= cfg.band_hi;
        g.files.emplace_back(g.name, os.str());
        out.push_back(std::move(g));
    }
    return out;
}

Case tempered_linear_case(const DecayConfig& cfg) {
    const SonineSpec k = SonineSpec::tempered(0.5, 1.0);
    const auto op = SpectralOperator::dirichlet_laplacian(1.0, cfg.modes);
    ProblemSpec ps{make_pair(k), op, NonlinearSource::zero(), unit_mode(op), TimeGrid::uniform(cfg.tempered_T, cfg.steps)};
    const SolveReport r = solve(ps);
    Case c;
    c.name = slug(k.describe()) + "-linear-regime";
    c.claim = "decay-regime-exponential";
    c.digest = digest("decay-linear|" + k.describe() + "|" + op.describe() + "|T=" + num(cfg.tempered_T) + "|N=" +
                      std::to_string(cfg.steps) + "|fit=" + num(cfg.tempered_fit_lo) + "," + num(cfg.tempered_fit_hi));
    std::vector<double> x, y;
    for (std::size_t i = 0; i < r.times.size(); ++i) {
        if (r.times[i] < cfg.tempered_fit_lo || r.times[i] > cfg.tempered_fit_hi) continue;
        x.push_back(r.times[i]);
        y.push_back(std::log(r.l2_norms[i]));
    }
    const LineFit fit = fit_line(x, y);
    bool decreasing = true;
    for (std::size_t i = 1; i < y.size(); ++i) decreasing = decreasing && y[i] < y[i - 1];
    const DecayCheck dc = decay_check(r, cfg.tol_abs);
    const MajorantCheck mc = majorant_check(r, cfg.tol_abs);
    c.measured = {{"log_slope", fit.slope}, {"r2", fit.r2}, {"violations", static_cast<double>(dc.violations)},
                  {"max_gap", mc.max_gap_violation}};
    c.expected = {{"max_log_slope", -cfg.tempered_min_rate}, {"min_r2", cfg.tempered_min_r2}};
    c.pass = r.status == RunStatus::Completed && decreasing && fit.slope <= -cfg.tempered_min_rate &&
             fit.r2 >= cfg.tempered_min_r2 && dc.violations == 0 && mc.pass;
    c.files.emplace_back(c.name, report_csv(r));
    return c;
}

// ---------------------------------------------------------------- blowup

Case dirac_case(const BlowupConfig& cfg) {
    Case c;
    c.name = "dirac-square";
    c.claim = "blowup-ode-sanity";
    c.digest = digest("dirac|square|phi0=1|T=" + num(cfg.dirac_T) + "|N=" + std::to_string(cfg.dirac_steps));
    const ScalarTrace tr = solve_scalar_nonlinear(make_pair(SonineSpec::dirac()), 0.0, square_source(), 1.0,
                                                  TimeGrid::uniform(cfg.dirac_T, cfg.dirac_steps), 1e6);
    c.expected = {{"blowup_time", 1.0}, {"max_width", cfg.dirac_max_width}};
    if (tr.bracket) c.measured = {{"implicit_low", tr.bracket->t_low}, {"implicit_high", tr.bracket->t_high}};
    if (tr.enclosure) {
        c.measured.push_back({"enclosure_low", tr.enclosure->t_low});
        c.measured.push_back({"enclosure_high", tr.enclosure->t_high});
    }
    c.pass = tr.status == RunStatus::BlowUp && tr.enclosure && tr.enclosure->contains(1.0) &&
             tr.enclosure->width() <= cfg.dirac_max_width;
    c.files.emplace_back(c.name, trace_csv(tr));
    return c;
}

Case scalar_bracket_case(double alpha, double c0, double lambda1, bool asserted, const BlowupConfig& cfg) {
    Case c;
    c.name = "scalar-rl-" + num(alpha) + "-c0-" + num(c0) + (lambda1 == 0.0 ? "-lambda-0" : "");
    c.claim = "blowup-time-bracket";
    c.asserted = asserted;
    c.digest = digest("scalar-bracket|RL(" + num(alpha) + ")|c0=" + num(c0) + "|lambda1=" + fmt17(lambda1) +
                      "|T=" + num(cfg.scalar_T) + "|N=" + std::to_string(cfg.scalar_steps));
    const Bracket closed = bracket_blowup_bounds(alpha, c0);
    const Bracket widened{closed.t_low * (1.0 - cfg.slack), closed.t_high * (1.0 + cfg.slack)};
    const ScalarTrace tr = solve_scalar_nonlinear(make_pair(SonineSpec::riemann_liouville(alpha)), lambda1,
                                                  NonlinearSource::fisher_kpp(), c0,
                                                  TimeGrid::uniform(cfg.scalar_T, cfg.scalar_steps), 1e6);
    c.expected = {{"bracket_low", widened.t_low}, {"bracket_high", widened.t_high}};
    c.measured = {{"status", status_code(tr.status)}, {"final_value", tr.values.back()}};
    const std::optional<Bracket> b = tr.enclosure ? tr.enclosure : tr.bracket;
    if (b) {
        c.measured.push_back({"detected_low", b->t_low});
        c.measured.push_back({"detected_high", b->t_high});
    }
    c.pass = tr.status == RunStatus::BlowUp && b && b->t_high >= widened.t_low && b->t_low <= widened.t_high;
    if (tr.status != RunStatus::BlowUp)
        c.note = std::string("no blow-up on [0, ") + num(cfg.scalar_T) + "]: " + to_string(tr.status);
    if (lambda1 == 0.0) c.note += (c.note.empty() ? "" : "; ") + std::string("reported with lambda1 = 0");
    c.files.emplace_back(c.name, trace_csv(tr));
    return c;
}

ProblemSpec blowup_problem(double c0, int steps, const BlowupConfig& cfg, bool keep = false) {
    const auto op = SpectralOperator::dirichlet_laplacian(1.0, cfg.pde_modes);
    // int u0 phi_1 = c0 with int phi_1 = 1
    return ProblemSpec{make_pair(SonineSpec::riemann_liouville(0.5)),
                       op,
                       NonlinearSource::fisher_kpp(),
                       unit_mode(op, c0 / unit_integral_phi1_scale(1.0)),
                       TimeGrid::uniform(cfg.pde_T, steps),
                       {},
                       keep};
}

Case pde_blowup_case(const BlowupConfig& cfg) {
    Case c;
    c.name = "pde-rl-0.5-c0-" + num(cfg.pde_c0);
    c.claim = "blowup-pde";
    c.digest = digest("pde-blowup|RL(0.5)|FisherKPP|DirichletLaplacian(1)|modes=" + std::to_string(cfg.pde_modes) +
                      "|c0=" + num(cfg.pde_c0) + "|T=" + num(cfg.pde_T) + "|N=" + std::to_string(cfg.pde_steps));
    const SolveReport r = solve(blowup_problem(cfg.pde_c0, cfg.pde_steps, cfg, true));
    const auto phi = eigen_projection(r);
    c.measured = {{"status", status_code(r.status)}, {"phi_initial", phi.front()}, {"phi_final", phi.back()},
                  {"final_time", r.times.back()}};
    if (r.bracket) {
        c.measured.push_back({"bracket_low", r.bracket->t_low});
        c.measured.push_back({"bracket_high", r.bracket->t_high});
    }
    c.expected = {{"status", status_code(RunStatus::BlowUp)}};
    c.pass = r.status == RunStatus::BlowUp;
    c.numerical_failure = r.status == RunStatus::Failed;
    c.note = r.status == RunStatus::BlowUp ? "" : std::string(to_string(r.status)) + " on [0, " + num(cfg.pde_T) + "]";
    c.files.emplace_back(c.name, report_csv(r));
    return c;
}

struct Bisection {
    int steps = 0;
    double lo = 0.0, hi = 0.0;
    std::vector<std::pair<double, RunStatus>> probes;
};

Bisection bisect_threshold(int steps, const BlowupConfig& cfg) {
    Bisection b;
    b.steps = steps;
    b.lo = cfg.bisect_lo;
    b.hi = cfg.bisect_hi;
    auto classify = [&](double c0) {
        const RunStatus s = solve(blowup_problem(c0, steps, cfg)).status;
        b.probes.emplace_back(c0, s);
        return s == RunStatus::Completed;
    };
    classify(b.lo);
    classify(b.hi);
    for (int i = 0; i < cfg.bisect_iters; ++i) {
        const double mid = 0.5 * (b.lo + b.hi);
        if (classify(mid)) b.lo = mid;
        else b.hi = mid;
    }
    return b;
}

Case threshold_case(const Bisection& coarse, const Bisection& fine, const BlowupConfig& cfg) {
    Case c;
    c.name = "threshold-bisection";
    c.claim = "blowup-threshold";
    c.digest = digest("threshold|RL(0.5)|FisherKPP|modes=" + std::to_string(cfg.pde_modes) + "|T=" + num(cfg.pde_T) +
                      "|c=[" + num(cfg.bisect_lo) + "," + num(cfg.bisect_hi) + "]|iters=" +
                      std::to_string(cfg.bisect_iters) + "|N=" + std::to_string(coarse.steps) + "," +
                      std::to_string(fine.steps));
    const double cell = (cfg.bisect_hi - cfg.bisect_lo) / std::ldexp(1.0, cfg.bisect_iters);
    // Monotone: every completed probe lies below every non-completed one.
    auto monotone = [](const Bisection& b) {
        double max_done = -std::numeric_limits<double>::infinity(), min_blow = std::numeric_limits<double>::infinity();
        for (const auto& [c0, s] : b.probes) {
            if (s == RunStatus::Completed) max_done = std::max(max_done, c0);
            else min_blow = std::min(min_blow, c0);
        }
        return max_done < min_blow;
    };
    auto failed = [](const Bisection& b) {
        return std::count_if(b.probes.begin(), b.probes.end(), [](const auto& p) { return p.second == RunStatus::Failed; });
    };
    const double m_coarse = 0.5 * (coarse.lo + coarse.hi), m_fine = 0.5 * (fine.lo + fine.hi);
    const bool endpoints = coarse.probes[0].second == RunStatus::Completed &&
                           coarse.probes[1].second != RunStatus::Completed &&
                           fine.probes[0].second == RunStatus::Completed && fine.probes[1].second != RunStatus::Completed;
    c.measured = {{"threshold", m_fine},
                  {"threshold_coarse", m_coarse},
                  {"coarse_low", coarse.lo},
                  {"coarse_high", coarse.hi},
                  {"fine_low", fine.lo},
                  {"fine_high", fine.hi},
                  {"failed_probes", static_cast<double>(failed(coarse) + failed(fine))}};
    c.expected = {{"max_shift", cell}};
    c.pass = endpoints && monotone(coarse) && monotone(fine) && std::abs(m_fine - m_coarse) <= cell * (1.0 + 1e-9);
    if (!endpoints) c.note = "the search interval does not straddle the threshold";
    std::ostringstream os;
    os << "steps,c0,status\n";
    for (const auto* b : {&coarse, &fine})
        for (const auto& [c0, s] : b->probes) os << b->steps << ',' << fmt17(c0) << ',' << to_string(s) << '\n';
    c.files.emplace_back(c.name, os.str());
    return c;
}

// ----------------------------------------------------------- quasilinear

Case power_decay_case(double alpha, double gamma_exp, const QuasilinearConfig& cfg) {
    Case c;
    c.name = "power-a" + num(alpha) + "-g" + num(gamma_exp);
    c.claim = "quasilinear-decay-rate";
    c.digest = digest("power-decay|alpha=" + num(alpha) + "|gamma=" + num(gamma_exp) + "|C=" + num(cfg.C) + "|T=" +
                      num(cfg.T) + "|N=" + std::to_string(cfg.steps) + "|r=" + num(cfg.grading) + "|fit=" +
                      num(cfg.fit_lo_fraction));
    const ScalarTrace tr =
        solve_power_decay(alpha, cfg.C, gamma_exp, 1.0, TimeGrid::graded(cfg.T, cfg.steps, cfg.grading));
    std::vector<double> x, y;
    bool positive = true, nonincreasing = true;
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        positive = positive && tr.values[i] > 0.0;
        if (i > 0) nonincreasing = nonincreasing && tr.values[i] <= tr.values[i - 1];
        if (tr.times[i] >= cfg.fit_lo_fraction * cfg.T && tr.values[i] > 0.0) {
            x.push_back(std::log(tr.times[i]));
            y.push_back(std::log(tr.values[i]));
        }
    }
    const LineFit fit = fit_line(x, y);
    const double target = -alpha / gamma_exp;
    c.measured = {{"slope", fit.slope}, {"r2", fit.r2}, {"final_value", tr.values.back()}};
    c.expected = {{"slope", target}, {"rel_tol", cfg.slope_rel_tol}};
    c.pass = tr.status == RunStatus::Completed && positive && nonincreasing &&
             std::abs(fit.slope - target) <= cfg.slope_rel_tol * std::abs(target);
    c.files.emplace_back(c.name, trace_csv(tr));
    return c;
}

Case general_decay_case(const SonineSpec& k, const QuasilinearConfig& cfg) {
    Case c;
    c.name = "general-" + slug(k.describe()) + "-g2";
    c.claim = "quasilinear-bounded-decrease";
    c.digest = digest("general-decay|" + k.describe() + "|gamma=2|C=1|T=" + num(cfg.general_T) + "|N=" +
                      std::to_string(cfg.general_steps));
    const ScalarTrace tr = solve_scalar_decay(make_pair(k), 1.0, 2.0, 1.0, TimeGrid::uniform(cfg.general_T, cfg.general_steps));
    bool positive = true, nonincreasing = true;
    for (std::size_t i = 0; i < tr.values.size(); ++i) {
        positive = positive && tr.values[i] > 0.0 && tr.values[i] <= 1.0;
        if (i > 0) nonincreasing = nonincreasing && tr.values[i] <= tr.values[i - 1];
    }
    c.measured = {{"final_value", tr.values.back()}, {"positive", positive ? 1.0 : 0.0},
                  {"nonincreasing", nonincreasing ? 1.0 : 0.0}};
    c.expected = {{"positive", 1.0}, {"nonincreasing", 1.0}};
    c.pass = tr.status == RunStatus::Completed && positive && nonincreasing;
    c.files.emplace_back(c.name, trace_csv(tr));
    return c;
}

// ----------------------------------------------------------- convergence

Case convergence_case(double alpha, double r, double min_order, bool require_max_error, const ConvergenceConfig& cfg) {
    Case c;
    c.name = "rl-" + num(alpha) + (r == 1.0 ? "-uniform" : "-graded-" + num(r));
    c.claim = "relaxation-convergence";
    std::string key = "convergence|RL(" + num(alpha) + ")|r=" + num(r) + "|T=" + num(cfg.T);
    for (int n : cfg.steps) key += "|" + std::to_string(n);
    c.digest = digest(key);
    const auto op = SpectralOperator::dirichlet_laplacian(1.0, 4);
    const double lambda1 = op.eigenvalues()[0];
    const double exact = specfun::mittag_leffler(alpha, 1.0, -lambda1 * std::pow(cfg.T, alpha));
    std::vector<double> logn, loge, errors;
    std::ostringstream os;
    os << "steps,error\n";
    for (int n : cfg.steps) {
        const TimeGrid g = r == 1.0 ? TimeGrid::uniform(cfg.T, n) : TimeGrid::graded(cfg.T, n, r);
        ProblemSpec ps{make_pair(SonineSpec::riemann_liouville(alpha)), op, NonlinearSource::zero(), unit_mode(op), g, {}, true};
        const SolveReport rep = solve(ps);
        const auto& a = rep.fields.back();
        double err = std::abs(a[0] - exact);
        for (std::size_t k = 1; k < a.size(); ++k) err = std::max(err, std::abs(a[k]));
        errors.push_back(err);
        logn.push_back(std::log(static_cast<double>(n)));
        loge.push_back(std::log(err));
        os << n << ',' << fmt17(err) << '\n';
        c.measured.push_back({"error_N" + std::to_string(n), err});
    }
    bool monotone = true;
    for (std::size_t i = 1; i < errors.size(); ++i) monotone = monotone && errors[i] < errors[i - 1];
    const double order = -fit_line(logn, loge).slope;
    c.measured.push_back({"order", order});
    c.expected = {{"min_order", min_order}};
    c.pass = monotone && order >= min_order;
    if (require_max_error) {
        c.expected.push_back({"max_error", cfg.max_error});
        c.pass = c.pass && errors.back() <= cfg.max_error;
    }
    c.files.emplace_back(c.name, os.str());
    return c;
}

}  // namespace

SuiteResult run_sonine_suite(const Options& opt) {
    return timed("sonine", [&] {
        const auto& cfg = opt.sonine;
        Batch b;
        for (const SonineSpec& s : {SonineSpec::dirac(), SonineSpec::riemann_liouville(0.3), SonineSpec::riemann_liouville(0.7),
                                    SonineSpec::tempered(0.5, 1.0), SonineSpec::bessel(0.4), SonineSpec::mittag_leffler(0.3, 0.7),
                                    SonineSpec::distributed_order()})
            b.add(slug(s.describe()), "sonine-identity", [s, &cfg] { return std::vector<Case>{sonine_case(s, cfg)}; });
        b.add("multi-term-0.8-0.4-associate", "sonine-identity", [&cfg] { return std::vector<Case>{associate_case(cfg)}; });
        b.add("distributed-order-laplace-identity", "distributed-order-kernel-identity",
              [&cfg] { return std::vector<Case>{laplace_identity_case(cfg)}; });
        return b.run(opt.jobs);
    });
}

SuiteResult run_invariance_suite(const Options& opt) {
    return timed("invariance", [&] {
        const auto& cfg = opt.invariance;
        Batch b;
        const std::vector<SonineSpec> kernels{SonineSpec::riemann_liouville(0.3), SonineSpec::riemann_liouville(0.7),
                                              SonineSpec::tempered(0.5, 1.0), SonineSpec::distributed_order(),
                                              SonineSpec::mittag_leffler(0.3, 0.7)};
        const std::vector<NonlinearSource> sources{NonlinearSource::fisher_kpp(), NonlinearSource::logarithmic(),
                                                   NonlinearSource::tanh_shift()};
        const std::vector<SpectralOperator> ops{SpectralOperator::dirichlet_laplacian(1.0, cfg.modes),
                                                SpectralOperator::involution(0.5, cfg.modes)};
        for (const auto& k : kernels)
            for (const auto& f : sources)
                for (const auto& op : ops)
                    b.add(slug(k.describe()) + "--" + slug(f.describe()) + "--" + slug(op.describe()), "range-invariance",
                          [k, f, op, &cfg] { return std::vector<Case>{invariance_case(k, f, op, cfg)}; });
        return b.run(opt.jobs);
    });
}

SuiteResult run_decay_suite(const Options& opt) {
    return timed("decay", [&] {
        const auto& cfg = opt.decay;
        Batch b;
        for (const SonineSpec& k : {SonineSpec::riemann_liouville(0.5), SonineSpec::multi_term({0.8, 0.4}),
                                    SonineSpec::distributed_order(), SonineSpec::tempered(0.5, 1.0)})
            b.add(slug(k.describe()) + "-estimate", "decay-estimate", [k, &cfg] { return decay_cases(k, cfg); });
        b.add("tempered-0.5-1-linear-regime", "decay-regime-exponential",
              [&cfg] { return std::vector<Case>{tempered_linear_case(cfg)}; });
        return b.run(opt.jobs);
    });
}

SuiteResult run_blowup_suite(const Options& opt) {
    return timed("blowup", [&] {
        const auto& cfg = opt.blowup;
        Batch b;
        b.add("dirac-square", "blowup-ode-sanity", [&cfg] { return std::vector<Case>{dirac_case(cfg)}; });
        for (double alpha : {0.4, 0.5, 0.6})
            for (double c0 : {4.0, 8.0}) {
                const bool asserted = alpha == 0.5;
                b.add("scalar-rl-" + num(alpha) + "-c0-" + num(c0), "blowup-time-bracket", [=, &cfg] {
                    return std::vector<Case>{scalar_bracket_case(alpha, c0, std::numbers::pi * std::numbers::pi, asserted, cfg)};
                });
                b.add("scalar-rl-" + num(alpha) + "-c0-" + num(c0) + "-lambda-0", "blowup-time-bracket",
                      [=, &cfg] { return std::vector<Case>{scalar_bracket_case(alpha, c0, 0.0, false, cfg)}; });
            }
        b.add("pde-rl-0.5-c0-" + num(cfg.pde_c0), "blowup-pde", [&cfg] { return std::vector<Case>{pde_blowup_case(cfg)}; });
        std::vector<Case> cases = b.run(opt.jobs);

        // The two bisections are independent; the comparison needs both.
        std::vector<Bisection> bis(2);
        std::vector<Task> tasks;
        std::vector<std::pair<std::string, std::string>> ids;
        for (int i = 0; i < 2; ++i) {
            ids.emplace_back("threshold-bisection", "blowup-threshold");
            tasks.push_back([i, &bis, &cfg] {
                bis[i] = bisect_threshold(cfg.bisect_steps * (i + 1), cfg);
                return std::vector<Case>{};
            });
        }
        std::vector<Case> errors = run_tasks(tasks, ids, opt.jobs);
        if (!errors.empty()) cases.push_back(std::move(errors.front()));
        else cases.push_back(threshold_case(bis[0], bis[1], cfg));
        return cases;
    });
}

SuiteResult run_quasilinear_suite(const Options& opt) {
    return timed("quasilinear", [&] {
        const auto& cfg = opt.quasilinear;
        Batch b;
        for (double a : cfg.alphas)
            for (double g : cfg.gammas)
                b.add("power-a" + num(a) + "-g" + num(g), "quasilinear-decay-rate",
                      [a, g, &cfg] { return std::vector<Case>{power_decay_case(a, g, cfg)}; });
        for (const SonineSpec& k : {SonineSpec::tempered(0.5, 1.0), SonineSpec::distributed_order(),
                                    SonineSpec::multi_term({0.8, 0.4}), SonineSpec::mittag_leffler(0.3, 0.7)})
            b.add("general-" + slug(k.describe()) + "-g2", "quasilinear-bounded-decrease",
                  [k, &cfg] { return std::vector<Case>{general_decay_case(k, cfg)}; });
        return b.run(opt.jobs);
    });
}

SuiteResult run_convergence_suite(const Options& opt) {
    return timed("convergence", [&] {
        const auto& cfg = opt.convergence;
        Batch b;
        b.add("rl-0.5-uniform", "relaxation-convergence",
              [&cfg] { return std::vector<Case>{convergence_case(0.5, 1.0, 0.0, true, cfg)}; });
        b.add("rl-0.5-graded-" + num(cfg.graded_r), "relaxation-convergence",
              [&cfg] { return std::vector<Case>{convergence_case(0.5, cfg.graded_r, cfg.min_order_graded, false, cfg)}; });
        b.add("rl-0.9-uniform", "relaxation-convergence",
              [&cfg] { return std::vector<Case>{convergence_case(0.9, 1.0, cfg.min_order_09, false, cfg)}; });
        return b.run(opt.jobs);
    });
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"sonine", "invariance", "decay", "blowup", "quasilinear", "convergence"};
    return names;
}

bool is_suite(const std::string& name) {
    const auto& n = suite_names();
    return std::find(n.begin(), n.end(), name) != n.end();
}

SuiteResult run_suite(const std::string& name, const Options& opt) {
    SuiteResult r;
    if (name == "sonine") r = run_sonine_suite(opt);
    else if (name == "invariance") r = run_invariance_suite(opt);
    else if (name == "decay") r = run_decay_suite(opt);
    else if (name == "blowup") r = run_blowup_suite(opt);
    else if (name == "quasilinear") r = run_quasilinear_suite(opt);
    else if (name == "convergence") r = run_convergence_suite(opt);
    else throw PreconditionError("unknown suite '" + name + "'");
    if (!opt.out_dir.empty()) write_suite(r, opt.out_dir);
    return r;
}

namespace {

nlohmann::ordered_json quantities(const std::vector<Quantity>& qs) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& q : qs) j[q.name] = std::isfinite(q.value) ? nlohmann::ordered_json(q.value) : nlohmann::ordered_json(nullptr);
    return j;
}

nlohmann::ordered_json to_json(const SuiteResult& r) {
    nlohmann::ordered_json cases = nlohmann::ordered_json::array();
    for (const auto& c : r.cases) {
        nlohmann::ordered_json arts = nlohmann::ordered_json::array();
        for (const auto& f : c.files) arts.push_back(f.first + ".csv");
        cases.push_back({{"name", c.name},
                         {"claim", c.claim},
                         {"digest", c.digest},
                         {"asserted", c.asserted},
                         {"pass", c.pass},
                         {"numerical_failure", c.numerical_failure},
                         {"note", c.note},
                         {"measured", quantities(c.measured)},
                         {"expected", quantities(c.expected)},
                         {"artifacts", arts}});
    }
    return {{"schema_version", 1},
            {"suite", r.suite},
            {"pass", r.pass()},
            {"passed", r.passed()},
            {"failed", r.failed()},
            {"total", static_cast<int>(r.cases.size())},
            {"cases", cases}};
}

void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << text;
}

}  // namespace

std::string summary_json(const SuiteResult& result) { return to_json(result).dump(2) + "\n"; }

void write_suite(SuiteResult& result, const std::filesystem::path& out_dir) {
    const auto dir = out_dir / result.suite;
    ensure_directory(dir);
    result.artifacts.clear();
    for (const auto& c : result.cases)
        for (const auto& [stem, text] : c.files) {
            const auto p = dir / (stem + ".csv");
            write_text(p, text);
            result.artifacts.push_back(p.string());
        }
    write_text(dir / "summary.json", summary_json(result));
    result.artifacts.push_back((dir / "summary.json").string());
}

void write_aggregate(const std::vector<SuiteResult>& results, const std::filesystem::path& out_dir) {
    ensure_directory(out_dir);
    nlohmann::ordered_json suites = nlohmann::ordered_json::array();
    bool all = true;
    for (const auto& r : results) {
        all = all && r.pass();
        suites.push_back({{"suite", r.suite},
                          {"pass", r.pass()},
                          {"passed", r.passed()},
                          {"failed", r.failed()},
                          {"numerical_failure", r.numerical_failure()},
                          {"summary", r.suite + "/summary.json"}});
    }
    const nlohmann::ordered_json j{{"schema_version", 1}, {"pass", all}, {"suites", suites}};
    write_text(out_dir / "summary.json", j.dump(2) + "\n");
}

}  // namespace sonine::verify
