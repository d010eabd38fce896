// sonine: solve configured problems, run verification suites, print bounds.
//
// Exit codes: 0 success, 1 invalid input, 2 numerical failure, 3 claim violation.

#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sonine/config.hpp"
#include "sonine/errors.hpp"
#include "sonine/io.hpp"
#include "sonine/pde.hpp"
#include "sonine/tstep.hpp"
#include "sonine/verify.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kNumerical = 2;
constexpr int kViolation = 3;

using json = nlohmann::ordered_json;

json num_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << text;
}

int cmd_solve(const std::string& config_path, const std::string& out_override) {
    sonine::RunConfig cfg;
    sonine::ProblemSpec spec = [&] {
        cfg = sonine::load_config(config_path);
        return sonine::build_problem(cfg);
    }();
    const std::filesystem::path out = out_override.empty() ? std::filesystem::path(cfg.output.dir) : std::filesystem::path(out_override);
    sonine::ensure_directory(out);

    const sonine::SolveReport r = sonine::solve(spec);
    {
        std::ofstream csv(out / "report.csv", std::ios::binary);
        sonine::write_report_csv(r, csv);
    }
    if (spec.keep_fields) {
        std::ofstream f(out / "fields.csv", std::ios::binary);
        f << "step,t";
        for (int k = 1; k <= spec.op.n_modes(); ++k) f << ",a" << k;
        f << '\n';
        for (std::size_t i = 0; i < r.fields.size(); ++i) {
            f << i << ',' << sonine::fmt17(r.times[i]);
            for (double a : r.fields[i]) f << ',' << sonine::fmt17(a);
            f << '\n';
        }
    }

    json summary{{"schema_version", 1},
                 {"status", sonine::to_string(r.status)},
                 {"reason", r.reason},
                 {"kernel", spec.pair.spec().describe()},
                 {"operator", spec.op.describe()},
                 {"source", spec.source.describe()},
                 {"steps", static_cast<int>(r.times.size()) - 1},
                 {"final_time", r.times.back()},
                 {"u0_norm", r.u0_norm},
                 {"coercivity_constant", r.coercivity_constant}};
    summary["bracket"] = r.bracket ? json{{"t_low", r.bracket->t_low}, {"t_high", r.bracket->t_high}} : json(nullptr);
    if (r.status == sonine::RunStatus::Completed && r.u0_norm > 0.0) {
        const auto dc = sonine::decay_check(r, 1e-3);
        const auto mc = sonine::majorant_check(r, 1e-3);
        summary["decay"] = {{"violations", dc.violations}, {"max_excess", num_or_null(dc.max_excess)}, {"tol_abs", 1e-3}};
        summary["majorant"] = {{"pass", mc.pass}, {"max_gap", num_or_null(mc.max_gap_violation)}};
    } else {
        summary["decay"] = nullptr;
        summary["majorant"] = nullptr;
    }
    write_file(out / "summary.json", summary.dump(2) + "\n");
    std::cout << "status: " << sonine::to_string(r.status);
    if (r.bracket) std::cout << " in [" << sonine::fmt17(r.bracket->t_low) << ", " << sonine::fmt17(r.bracket->t_high) << "]";
    std::cout << "\nwrote " << (out / "report.csv").string() << "\n";
    return r.status == sonine::RunStatus::Failed ? kNumerical : kOk;
}

int cmd_verify(const std::string& suite, const std::string& out, int jobs) {
    if (suite != "all" && !sonine::verify::is_suite(suite)) {
        std::cerr << "error: unknown suite '" << suite << "' (expected sonine, invariance, decay, blowup, quasilinear, "
                  << "convergence or all)\n";
        return kInvalid;
    }
    if (jobs < 1) {
        std::cerr << "error: --jobs must be at least 1\n";
        return kInvalid;
    }
    sonine::verify::Options opt;
    opt.out_dir = out;
    opt.jobs = jobs;
    std::vector<sonine::verify::SuiteResult> results;
    const std::vector<std::string> names = suite == "all" ? sonine::verify::suite_names() : std::vector<std::string>{suite};
    for (const auto& name : names) {
        results.push_back(sonine::verify::run_suite(name, opt));
        const auto& r = results.back();
        for (const auto& c : r.cases) {
            const char* tag = !c.asserted ? "INFO" : c.pass ? "PASS" : "FAIL";
            std::cout << '[' << tag << "] " << r.suite << '/' << c.name << " (" << c.claim << ")";
            if (!c.note.empty()) std::cout << ": " << c.note;
            std::cout << '\n';
        }
        std::printf("%s: %d passed, %d failed (%.1fs)\n", r.suite.c_str(), r.passed(), r.failed(), r.seconds);
    }
    if (!out.empty()) sonine::verify::write_aggregate(results, out);
    bool numerical = false, violated = false;
    for (const auto& r : results) {
        numerical = numerical || r.numerical_failure();
        violated = violated || !r.pass();
    }
    return numerical ? kNumerical : violated ? kViolation : kOk;
}

int cmd_bounds(double alpha, double c0) {
    const sonine::Bracket b = sonine::bracket_blowup_bounds(alpha, c0);
    const json j{{"schema_version", 1}, {"alpha", alpha}, {"c0", c0}, {"lower", b.t_low}, {"upper", b.t_high}};
    std::cout << j.dump(2) << '\n';
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nonlocal-in-time reaction-diffusion solver and claim verification"};
    app.require_subcommand(1);

    std::string config_path, solve_out;
    auto* solve = app.add_subcommand("solve", "Run a configured problem");
    solve->add_option("--config", config_path, "Run configuration file")->required();
    solve->add_option("--out", solve_out, "Output directory (overrides [output] dir)");

    std::string suite, verify_out;
    int jobs = 1;
    auto* verify = app.add_subcommand("verify", "Run a verification suite");
    verify->add_option("--suite", suite, "sonine|invariance|decay|blowup|quasilinear|convergence|all")->required();
    verify->add_option("--out", verify_out, "Output directory for CSV and JSON artifacts");
    verify->add_option("--jobs", jobs, "Concurrent cases");

    double alpha = 0.0, c0 = 0.0;
    auto* bounds = app.add_subcommand("bounds", "Closed-form blow-up time bracket");
    bounds->add_option("--alpha", alpha, "Order in (0, 1]")->required();
    bounds->add_option("--c0", c0, "Initial projection, positive")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kInvalid;
    }

    try {
        if (*solve) return cmd_solve(config_path, solve_out);
        if (*verify) return cmd_verify(suite, verify_out, jobs);
        if (*bounds) return cmd_bounds(alpha, c0);
    } catch (const sonine::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalid;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalid;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumerical;
    }
    return kInvalid;
}
