#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace sonine::verify {

struct Quantity {
    std::string name;
    double value = 0.0;
};

struct Case {
    std::string name;    // unique within the suite, used as the CSV file stem
    std::string claim;   // descriptive claim id, e.g. "decay-estimate"
    std::string digest;  // hash of the case configuration
    std::vector<Quantity> measured;
    std::vector<Quantity> expected;
    bool pass = false;
    bool asserted = true;  // false: reported only, never affects the verdict
    bool numerical_failure = false;
    std::string note;
    // CSV payloads, written by the aggregator as <suite>/<name>.csv.
    std::vector<std::pair<std::string, std::string>> files;

    double get(const std::string& quantity) const;
};

struct SuiteResult {
    std::string suite;
    std::vector<Case> cases;
    std::vector<std::string> artifacts;
    double seconds = 0.0;

    int passed() const;
    int failed() const;  // asserted cases that did not pass
    bool pass() const { return failed() == 0; }
    bool numerical_failure() const;
    const Case* find(const std::string& name) const;
};

struct SonineConfig {
    std::vector<double> times{0.1, 0.25, 0.5, 1.0, 2.0, 5.0};
    double tol = 1e-6;
    double associate_T = 5.0;
    int associate_steps = 1000;
};

struct InvarianceConfig {
    double T = 2.0;
    int steps = 2048;
    int modes = 16;
    double tol = 1e-6;
};

struct DecayConfig {
    double T = 100.0;
    int steps = 2048;
    int modes = 16;
    double tol_abs = 1e-3;
    double fit_lo = 10.0, fit_hi = 100.0;
    double slope_rel_tol = 0.15;
    double band_lo = 0.5, band_hi = 2.0;  // cum_l(t) / log t
    double tempered_T = 20.0;
    double tempered_fit_lo = 2.0, tempered_fit_hi = 20.0;
    double tempered_min_rate = 0.1;
    double tempered_min_r2 = 0.99;
};

struct BlowupConfig {
    int dirac_steps = 4096;
    double dirac_T = 2.0;
    double dirac_max_width = 1e-2;
    double scalar_T = 1.0;
    int scalar_steps = 4096;
    double slack = 0.1;
    double pde_T = 2.0;
    int pde_steps = 2000;
    int pde_modes = 16;
    double pde_c0 = 8.0;
    double bisect_lo = 0.1, bisect_hi = 20.0;
    int bisect_iters = 12;
    int bisect_steps = 1000;  // and twice this for the refinement check
};

struct QuasilinearConfig {
    std::vector<double> alphas{0.3, 0.5, 0.8};
    std::vector<double> gammas{1.0, 2.0, 3.0};
    double C = 10.0;
    double T = 1e6;
    int steps = 3000;
    double grading = 3.0;
    double fit_lo_fraction = 0.1;  // window [fraction * T, T]
    double slope_rel_tol = 0.1;
    double general_T = 100.0;
    int general_steps = 1000;
};

struct ConvergenceConfig {
    std::vector<int> steps{256, 512, 1024, 2048, 4096};
    double T = 1.0;
    double max_error = 1e-3;
    double graded_r = 4.0;
    double min_order_graded = 0.8;
    double min_order_09 = 0.7;
};

struct Options {
    std::filesystem::path out_dir;  // empty: no files are written
    int jobs = 1;
    SonineConfig sonine;
    InvarianceConfig invariance;
    DecayConfig decay;
    BlowupConfig blowup;
    QuasilinearConfig quasilinear;
    ConvergenceConfig convergence;
};

SuiteResult run_sonine_suite(const Options& opt);
SuiteResult run_invariance_suite(const Options& opt);
SuiteResult run_decay_suite(const Options& opt);
SuiteResult run_blowup_suite(const Options& opt);
SuiteResult run_quasilinear_suite(const Options& opt);
SuiteResult run_convergence_suite(const Options& opt);

const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);
// Runs one suite by name and writes its artifacts if out_dir is set.
SuiteResult run_suite(const std::string& name, const Options& opt);

// <out>/<suite>/<case>.csv and <out>/<suite>/summary.json.
void write_suite(SuiteResult& result, const std::filesystem::path& out_dir);
// <out>/summary.json with one verdict per suite.
void write_aggregate(const std::vector<SuiteResult>& results, const std::filesystem::path& out_dir);
std::string summary_json(const SuiteResult& result);

// Least squares slope and R^2 of y against x.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    int n = 0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace sonine::verify
