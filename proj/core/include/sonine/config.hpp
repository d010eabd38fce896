#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sonine/pde.hpp"

namespace sonine {

// Sectioned key = value file:
//
//   [kernel]      type, alpha, beta, mu, alphas (comma separated)
//   [operator]    type, length, s, epsilon, modes, nodes
//   [source]      type, p, q
//   [initial]     type (eigenfunction|scaled_eigenfunction|bump|nodal_file), scale, mode, path
//   [time]        T, steps, mesh (uniform|graded), grading_r
//   [tolerances]  fixed_point_tol, max_iters, blowup_threshold
//   [output]      dir, keep_fields
//
// '#' starts a comment. Unknown sections and keys are errors.
struct RunConfig {
    struct Kernel {
        std::string type;
        std::optional<double> alpha, beta, mu;
        std::vector<double> alphas;
    } kernel;
    struct Operator {
        std::string type = "dirichlet_laplacian";
        double length = 1.0;
        std::optional<double> s, epsilon;
        int modes = 32;
        int nodes = 0;
    } op;
    struct Source {
        std::string type;
        std::optional<double> p, q;
    } source;
    struct Initial {
        std::string type = "eigenfunction";
        double scale = 1.0;
        int mode = 1;
        std::string path;
    } initial;
    struct Time {
        double T = 1.0;
        int steps = 1024;
        std::string mesh = "uniform";
        double grading_r = 1.0;
    } time;
    Tolerances tol;
    struct Output {
        std::string dir = "out";
        bool keep_fields = false;
    } output;

    std::string file;                   // source name used in error messages
    std::map<std::string, int> lines;   // "section.key" -> line, "section" -> header line
    int line_of(const std::string& section, const std::string& key = "") const;
};

// Throws ConfigError anchored at the offending line.
RunConfig parse_config(std::istream& in, const std::string& name);
RunConfig load_config(const std::filesystem::path& path);

// Validates every parameter against the module preconditions before
// anything is computed; failures are ConfigError with the key's line.
ProblemSpec build_problem(const RunConfig& cfg);

}  // namespace sonine
