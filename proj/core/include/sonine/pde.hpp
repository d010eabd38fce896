#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sonine/grid.hpp"
#include "sonine/kernels.hpp"
#include "sonine/nonlin.hpp"
#include "sonine/spatial.hpp"
#include "sonine/tstep.hpp"

namespace sonine {

struct Tolerances {
    double fixed_point_tol = 1e-10;
    int max_iters = 100;
    double blowup_threshold = 1e6;
    int max_halvings = 40;
    double bracket_rel_width = 1e-3;
};

// u = u0 + l*(f(u) - L u) on (0, L) with Dirichlet data.
struct ProblemSpec {
    KernelPair pair;
    SpectralOperator op;
    NonlinearSource source;
    Field u0;
    TimeGrid grid;
    Tolerances tol{};
    bool keep_fields = false;
};

struct SolveReport {
    std::vector<double> times;
    std::vector<double> l2_norms;
    std::vector<double> range_min;
    std::vector<double> range_max;
    std::vector<double> decay_bound;  // ||u0|| / (1 + C_L (1*l)(t_n))
    std::vector<double> majorant_W;
    RunStatus status = RunStatus::Completed;
    std::optional<Bracket> bracket;
    std::string reason;
    double u0_norm = 0.0;
    double u0_min = 0.0;
    double u0_max = 0.0;
    double coercivity_constant = 0.0;
    double length = 1.0;
    // Modal coefficients per accepted step, only with keep_fields.
    std::vector<std::vector<double>> fields;
};

SolveReport solve(const ProblemSpec& spec);

struct DecayCheck {
    int violations = 0;
    double max_excess = 0.0;  // max of l2_norm - decay_bound, may be negative
    bool skipped = false;     // ||u0|| = 0
};
DecayCheck decay_check(const SolveReport& report, double tol_abs);

struct MajorantCheck {
    bool pass = false;
    double max_gap_violation = 0.0;  // max of U_n - W_n
};
MajorantCheck majorant_check(const SolveReport& report, double tol_abs = 1e-3);

enum class Phi1Normalization { Orthonormal, UnitIntegral };

// Phi(t_n) = int u(t_n) phi_1 dx read off the first modal coefficient.
std::vector<double> eigen_projection(const SolveReport& report,
                                     Phi1Normalization norm = Phi1Normalization::UnitIntegral);

// Factor c with phi_1 (int phi_1 = 1) = c * sqrt(2/L) sin(pi x / L).
double unit_integral_phi1_scale(double length);

// Columns step,t,l2_norm,range_min,range_max,decay_bound,majorant_W.
void write_report_csv(const SolveReport& report, std::ostream& os);

}  // namespace sonine
