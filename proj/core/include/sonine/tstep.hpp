#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "sonine/grid.hpp"
#include "sonine/kernels.hpp"
#include "sonine/nonlin.hpp"

namespace sonine {

// Piecewise-constant product-integration weights for l with right-endpoint
// collocation: w_{n,j} = (1*l)(t_n - t_j) - (1*l)(t_n - t_{j+1}).
class ConvolutionWeights {
public:
    ConvolutionWeights(const KernelPair& pair, const TimeGrid& grid);

    const TimeGrid& grid() const { return grid_; }
    const KernelPair& pair() const { return pair_; }

    // Row n of the grid weights, j = 0..n-1.
    std::vector<double> row(int n) const;
    double weight(int n, int j) const;

    // Weights seen from time tn for the cells of an arbitrary ascending node
    // list starting at 0: out[i] covers [nodes[i], nodes[i+1]] for i < m and
    // out[m] covers the open cell [nodes[m], tn]. Uses the lag table when the
    // nodes are a prefix of a uniform grid and tn is the next grid node.
    void history(std::span<const double> nodes, double tn, std::vector<double>& out) const;

private:
    KernelPair pair_;
    TimeGrid grid_;
    std::vector<double> cum_;  // (1*l)(t_m) on uniform grids
};

ConvolutionWeights build_weights(const KernelPair& pair, const TimeGrid& grid);

enum class RunStatus { Completed, BlowUp, Failed };
const char* to_string(RunStatus s);

struct Bracket {
    double t_low = 0.0;
    double t_high = 0.0;
    double width() const { return t_high - t_low; }
    bool contains(double t) const { return t_low <= t && t <= t_high; }
};

struct ScalarTrace {
    std::vector<double> times;  // accepted nodes, including any local refinement
    std::vector<double> values;
    RunStatus status = RunStatus::Completed;
    std::optional<Bracket> bracket;
    // For growing solutions: [implicit bracket low, explicit bracket high].
    // The implicit scheme over-predicts and the explicit one under-predicts
    // the growth of an increasing solution with increasing rate.
    std::optional<Bracket> enclosure;
    std::string reason;
};

struct ScalarOptions {
    int max_halvings = 40;
    double bracket_rel_width = 1e-3;
    bool enclosure = true;
};

// W + C (l*W) = 1.
ScalarTrace solve_linear_majorant(double C, const KernelPair& pair, const TimeGrid& grid);

// Phi = Phi0 + l*(f(Phi) - lambda1 Phi), implicit in the current cell.
ScalarTrace solve_scalar_nonlinear(const KernelPair& pair, double lambda1, const NonlinearSource& source,
                                   double phi0, const TimeGrid& grid, double blowup_threshold,
                                   const ScalarOptions& options = {});

// U = U0 - C l*(U^gamma) for a general kernel pair.
ScalarTrace solve_scalar_decay(const KernelPair& pair, double C, double gamma_exp, double U0, const TimeGrid& grid);
// Same with the Riemann-Liouville pair of order alpha.
ScalarTrace solve_power_decay(double alpha, double C, double gamma_exp, double U0, const TimeGrid& grid);

// Closed-form blow-up bracket for the projected Fisher-KPP problem:
// (Gamma(a+1) / (4 (c0 + 1/2)))^{1/a} <= T* <= (Gamma(a+1) / c0)^{1/a}.
Bracket bracket_blowup_bounds(double alpha, double c0);

// CSV with columns step,t,value,status.
void write_trace_csv(const ScalarTrace& trace, std::ostream& os);

}  // namespace sonine
