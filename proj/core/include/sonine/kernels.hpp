#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sonine/grid.hpp"

namespace sonine {

enum class KernelKind { Dirac, RiemannLiouville, DistributedOrder, Tempered, BesselPair, MittagLefflerPair, MultiTerm };

// g_mu(t) = t^{mu-1} / Gamma(mu).
double power_kernel(double mu, double t);

// Parameters of a Sonine pair. Constructed only through the named factories,
// which enforce the parameter ranges.
class SonineSpec {
public:
    static SonineSpec dirac();
    static SonineSpec riemann_liouville(double alpha);
    static SonineSpec distributed_order();
    static SonineSpec tempered(double alpha, double mu);
    static SonineSpec bessel(double alpha);
    // 0 < alpha < beta < 1.
    static SonineSpec mittag_leffler(double alpha, double beta);
    // Strictly decreasing orders in (0, 1).
    static SonineSpec multi_term(std::vector<double> alphas);

    KernelKind kind() const { return kind_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double mu() const { return mu_; }
    const std::vector<double>& alphas() const { return alphas_; }
    std::string describe() const;

private:
    explicit SonineSpec(KernelKind kind) : kind_(kind) {}

    KernelKind kind_;
    double alpha_ = 0.0;
    double beta_ = 0.0;
    double mu_ = 0.0;
    std::vector<double> alphas_;
};

namespace detail {
struct MultiTermDensity;
}

// Evaluators for k, l and their running integrals. Immutable and safe to
// share between threads.
class KernelPair {
public:
    explicit KernelPair(const SonineSpec& spec);

    const SonineSpec& spec() const { return spec_; }
    // False for Dirac, whose k is a distribution.
    bool has_pointwise_k() const { return spec_.kind() != KernelKind::Dirac; }
    double k(double t) const;
    double l(double t) const;
    // (1*l)(t) and (1*k)(t).
    double cum_l(double t) const;
    double cum_k(double t) const;
    bool l_integrable_on_halfline() const;

private:
    SonineSpec spec_;
    std::shared_ptr<const detail::MultiTermDensity> multi_;
};

KernelPair make_pair(const SonineSpec& spec);

// (1*l)(t); DomainError for t < 0.
double cumulative_l(const KernelPair& pair, double t);

struct SonineReport {
    std::vector<double> t;
    std::vector<double> deviation;
    double max_deviation = 0.0;
    bool pass = false;
};

// |(k*l)(t) - 1| at each sample. NumericalError names the offending t when
// the quadrature does not converge.
SonineReport verify_sonine(const KernelPair& pair, std::span<const double> t_samples, double tol);

struct AssociateResult {
    std::vector<double> midpoints;
    std::vector<double> values;
    // max_n |(k*l)(t_n) - 1| over the grid nodes.
    double residual_max = 0.0;
};

// Solves (k*l)(t_n) = 1 for piecewise-constant l on the grid cells.
AssociateResult numeric_associate(const SonineSpec& k_spec, const TimeGrid& grid);

}  // namespace sonine
