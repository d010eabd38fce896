#include "sonine/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "sonine/errors.hpp"
#include "sonine/specfun.hpp"

namespace sonine {

namespace {

constexpr double kPi = std::numbers::pi;

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

void require_order(const char* what, double a) {
    if (!(a > 0.0 && a < 1.0)) throw DomainError(std::string(what) + ": order " + num(a) + " not in (0,1)");
}

// int_0^1 t^{a + shift} / Gamma(a + shift + 1) da, shift = -1 gives k, 0 gives 1*k
// of the distributed-order kernel.
double distributed_integral(double t, double shift) {
    using boost::math::quadrature::gauss;
    const double lt = std::log(t);
    auto f = [&](double a) { return std::exp((a + shift) * lt) * specfun::rgamma(a + shift + 1.0); };
    const double L = std::abs(lt);
    if (lt >= 0.0 || L <= 10.0) return gauss<double, 64>::integrate(f, 0.0, 0.1) + gauss<double, 64>::integrate(f, 0.1, 1.0);
    // For small t the integrand concentrates in a layer of width 1/|ln t| at a = 0.
    const double b1 = std::min(1.0, 5.0 / L);
    const double b2 = std::min(1.0, 40.0 / L);
    double s = gauss<double, 64>::integrate(f, 0.0, b1);
    if (b2 > b1) s += gauss<double, 64>::integrate(f, b1, b2);
    if (b2 < 1.0) s += gauss<double, 64>::integrate(f, b2, 1.0);
    return s;
}

}  // namespace

namespace detail {

// Spectral density of the associate of a multi-term kernel:
// l(t) = int_0^inf e^{-rt} rho(r) dr with
// rho(r) = (1/pi) sum r^{a_j} sin(pi a_j) / |sum r^{a_j} e^{i pi a_j}|^2.
// Both l and 1*l are computed with the trapezoid rule in x = ln r.
struct MultiTermDensity {
    std::vector<double> a;
    std::vector<double> s;
    std::vector<std::complex<double>> e;
    double slow_low;   // decay rate of the integrand as r -> 0
    double slow_high;  // decay rate of rho as r -> inf

    explicit MultiTermDensity(const std::vector<double>& alphas) : a(alphas) {
        for (double aj : a) {
            s.push_back(std::sin(kPi * aj));
            e.push_back(std::polar(1.0, kPi * aj));
        }
        slow_low = 1.0 - a.front();
        slow_high = a.back();
    }

    double rho(double x) const {
        double num = 0.0;
        std::complex<double> den = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j) {
            const double p = std::exp(a[j] * x);
            num += p * s[j];
            den += p * e[j];
        }
        return num / std::norm(den) / kPi;
    }

    static constexpr double h = 0.05;

    double l(double t) const {
        const double lt = std::log(t);
        const double xhi = std::log(50.0) - lt;
        const double xlo = std::min(-lt, 0.0) - 40.0 / slow_low;
        double sum = 0.0;
        for (double x = xhi; x >= xlo; x -= h) sum += std::exp(-std::exp(x) * t + x) * rho(x);
        return sum * h;
    }

    double cum_l(double t) const {
        const double lt = std::log(t);
        const double xhi = std::max(std::log(50.0) - lt, 0.0) + 40.0 / slow_high;
        const double xlo = std::min(-lt, 0.0) - 40.0 / slow_low;
        double sum = 0.0;
        for (double x = xhi; x >= xlo; x -= h) sum += -std::expm1(-std::exp(x) * t) * rho(x);
        return sum * h;
    }
};

}  // namespace detail

double power_kernel(double mu, double t) {
    if (t == 0.0) {
        if (mu > 1.0) return 0.0;
        if (mu == 1.0) return 1.0;
        throw DomainError("power_kernel: singular at t = 0 for mu = " + num(mu));
    }
    return std::pow(t, mu - 1.0) * specfun::rgamma(mu);
}

SonineSpec SonineSpec::dirac() { return SonineSpec(KernelKind::Dirac); }

SonineSpec SonineSpec::riemann_liouville(double alpha) {
    require_order("riemann_liouville", alpha);
    SonineSpec s(KernelKind::RiemannLiouville);
    s.alpha_ = alpha;
    return s;
}

SonineSpec SonineSpec::distributed_order() { return SonineSpec(KernelKind::DistributedOrder); }

SonineSpec SonineSpec::tempered(double alpha, double mu) {
    require_order("tempered", alpha);
    if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("tempered: mu must be positive");
    SonineSpec s(KernelKind::Tempered);
    s.alpha_ = alpha;
    s.mu_ = mu;
    return s;
}

SonineSpec SonineSpec::bessel(double alpha) {
    require_order("bessel", alpha);
    SonineSpec s(KernelKind::BesselPair);
    s.alpha_ = alpha;
    return s;
}

SonineSpec SonineSpec::mittag_leffler(double alpha, double beta) {
    if (!(alpha > 0.0 && alpha < beta && beta < 1.0))
        throw DomainError("mittag_leffler pair: need 0 < alpha < beta < 1, got alpha=" + num(alpha) +
                          ", beta=" + num(beta));
    if (alpha < 0.05) throw RangeError("mittag_leffler pair: alpha below 0.05 not covered");
    SonineSpec s(KernelKind::MittagLefflerPair);
    s.alpha_ = alpha;
    s.beta_ = beta;
    return s;
}

SonineSpec SonineSpec::multi_term(std::vector<double> alphas) {
    if (alphas.empty()) throw DomainError("multi_term: at least one order required");
    for (std::size_t j = 0; j < alphas.size(); ++j) {
        require_order("multi_term", alphas[j]);
        if (j > 0 && !(alphas[j] < alphas[j - 1])) throw DomainError("multi_term: orders must be strictly decreasing");
    }
    SonineSpec s(KernelKind::MultiTerm);
    s.alphas_ = std::move(alphas);
    s.alpha_ = s.alphas_.front();
    return s;
}

std::string SonineSpec::describe() const {
    switch (kind_) {
        case KernelKind::Dirac: return "Dirac";
        case KernelKind::RiemannLiouville: return "RL(" + num(alpha_) + ")";
        case KernelKind::DistributedOrder: return "DistributedOrder";
        case KernelKind::Tempered: return "Tempered(" + num(alpha_) + "," + num(mu_) + ")";
        case KernelKind::BesselPair: return "Bessel(" + num(alpha_) + ")";
        case KernelKind::MittagLefflerPair: return "ML(" + num(alpha_) + "," + num(beta_) + ")";
        case KernelKind::MultiTerm: {
            std::string s = "MultiTerm(";
            for (std::size_t j = 0; j < alphas_.size(); ++j) s += (j ? "," : "") + num(alphas_[j]);
            return s + ")";
        }
    }
    return "?";
}

KernelPair::KernelPair(const SonineSpec& spec) : spec_(spec) {
    if (spec.kind() == KernelKind::MultiTerm) multi_ = std::make_shared<detail::MultiTermDensity>(spec.alphas());
}

KernelPair make_pair(const SonineSpec& spec) { return KernelPair(spec); }

double KernelPair::k(double t) const {
    if (!(t > 0.0)) throw DomainError("k: t must be positive");
    const double a = spec_.alpha();
    switch (spec_.kind()) {
        case KernelKind::Dirac: throw DomainError("k: the Dirac kernel has no pointwise values");
        case KernelKind::RiemannLiouville: return power_kernel(1.0 - a, t);
        case KernelKind::DistributedOrder: return distributed_integral(t, -1.0);
        case KernelKind::Tempered: return power_kernel(1.0 - a, t) * std::exp(-spec_.mu() * t);
        case KernelKind::BesselPair: return std::pow(t, 0.5 * (a - 1.0)) * specfun::bessel_j(a - 1.0, 2.0 * std::sqrt(t));
        case KernelKind::MittagLefflerPair: {
            const double b = spec_.beta();
            return power_kernel(1.0 - b + a, t) + power_kernel(1.0 - b, t);
        }
        case KernelKind::MultiTerm: {
            double s = 0.0;
            for (double aj : spec_.alphas()) s += power_kernel(1.0 - aj, t);
            return s;
        }
    }
    return 0.0;
}

double KernelPair::l(double t) const {
    if (!(t > 0.0)) throw DomainError("l: t must be positive");
    const double a = spec_.alpha();
    switch (spec_.kind()) {
        case KernelKind::Dirac: return 1.0;
        case KernelKind::RiemannLiouville: return power_kernel(a, t);
        case KernelKind::DistributedOrder: return specfun::exp_integral_e1_scaled(t);
        case KernelKind::Tempered: {
            const double mu = spec_.mu();
            return power_kernel(a, t) * std::exp(-mu * t) + std::pow(mu, 1.0 - a) * boost::math::gamma_p(a, mu * t);
        }
        case KernelKind::BesselPair: return std::pow(t, -0.5 * a) * specfun::bessel_i(-a, 2.0 * std::sqrt(t));
        case KernelKind::MittagLefflerPair: {
            const double b = spec_.beta();
            return std::pow(t, b - 1.0) * specfun::mittag_leffler(a, b, -std::pow(t, a));
        }
        case KernelKind::MultiTerm: return multi_->l(t);
    }
    return 0.0;
}

double KernelPair::cum_l(double t) const {
    if (!(t >= 0.0)) throw DomainError("cum_l: t must be nonnegative");
    if (t == 0.0) return 0.0;
    const double a = spec_.alpha();
    switch (spec_.kind()) {
        case KernelKind::Dirac: return t;
        case KernelKind::RiemannLiouville: return std::pow(t, a) * specfun::rgamma(a + 1.0);
        case KernelKind::DistributedOrder: {
            if (t > 1.0) return specfun::exp_integral_e1_scaled(t) + std::log(t) + specfun::euler_gamma;
            // (e^t - 1)(-gamma - ln t) + e^t sum_{k>=1} (-1)^{k+1} t^k / (k k!)
            double s = 0.0, term = 1.0;
            for (int k = 1; k < 60; ++k) {
                term *= -t / k;
                const double d = -term / k;
                s += d;
                if (std::abs(d) < 1e-18 * std::abs(s)) break;
            }
            return std::expm1(t) * (-specfun::euler_gamma - std::log(t)) + std::exp(t) * s;
        }
        case KernelKind::Tempered: {
            const double mu = spec_.mu();
            const double x = mu * t;
            const double p = boost::math::gamma_p(a, x);
            return std::pow(mu, -a) * (p * (1.0 + x - a) + a * std::pow(x, a) * std::exp(-x) * specfun::rgamma(a + 1.0));
        }
        case KernelKind::BesselPair: return std::pow(t, 0.5 * (1.0 - a)) * specfun::bessel_i(1.0 - a, 2.0 * std::sqrt(t));
        case KernelKind::MittagLefflerPair: {
            const double b = spec_.beta();
            return std::pow(t, b) * specfun::mittag_leffler(a, b + 1.0, -std::pow(t, a));
        }
        case KernelKind::MultiTerm: return multi_->cum_l(t);
    }
    return 0.0;
}

double KernelPair::cum_k(double t) const {
    if (!(t >= 0.0)) throw DomainError("cum_k: t must be nonnegative");
    if (t == 0.0) return 0.0;
    const double a = spec_.alpha();
    switch (spec_.kind()) {
        case KernelKind::Dirac: return 1.0;
        case KernelKind::RiemannLiouville: return power_kernel(2.0 - a, t);
        case KernelKind::DistributedOrder: return distributed_integral(t, 0.0);
        case KernelKind::Tempered: {
            const double mu = spec_.mu();
            return std::pow(mu, a - 1.0) * boost::math::gamma_p(1.0 - a, mu * t);
        }
        case KernelKind::BesselPair: return std::pow(t, 0.5 * a) * specfun::bessel_j(a, 2.0 * std::sqrt(t));
        case KernelKind::MittagLefflerPair: {
            const double b = spec_.beta();
            return power_kernel(2.0 - b + a, t) + power_kernel(2.0 - b, t);
        }
        case KernelKind::MultiTerm: {
            double s = 0.0;
            for (double aj : spec_.alphas()) s += power_kernel(2.0 - aj, t);
            return s;
        }
    }
    return 0.0;
}

bool KernelPair::l_integrable_on_halfline() const {
    // Every pair in the catalog has (1*l)(t) -> infinity.
    return false;
}

double cumulative_l(const KernelPair& pair, double t) {
    if (!(t >= 0.0)) throw DomainError("cumulative_l: t must be nonnegative, got " + num(t));
    return pair.cum_l(t);
}

SonineReport verify_sonine(const KernelPair& pair, std::span<const double> t_samples, double tol) {
    using boost::math::quadrature::gauss_kronrod;
    if (!(tol > 0.0)) throw PreconditionError("verify_sonine: tol must be positive");
    SonineReport rep;
    for (double t : t_samples)
        if (!(t > 0.0)) throw PreconditionError("verify_sonine: sample times must be positive");

    for (double t : t_samples) {
        double dev = 0.0;
        if (pair.has_pointwise_k()) {
            // (k*l)(t) = int_0^{t/2} k(s) l(t-s) ds + int_0^{t/2} l(s) k(t-s) ds; each half is
            // singular only at s = 0, handled in the variable v = ln s, with the
            // piece [0, delta] taken from the running integral of the singular factor.
            const double delta = 1e-14 * t;
            double total = 0.0;
            double err_total = 0.0;
            for (int half = 0; half < 2; ++half) {
                auto f = [&](double s) { return half == 0 ? pair.k(s) : pair.l(s); };
                auto g = [&](double s) { return half == 0 ? pair.l(s) : pair.k(s); };
                auto cum_f = [&](double s) { return half == 0 ? pair.cum_k(s) : pair.cum_l(s); };
                auto integrand = [&](double v) {
                    const double s = std::exp(v);
                    return f(s) * g(t - s) * s;
                };
                double err = 0.0;
                const double lo = std::log(delta), hi = std::log(0.5 * t);
                const double mid = 0.5 * (lo + hi);
                total += gauss_kronrod<double, 61>::integrate(integrand, lo, mid, 15, 1e-13, &err);
                err_total += err;
                total += gauss_kronrod<double, 61>::integrate(integrand, mid, hi, 15, 1e-13, &err);
                err_total += err;
                total += cum_f(delta) * g(t - 0.5 * delta);
            }
            if (!std::isfinite(total) || err_total > 0.1 * tol)
                throw NumericalError("verify_sonine: quadrature did not converge at t=" + num(t), t);
            dev = std::abs(total - 1.0);
        }
        rep.t.push_back(t);
        rep.deviation.push_back(dev);
        rep.max_deviation = std::max(rep.max_deviation, dev);
    }
    rep.pass = rep.max_deviation <= tol;
    return rep;
}

AssociateResult numeric_associate(const SonineSpec& k_spec, const TimeGrid& grid) {
    const KernelPair pair(k_spec);
    if (!pair.has_pointwise_k()) throw DomainError("numeric_associate: k must have pointwise values");
    const auto& t = grid.nodes();
    const int N = grid.n_steps();
    AssociateResult res;
    res.values.assign(N, 0.0);
    res.midpoints.resize(N);
    for (int j = 0; j < N; ++j) res.midpoints[j] = 0.5 * (t[j] + t[j + 1]);

    // Cell weight W(n, j) = K(t_n - t_j) - K(t_n - t_{j+1}), K = 1*k.
    const bool toeplitz = grid.is_uniform();
    std::vector<double> Kt;
    if (toeplitz) {
        Kt.resize(N + 1);
        for (int m = 0; m <= N; ++m) Kt[m] = pair.cum_k(t[m]);
    }
    auto W = [&](int n, int j) {
        if (toeplitz) return Kt[n - j] - Kt[n - j - 1];
        return pair.cum_k(t[n] - t[j]) - (j + 1 == n ? 0.0 : pair.cum_k(t[n] - t[j + 1]));
    };

    for (int n = 1; n <= N; ++n) {
        const double lead = W(n, n - 1);
        if (!(lead > 1e-300) || !std::isfinite(lead))
            throw NumericalError("numeric_associate: ill-conditioned leading weight at t=" + num(t[n]), t[n]);
        long double acc = 0.0L;
        for (int j = 0; j < n - 1; ++j) acc += static_cast<long double>(res.values[j]) * W(n, j);
        res.values[n - 1] = static_cast<double>((1.0L - acc) / lead);
    }
    for (int n = 1; n <= N; ++n) {
        long double acc = 0.0L;
        for (int j = 0; j < n; ++j) acc += static_cast<long double>(res.values[j]) * W(n, j);
        res.residual_max = std::max(res.residual_max, static_cast<double>(std::abs(acc - 1.0L)));
    }
    return res;
}

}  // namespace sonine
