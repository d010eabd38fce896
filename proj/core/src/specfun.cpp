#include "sonine/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sonine/errors.hpp"

namespace sonine::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kPi = std::numbers::pi;

bool is_pole(double x) { return x <= 0.0 && x == std::floor(x); }

// log|Gamma(x)| and its sign; x must not be a pole.
double log_abs_gamma(double x, int* sign) {
    int s = 1;
    double v = ::lgamma_r(x, &s);
    *sign = s;
    return v;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

struct Partial {
    bool ok;
    double value;
    double err;
};

// Power series; gives up (ok = false) once a term exceeds max_term.
Partial ml_series(double a, double b, double z, double max_term, int kmax) {
    if (z == 0.0) return {true, rgamma(b), kEps * std::abs(rgamma(b))};
    const double lz = std::log(std::abs(z));
    const double log_limit = std::log(max_term);
    long double sum = 0.0L;
    double maxmag = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    int quiet = 0;
    for (int k = 0; k < kmax; ++k) {
        const double x = a * k + b;
        if (is_pole(x)) continue;
        int sg = 1;
        const double lmag = k * lz - log_abs_gamma(x, &sg);
        if (lmag > log_limit) return {false, 0.0, 0.0};
        const double mag = std::exp(lmag);
        const double sz = (z < 0.0 && (k & 1)) ? -1.0 : 1.0;
        sum += static_cast<long double>(sz * sg * mag);
        maxmag = std::max(maxmag, mag);
        const bool falling = mag < prev && x > 1.0;
        prev = mag;
        if (falling && (mag <= 1e-17 * std::abs(static_cast<double>(sum)) || mag <= 1e-19 * maxmag)) {
            if (++quiet >= 3) {
                const double v = static_cast<double>(sum);
                return {true, v, 4.0 * kEps * maxmag * std::sqrt(k + 1.0) + mag};
            }
        } else {
            quiet = 0;
        }
    }
    return {false, 0.0, 0.0};
}

// -sum_{k>=1} z^{-k}/Gamma(b - a k), z < 0, truncated where the envelope
// |z|^{-k} Gamma(1 - b + a k)/pi stops decreasing.
Partial ml_asymptotic(double a, double b, double z) {
    const double lz = std::log(-z);
    double sum = 0.0;
    double prev_env = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 400; ++k) {
        const double x = b - a * k;
        int sg = 1;
        const double env = x >= 0.5 ? std::exp(-k * lz) * std::abs(rgamma(x))
                                    : std::exp(-k * lz + log_abs_gamma(1.0 - x, &sg)) / kPi;
        if (env >= prev_env) return {true, sum, env};
        if (env <= 1e-18 * std::abs(sum)) return {true, sum, env};
        const double zk = (k & 1) ? -1.0 : 1.0;
        sum += -zk * std::exp(-k * lz) * rgamma(x);
        prev_env = env;
    }
    return {true, sum, prev_env};
}

// Contour-integral representation for z < 0, 0 < a < 1; the contour is a
// circle arc of radius eps < |z| joined to two rays at arg = +-a*pi.
Partial ml_integral(double a, double b, double z) {
    using boost::math::quadrature::gauss_kronrod;
    const double az = std::abs(z);
    const double eps = az >= 2.0 ? 1.0 : 0.5 * az;
    const double p = (1.0 - b) / a;
    const double s1 = std::sin(kPi * (1.0 - b));
    const double s2 = std::sin(kPi * (1.0 - b + a));
    const double ca = std::cos(a * kPi);

    auto K = [&](double chi) {
        const double den = chi * chi - 2.0 * chi * z * ca + z * z;
        return std::pow(chi, p) * std::exp(-std::pow(chi, 1.0 / a)) * (chi * s1 - z * s2) / den / (a * kPi);
    };
    const double e1a = std::pow(eps, 1.0 / a);
    const double pref = std::pow(eps, 1.0 + p) / (2.0 * a * kPi);
    auto P = [&](double phi) {
        const double w = e1a * std::sin(phi / a) + phi * (1.0 + p);
        const std::complex<double> num(std::cos(w), std::sin(w));
        const std::complex<double> den(eps * std::cos(phi) - z, eps * std::sin(phi));
        return pref * std::exp(e1a * std::cos(phi / a)) * (num / den).real();
    };

    const double chi_max = std::pow(80.0 + 4.0 * std::max(p * a, 0.0), a);
    double cuts[4] = {eps, std::max(eps, std::min(1.0, chi_max)), std::clamp(az, eps, chi_max), chi_max};
    std::sort(cuts, cuts + 4);
    double total = 0.0;
    double err_total = 0.0;
    for (int i = 0; i < 3; ++i) {
        if (cuts[i + 1] <= cuts[i]) continue;
        double err = 0.0;
        total += gauss_kronrod<double, 61>::integrate(K, cuts[i], cuts[i + 1], 15, 1e-12, &err);
        err_total += err;
    }
    double err = 0.0;
    total += gauss_kronrod<double, 61>::integrate(P, -a * kPi, 0.0, 15, 1e-12, &err);
    err_total += err;
    total += gauss_kronrod<double, 61>::integrate(P, 0.0, a * kPi, 15, 1e-12, &err);
    err_total += err;
    if (!std::isfinite(total)) return {false, 0.0, 0.0};
    return {true, total, err_total + 64.0 * kEps * (1.0 + std::abs(total))};
}

[[noreturn]] void ml_out_of_range(double a, double b, double z) {
    throw RangeError("mittag_leffler: (alpha=" + fmt(a) + ", beta=" + fmt(b) + ", z=" + fmt(z) +
                     ") outside the covered range");
}

EvalResult ml_negative(double a, double b, double z) {
    Partial s = ml_series(a, b, z, 1e3, 20000);
    if (s.ok) return {s.value, s.err};

    if (a == 1.0) {
        if (b >= 1.0 && b == std::floor(b) && b <= 50.0) {
            // E_{1,1} = e^z, E_{1,m+1} = (E_{1,m} - 1/Gamma(m)) / z
            double e = std::exp(z);
            for (int m = 1; m < static_cast<int>(b); ++m) e = (e - rgamma(m)) / z;
            return {e, 16.0 * kEps * (1.0 + std::abs(e))};
        }
        const double expo = std::exp(z) * std::pow(-z, std::abs(1.0 - b));
        Partial as = ml_asymptotic(a, b, z);
        if (expo < 1e-16 && as.err < 1e-14) return {as.value, as.err + expo};
        ml_out_of_range(a, b, z);
    }
    if (a == 2.0 && (b == 1.0 || b == 2.0)) {
        const double r = std::sqrt(-z);
        const double v = b == 1.0 ? std::cos(r) : std::sin(r) / r;
        return {v, 4.0 * kEps * (1.0 + r)};
    }
    if (a > 1.0 || a < 0.05) ml_out_of_range(a, b, z);

    Partial as = ml_asymptotic(a, b, z);
    if (as.err < 1e-14) return {as.value, as.err};
    Partial in = ml_integral(a, b, z);
    if (in.ok) return {in.value, in.err};
    ml_out_of_range(a, b, z);
}

// Ascending series sum_m s^m (y/2)^{2m+nu} / (m! Gamma(m+nu+1)), s = -1 for J, +1 for I.
EvalResult bessel_series(double nu, double y, int s) {
    const long double h = 0.5L * y;
    long double term = std::pow(h, static_cast<long double>(nu)) / std::tgamma(static_cast<long double>(nu) + 1.0L);
    long double sum = term;
    long double maxmag = std::abs(term);
    const long double h2 = h * h;
    for (int m = 1; m < 2000; ++m) {
        term *= s * h2 / (static_cast<long double>(m) * (m + nu));
        sum += term;
        maxmag = std::max(maxmag, std::abs(term));
        if (m > h && std::abs(term) <= 1e-21L * std::abs(sum)) break;
    }
    const double err = static_cast<double>(maxmag * 8.0L * std::numeric_limits<long double>::epsilon() +
                                           std::abs(term));
    return {static_cast<double>(sum), err};
}

// Hankel expansion of J_nu for large y.
EvalResult bessel_j_hankel(double nu, double y) {
    const double mu = 4.0 * nu * nu;
    double P = 0.0, Q = 0.0;
    double a = 1.0;
    double prev = std::numeric_limits<double>::infinity();
    double last = 0.0;
    for (int k = 0; k < 200; ++k) {
        const double mag = std::abs(a);
        if (k > 0 && (mag > prev || mag < 1e-17)) {
            last = mag;
            break;
        }
        const int r = k % 4;
        if (r == 0) P += a;
        if (r == 1) Q += a;
        if (r == 2) P -= a;
        if (r == 3) Q -= a;
        prev = mag;
        last = mag;
        const double odd = 2.0 * k + 1.0;
        a *= (mu - odd * odd) / ((k + 1.0) * 8.0 * y);
    }
    const double chi = y - (0.5 * nu + 0.25) * kPi;
    const double amp = std::sqrt(2.0 / (kPi * y));
    const double v = amp * (P * std::cos(chi) - Q * std::sin(chi));
    return {v, amp * (last + 8.0 * kEps * (std::abs(P) + std::abs(Q)) * (1.0 + y * kEps * 8.0))};
}

void check_bessel_order(const char* name, double nu, double y) {
    if (!(nu > -1.0)) throw DomainError(std::string(name) + ": order nu=" + fmt(nu) + " must exceed -1");
    if (!(y >= 0.0)) throw DomainError(std::string(name) + ": argument must be nonnegative");
    if (nu > 10.0) throw RangeError(std::string(name) + ": order nu=" + fmt(nu) + " above 10 not covered");
}

// Continued fraction for e^t E1(t), t > 1 (modified Lentz).
double e1_scaled_cf(double t) {
    const double tiny = 1e-300;
    double b = t + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        const double del = c * d;
        h *= del;
        if (std::abs(del - 1.0) <= 1e-16) return h;
    }
    throw NumericalError("exp_integral_e1: continued fraction did not converge", t);
}

// E1(t) for 0 < t <= 1.
double e1_series(double t) {
    double sum = 0.0;
    double fact = 1.0;
    for (int k = 1; k < 100; ++k) {
        fact *= -t / k;
        const double del = -fact / k;
        sum += del;
        if (std::abs(del) < 1e-18 * std::abs(sum)) break;
    }
    return -euler_gamma - std::log(t) + sum;
}

}  // namespace

double gamma(double x) { return gamma_eval(x).value; }

EvalResult gamma_eval(double x) {
    if (std::isnan(x)) throw DomainError("gamma: NaN argument");
    if (is_pole(x)) throw DomainError("gamma: pole at x=" + fmt(x));
    const double v = std::tgamma(x);
    if (!std::isfinite(v)) throw RangeError("gamma: overflow at x=" + fmt(x));
    return {v, 4.0 * kEps * std::abs(v)};
}

double rgamma(double x) {
    if (is_pole(x)) return 0.0;
    if (x > 171.0) return 0.0;
    if (x > 0.5) return 1.0 / std::tgamma(x);
    if (x > -170.0) return std::tgamma(1.0 - x) * std::sin(kPi * x) / kPi;
    int sg = 1;
    const double lg = log_abs_gamma(x, &sg);
    return sg * std::exp(-lg);
}

double mittag_leffler(double alpha, double beta, double z) { return mittag_leffler_eval(alpha, beta, z).value; }

EvalResult mittag_leffler_eval(double alpha, double beta, double z) {
    if (!(alpha > 0.0) || alpha > 2.0 || !std::isfinite(beta) || !std::isfinite(z))
        ml_out_of_range(alpha, beta, z);
    if (z == 0.0) return {rgamma(beta), 0.0};
    if (z > 0.0) {
        Partial s = ml_series(alpha, beta, z, 1e300, 200000);
        if (!s.ok) ml_out_of_range(alpha, beta, z);
        const double rel = s.err / std::max(std::abs(s.value), 1e-300);
        return {s.value, std::max(s.err, rel * std::abs(s.value))};
    }
    return ml_negative(alpha, beta, z);
}

double bessel_j(double nu, double y) { return bessel_j_eval(nu, y).value; }

EvalResult bessel_j_eval(double nu, double y) {
    check_bessel_order("bessel_j", nu, y);
    if (y > 1000.0) throw RangeError("bessel_j: argument above 1000 not covered");
    if (y == 0.0) {
        if (nu == 0.0) return {1.0, 0.0};
        if (nu > 0.0) return {0.0, 0.0};
        throw RangeError("bessel_j: J_nu(0) is infinite for nu < 0");
    }
    if (y <= 20.0) return bessel_series(nu, y, -1);
    return bessel_j_hankel(nu, y);
}

double bessel_i(double nu, double y) { return bessel_i_eval(nu, y).value; }

EvalResult bessel_i_eval(double nu, double y) {
    check_bessel_order("bessel_i", nu, y);
    if (y > 500.0) throw RangeError("bessel_i: argument above 500 not covered");
    if (y == 0.0) {
        if (nu == 0.0) return {1.0, 0.0};
        if (nu > 0.0) return {0.0, 0.0};
        throw RangeError("bessel_i: I_nu(0) is infinite for nu < 0");
    }
    return bessel_series(nu, y, 1);
}

double exp_integral_e1(double t) { return exp_integral_e1_eval(t).value; }

EvalResult exp_integral_e1_eval(double t) {
    if (!(t > 0.0)) throw DomainError("exp_integral_e1: t must be positive");
    const double v = t <= 1.0 ? e1_series(t) : std::exp(-t) * e1_scaled_cf(t);
    return {v, 8.0 * kEps * std::abs(v)};
}

double exp_integral_e1_scaled(double t) {
    if (!(t > 0.0)) throw DomainError("exp_integral_e1_scaled: t must be positive");
    return t <= 1.0 ? std::exp(t) * e1_series(t) : e1_scaled_cf(t);
}

}  // namespace sonine::specfun
