#pragma once

namespace sonine::specfun {

struct EvalResult {
    double value;
    double est_abs_error;
};

inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;

// Gamma function. Poles (0, -1, -2, ...) raise DomainError.
double gamma(double x);
EvalResult gamma_eval(double x);

// 1/Gamma(x); zero at the poles.
double rgamma(double x);

// Two-parameter Mittag-Leffler function E_{a,b}(z) = sum z^k / Gamma(a k + b).
//
// Covered: alpha in (0, 2]. For z >= 0 the power series (RangeError on
// overflow). For z < 0: series where it does not cancel, otherwise the
// asymptotic expansion or the contour-integral representation for
// alpha in [0.05, 1); alpha = 1 uses closed forms for integer beta >= 1;
// alpha = 2 uses cos/sin for beta in {1, 2}. Anything else raises RangeError.
double mittag_leffler(double alpha, double beta, double z);
EvalResult mittag_leffler_eval(double alpha, double beta, double z);

// Bessel functions of the first kind. nu in (-1, 10]; J: y in [0, 1000],
// I: y in [0, 500]. J_nu(0) for nu < 0 is infinite and raises RangeError.
double bessel_j(double nu, double y);
EvalResult bessel_j_eval(double nu, double y);
double bessel_i(double nu, double y);
EvalResult bessel_i_eval(double nu, double y);

// Exponential integral E1(t) = int_t^inf e^{-u}/u du, t > 0.
double exp_integral_e1(double t);
EvalResult exp_integral_e1_eval(double t);
// e^t E1(t), finite for all t > 0.
double exp_integral_e1_scaled(double t);

}  // namespace sonine::specfun
