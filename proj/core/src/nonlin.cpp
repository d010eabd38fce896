#include "sonine/nonlin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sonine/errors.hpp"

namespace sonine {

namespace {

const double kE = std::numbers::e;

double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

}  // namespace

NonlinearSource NonlinearSource::fisher_kpp() { return {SourceKind::FisherKPP, "FisherKPP"}; }

NonlinearSource NonlinearSource::power_fisher(double p, double q) {
    if (!(p > 1.0) || !(q > 1.0)) throw DomainError("power_fisher: need p > 1 and q > 1");
    NonlinearSource s(SourceKind::PowerFisher, "PowerFisher");
    s.p_ = p;
    s.q_ = q;
    return s;
}

NonlinearSource NonlinearSource::logarithmic() { return {SourceKind::Logarithmic, "Logarithmic"}; }
NonlinearSource NonlinearSource::exp_exp() { return {SourceKind::ExpExp, "ExpExp"}; }
NonlinearSource NonlinearSource::exp_shift() { return {SourceKind::ExpShift, "ExpShift"}; }
NonlinearSource NonlinearSource::sinh_shift() { return {SourceKind::SinhShift, "SinhShift"}; }
NonlinearSource NonlinearSource::tanh_shift() { return {SourceKind::TanhShift, "TanhShift"}; }

NonlinearSource NonlinearSource::custom(std::string name, std::function<double(double)> f,
                                        std::function<double(double)> df) {
    if (!f) throw PreconditionError("custom source: callable required");
    NonlinearSource s(SourceKind::Custom, std::move(name));
    s.f_ = std::move(f);
    s.df_ = std::move(df);
    return s;
}

NonlinearSource NonlinearSource::zero() {
    return custom("Zero", [](double) { return 0.0; }, [](double) { return 0.0; });
}

std::string NonlinearSource::describe() const {
    if (kind_ == SourceKind::PowerFisher) return name_ + "(" + num(p_) + "," + num(q_) + ")";
    return name_;
}

double NonlinearSource::raw(double v) const {
    switch (kind_) {
        case SourceKind::FisherKPP: return v * (v - 1.0);
        case SourceKind::PowerFisher: {
            const double a = std::abs(v);
            return std::pow(a, q_ - 1.0) * v * (std::pow(a, p_ - 1.0) * v - 1.0);
        }
        case SourceKind::Logarithmic: return v * (v - 1.0) * std::log1p(std::abs(v));
        case SourceKind::ExpExp: return std::expm1(v) * (std::exp(v) - kE);
        case SourceKind::ExpShift: return v * std::expm1(v - 1.0);
        case SourceKind::SinhShift: return (v - 1.0) * std::sinh(v);
        case SourceKind::TanhShift: return v * std::tanh(v - 1.0);
        case SourceKind::Custom: return f_(v);
    }
    return 0.0;
}

double NonlinearSource::derivative(double v) const {
    switch (kind_) {
        case SourceKind::FisherKPP: return 2.0 * v - 1.0;
        case SourceKind::PowerFisher: {
            const double a = std::abs(v);
            if (a == 0.0) return 0.0;
            return (p_ + q_) * std::pow(a, p_ + q_ - 1.0) * sgn(v) - q_ * std::pow(a, q_ - 1.0);
        }
        case SourceKind::Logarithmic:
            return (2.0 * v - 1.0) * std::log1p(std::abs(v)) + v * (v - 1.0) * sgn(v) / (1.0 + std::abs(v));
        case SourceKind::ExpExp: {
            const double e = std::exp(v);
            return e * (2.0 * e - kE - 1.0);
        }
        case SourceKind::ExpShift: {
            const double e = std::exp(v - 1.0);
            return e - 1.0 + v * e;
        }
        case SourceKind::SinhShift: return std::sinh(v) + (v - 1.0) * std::cosh(v);
        case SourceKind::TanhShift: {
            const double c = std::cosh(v - 1.0);
            return std::tanh(v - 1.0) + v / (c * c);
        }
        case SourceKind::Custom: {
            if (df_) return df_(v);
            const double h = 1e-6 * (1.0 + std::abs(v));
            return (f_(v + h) - f_(v - h)) / (2.0 * h);
        }
    }
    return 0.0;
}

double eval_f(const NonlinearSource& source, double y) {
    const double v = source.raw(y);
    if (!std::isfinite(v)) throw RangeError("eval_f: " + source.describe() + " overflows at y=" + num(y));
    return v;
}

HypothesisReport check_hypothesis_C(const NonlinearSource& source, int n_samples, double y_min, double y_max) {
    if (n_samples < 100) throw PreconditionError("check_hypothesis_C: need at least 100 samples");
    if (!(y_min <= -2.0 && y_max >= 3.0)) throw PreconditionError("check_hypothesis_C: range must cover [-2, 3]");
    HypothesisReport r;
    r.zero_at_zero = std::abs(source.raw(0.0)) <= 1e-12;
    r.zero_at_one = std::abs(source.raw(1.0)) <= 1e-12;
    r.negative_inside = true;
    r.positive_outside = true;
    r.locally_lipschitz = true;
    const double h = (y_max - y_min) / (n_samples - 1);
    double prev_y = y_min;
    double prev_f = source.raw(y_min);
    for (int i = 0; i < n_samples; ++i) {
        const double y = y_min + i * h;
        const double f = source.raw(y);
        if (y > 0.0 && y < 1.0 && !(f < 0.0)) r.negative_inside = false;
        if ((y < 0.0 || y > 1.0) && !(f > 0.0)) r.positive_outside = false;
        if (i > 0) {
            const double dq = std::abs(f - prev_f) / (y - prev_y);
            if (!std::isfinite(dq)) r.locally_lipschitz = false;
            else r.max_difference_quotient = std::max(r.max_difference_quotient, dq);
        }
        prev_y = y;
        prev_f = f;
    }
    if (r.max_difference_quotient > 1e12) r.locally_lipschitz = false;
    return r;
}

ConvexityReport convexity_check(const NonlinearSource& source, double y_max, int n_samples) {
    if (!(y_max >= 3.0)) throw PreconditionError("convexity_check: y_max must be at least 3");
    if (n_samples < 3) throw PreconditionError("convexity_check: need at least 3 samples");
    ConvexityReport r;
    r.min_second_difference = std::numeric_limits<double>::infinity();
    const double h = y_max / (n_samples - 1);
    for (int i = 1; i + 1 < n_samples; ++i) {
        const double y = i * h;
        const double d2 = source.raw(y + h) - 2.0 * source.raw(y) + source.raw(y - h);
        if (d2 < r.min_second_difference || std::isnan(d2)) {
            r.min_second_difference = d2;
            r.worst_y = y;
        }
    }
    r.pass = r.min_second_difference >= -1e-8;
    return r;
}

OsgoodReport osgood_tail(const NonlinearSource& source, double m, double y_max) {
    using boost::math::quadrature::gauss_kronrod;
    if (!(m > 1.0)) throw PreconditionError("osgood_tail: m must exceed 1");
    if (!(y_max > m)) throw PreconditionError("osgood_tail: y_max must exceed m");
    OsgoodReport r;
    double lo = m;
    double last = 0.0;
    while (lo < y_max) {
        const double hi = std::min(2.0 * lo, y_max);
        for (int i = 0; i <= 16; ++i) {
            const double y = lo + (hi - lo) * i / 16.0;
            if (!(source.raw(y) > 0.0))
                throw PreconditionError("osgood_tail: f <= 0 at y=" + num(y));
        }
        auto integrand = [&](double s) {
            const double y = std::exp(s);
            return y / source.raw(y);
        };
        double err = 0.0;
        last = gauss_kronrod<double, 31>::integrate(integrand, std::log(lo), std::log(hi), 10, 1e-12, &err);
        r.integral_estimate += last;
        lo = hi;
    }
    r.converged = std::abs(last) < 1e-6;
    return r;
}

}  // namespace sonine
