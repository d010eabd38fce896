#pragma once

#include <functional>
#include <string>

namespace sonine {

enum class SourceKind { FisherKPP, PowerFisher, Logarithmic, ExpExp, ExpShift, SinhShift, TanhShift, Custom };

// Reaction term f(u). Catalog variants vanish exactly at 0 and 1.
class NonlinearSource {
public:
    static NonlinearSource fisher_kpp();
    // p > 1, q > 1.
    static NonlinearSource power_fisher(double p, double q);
    static NonlinearSource logarithmic();
    static NonlinearSource exp_exp();
    static NonlinearSource exp_shift();
    static NonlinearSource sinh_shift();
    static NonlinearSource tanh_shift();
    // A missing derivative is replaced by a central difference.
    static NonlinearSource custom(std::string name, std::function<double(double)> f,
                                  std::function<double(double)> df = {});
    // f = 0; used for linear runs.
    static NonlinearSource zero();

    SourceKind kind() const { return kind_; }
    double p() const { return p_; }
    double q() const { return q_; }
    const std::string& name() const { return name_; }
    std::string describe() const;

    // Formula value without overflow checks (may return +-inf).
    double raw(double y) const;
    double derivative(double y) const;

private:
    NonlinearSource(SourceKind kind, std::string name) : kind_(kind), name_(std::move(name)) {}

    SourceKind kind_;
    std::string name_;
    double p_ = 0.0;
    double q_ = 0.0;
    std::function<double(double)> f_;
    std::function<double(double)> df_;
};

// f(y); RangeError if the value overflows.
double eval_f(const NonlinearSource& source, double y);

struct HypothesisReport {
    bool zero_at_zero = false;
    bool zero_at_one = false;
    bool negative_inside = false;   // f < 0 on (0, 1)
    bool positive_outside = false;  // f > 0 for y < 0 and y > 1
    bool locally_lipschitz = false;
    double max_difference_quotient = 0.0;
    bool pass() const { return zero_at_zero && zero_at_one && negative_inside && positive_outside && locally_lipschitz; }
};

// Sampled check of the sign pattern and local Lipschitz continuity.
// Requires [y_min, y_max] to contain [-2, 3] and n_samples >= 100.
HypothesisReport check_hypothesis_C(const NonlinearSource& source, int n_samples, double y_min, double y_max);

struct ConvexityReport {
    double min_second_difference = 0.0;
    double worst_y = 0.0;
    bool pass = false;
};

// Central second differences on [0, y_max]; y_max >= 3.
ConvexityReport convexity_check(const NonlinearSource& source, double y_max, int n_samples);

struct OsgoodReport {
    double integral_estimate = 0.0;
    bool converged = false;
};

// int_m^{y_max} dy / f(y) over doubling upper limits; converged when the last
// extension adds less than 1e-6. PreconditionError if f <= 0 is met.
OsgoodReport osgood_tail(const NonlinearSource& source, double m, double y_max);

}  // namespace sonine
