#include "sonine/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "sonine/errors.hpp"

namespace sonine {

namespace {

constexpr double kPi = std::numbers::pi;

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

}  // namespace

SpectralOperator::SpectralOperator(OperatorKind kind, double length, int n_modes, int n_nodes)
    : kind_(kind), length_(length), n_modes_(n_modes), n_nodes_(n_nodes > 0 ? n_nodes : 4 * n_modes) {
    if (!(length > 0.0) || !std::isfinite(length)) throw DomainError("operator: length must be positive");
    if (n_modes < 1) throw DomainError("operator: at least one mode required");
    if (n_nodes_ < n_modes_) throw DomainError("operator: need at least as many nodes as modes");
}

SpectralOperator SpectralOperator::dirichlet_laplacian(double length, int n_modes, int n_nodes) {
    SpectralOperator op(OperatorKind::DirichletLaplacian, length, n_modes, n_nodes);
    op.finish();
    return op;
}

SpectralOperator SpectralOperator::fractional_laplacian(double length, double s, int n_modes, int n_nodes) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("fractional_laplacian: s=" + num(s) + " not in (0,1)");
    SpectralOperator op(OperatorKind::SpectralFractionalLaplacian, length, n_modes, n_nodes);
    op.s_ = s;
    op.finish();
    return op;
}

SpectralOperator SpectralOperator::involution(double epsilon, int n_modes, int n_nodes) {
    if (!(std::abs(epsilon) < 1.0)) throw DomainError("involution: |epsilon| must be below 1, got " + num(epsilon));
    SpectralOperator op(OperatorKind::Involution, 1.0, n_modes, n_nodes);
    op.eps_ = epsilon;
    op.finish();
    return op;
}

void SpectralOperator::finish() {
    lambda_.resize(n_modes_);
    for (int k = 1; k <= n_modes_; ++k) {
        const double w = k * kPi / length_;
        double lam = w * w;
        if (kind_ == OperatorKind::SpectralFractionalLaplacian) lam = std::pow(lam, s_);
        if (kind_ == OperatorKind::Involution) lam *= 1.0 + eps_ * ((k & 1) ? -1.0 : 1.0);
        lambda_[k - 1] = lam;
    }
    c_l_ = *std::min_element(lambda_.begin(), lambda_.end());

    const int M = n_nodes_, N = n_modes_;
    x_.resize(M);
    table_.resize(static_cast<std::size_t>(M) * N);
    const double amp = std::sqrt(2.0 / length_);
    for (int i = 0; i < M; ++i) {
        x_[i] = (i + 1) * length_ / (M + 1);
        for (int k = 0; k < N; ++k) {
            // sin(k pi i / (M+1)) from the integer phase keeps the table exactly odd-symmetric.
            const long phase = static_cast<long>(k + 1) * (i + 1) % (2L * (M + 1));
            table_[static_cast<std::size_t>(i) * N + k] = amp * std::sin(kPi * phase / (M + 1));
        }
    }
}

std::string SpectralOperator::describe() const {
    switch (kind_) {
        case OperatorKind::DirichletLaplacian: return "DirichletLaplacian(" + num(length_) + ")";
        case OperatorKind::SpectralFractionalLaplacian: return "FractionalLaplacian(" + num(length_) + "," + num(s_) + ")";
        case OperatorKind::Involution: return "Involution(" + num(eps_) + ")";
    }
    return "?";
}

std::vector<double> SpectralOperator::sorted_eigenvalues() const {
    std::vector<double> v = lambda_;
    std::sort(v.begin(), v.end());
    return v;
}

double SpectralOperator::eigenfunction(int k, double x) const {
    if (k < 1) throw DomainError("eigenfunction: index starts at 1");
    return std::sqrt(2.0 / length_) * std::sin(k * kPi * x / length_);
}

void SpectralOperator::modal_to_nodal(std::span<const double> modal, std::span<double> nodal) const {
    if (static_cast<int>(modal.size()) != n_modes_ || static_cast<int>(nodal.size()) != n_nodes_)
        throw ShapeError("modal_to_nodal: size mismatch");
    const int N = n_modes_;
    for (int i = 0; i < n_nodes_; ++i) {
        const double* row = &table_[static_cast<std::size_t>(i) * N];
        double s = 0.0;
        for (int k = 0; k < N; ++k) s += row[k] * modal[k];
        nodal[i] = s;
    }
}

void SpectralOperator::nodal_to_modal(std::span<const double> nodal, std::span<double> modal) const {
    if (static_cast<int>(modal.size()) != n_modes_ || static_cast<int>(nodal.size()) != n_nodes_)
        throw ShapeError("nodal_to_modal: size mismatch");
    const int N = n_modes_;
    std::fill(modal.begin(), modal.end(), 0.0);
    for (int i = 0; i < n_nodes_; ++i) {
        const double* row = &table_[static_cast<std::size_t>(i) * N];
        const double u = nodal[i];
        for (int k = 0; k < N; ++k) modal[k] += row[k] * u;
    }
    const double w = length_ / (n_nodes_ + 1);
    for (double& a : modal) a *= w;
}

Field Field::from_modal(std::vector<double> coeffs) {
    Field f;
    f.modal = std::move(coeffs);
    f.current = Rep::Modal;
    return f;
}

Field Field::from_nodal(std::vector<double> values) {
    Field f;
    f.nodal = std::move(values);
    f.current = Rep::Nodal;
    return f;
}

Field to_modal(const Field& field, const SpectralOperator& op) {
    if (field.has_modal()) {
        if (static_cast<int>(field.modal.size()) != op.n_modes()) throw ShapeError("to_modal: mode count mismatch");
        return field;
    }
    Field out = field;
    out.modal.assign(op.n_modes(), 0.0);
    op.nodal_to_modal(field.nodal, out.modal);
    out.current = Field::Rep::Both;
    return out;
}

Field to_nodal(const Field& field, const SpectralOperator& op) {
    if (field.has_nodal()) {
        if (static_cast<int>(field.nodal.size()) != op.n_nodes()) throw ShapeError("to_nodal: node count mismatch");
        return field;
    }
    Field out = field;
    out.nodal.assign(op.n_nodes(), 0.0);
    op.modal_to_nodal(field.modal, out.nodal);
    out.current = Field::Rep::Both;
    return out;
}

Field apply_operator(const SpectralOperator& op, const Field& field) {
    if (!field.has_modal()) throw ShapeError("apply_operator: field needs a modal representation");
    if (static_cast<int>(field.modal.size()) != op.n_modes()) throw ShapeError("apply_operator: mode count mismatch");
    std::vector<double> a = field.modal;
    for (std::size_t k = 0; k < a.size(); ++k) a[k] *= op.eigenvalues()[k];
    return Field::from_modal(std::move(a));
}

double l2_norm(const Field& field) {
    if (!field.has_modal()) throw ShapeError("l2_norm: field needs a modal representation");
    double s = 0.0;
    for (double a : field.modal) s += a * a;
    return std::sqrt(s);
}

double nodal_l2_norm(std::span<const double> nodal, double length) {
    double s = 0.0;
    for (double u : nodal) s += u * u;
    return std::sqrt(s * length / (nodal.size() + 1));
}

CoercivityReport coercivity_check(const SpectralOperator& op, const Field& field) {
    if (!field.has_modal()) throw ShapeError("coercivity_check: field needs a modal representation");
    if (static_cast<int>(field.modal.size()) != op.n_modes()) throw ShapeError("coercivity_check: mode count mismatch");
    CoercivityReport r;
    double sq = 0.0;
    for (std::size_t k = 0; k < field.modal.size(); ++k) {
        const double a2 = field.modal[k] * field.modal[k];
        r.lhs += op.eigenvalues()[k] * a2;
        sq += a2;
    }
    if (sq == 0.0) throw PreconditionError("coercivity_check: zero field");
    r.rhs = op.coercivity_constant() * sq;
    r.pass = r.lhs >= r.rhs * (1.0 - 1e-12);
    return r;
}

}  // namespace sonine
