#pragma once

#include <span>
#include <string>
#include <vector>

namespace sonine {

enum class OperatorKind { DirichletLaplacian, SpectralFractionalLaplacian, Involution };

// Self-adjoint operator on (0, L) with Dirichlet data, diagonal in the sine
// basis phi_k(x) = sqrt(2/L) sin(k pi x / L), k = 1..N. Nodal values live on
// the interior points x_i = i L / (M + 1), i = 1..M, with M = 4N by default.
class SpectralOperator {
public:
    static SpectralOperator dirichlet_laplacian(double length, int n_modes, int n_nodes = 0);
    // ((k pi / L)^2)^s, s in (0, 1).
    static SpectralOperator fractional_laplacian(double length, double s, int n_modes, int n_nodes = 0);
    // -v'' + eps v''(1 - x) on (0, 1), |eps| < 1.
    static SpectralOperator involution(double epsilon, int n_modes, int n_nodes = 0);

    OperatorKind kind() const { return kind_; }
    double length() const { return length_; }
    double s() const { return s_; }
    double epsilon() const { return eps_; }
    int n_modes() const { return n_modes_; }
    int n_nodes() const { return n_nodes_; }
    std::string describe() const;

    // lambda_k for frequency k = index + 1. Not monotone for the involution
    // operator with eps != 0.
    const std::vector<double>& eigenvalues() const { return lambda_; }
    std::vector<double> sorted_eigenvalues() const;
    // Poincare constant: the smallest eigenvalue.
    double coercivity_constant() const { return c_l_; }

    double eigenfunction(int k, double x) const;
    const std::vector<double>& nodes() const { return x_; }

    // Dense sine transforms between N modal coefficients and M nodal values.
    void modal_to_nodal(std::span<const double> modal, std::span<double> nodal) const;
    void nodal_to_modal(std::span<const double> nodal, std::span<double> modal) const;

private:
    SpectralOperator(OperatorKind kind, double length, int n_modes, int n_nodes);
    void finish();

    OperatorKind kind_;
    double length_;
    double s_ = 1.0;
    double eps_ = 0.0;
    int n_modes_;
    int n_nodes_;
    double c_l_ = 0.0;
    std::vector<double> lambda_;
    std::vector<double> x_;
    std::vector<double> table_;  // table_[i * N + k] = phi_{k+1}(x_i)
};

// A function on the interval in modal and/or nodal form.
struct Field {
    enum class Rep { Modal, Nodal, Both };

    std::vector<double> modal;
    std::vector<double> nodal;
    Rep current = Rep::Modal;

    static Field from_modal(std::vector<double> coeffs);
    static Field from_nodal(std::vector<double> values);
    bool has_modal() const { return current != Rep::Nodal; }
    bool has_nodal() const { return current != Rep::Modal; }
};

Field to_modal(const Field& field, const SpectralOperator& op);
Field to_nodal(const Field& field, const SpectralOperator& op);
Field apply_operator(const SpectralOperator& op, const Field& field);

// L2 norm from the modal coefficients (Parseval).
double l2_norm(const Field& field);
// L2 norm of nodal values by the trapezoid rule with zero boundary values.
double nodal_l2_norm(std::span<const double> nodal, double length);

struct CoercivityReport {
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
};

// sum lambda_k u_k^2 against C_L sum u_k^2.
CoercivityReport coercivity_check(const SpectralOperator& op, const Field& field);

}  // namespace sonine
