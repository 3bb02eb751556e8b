#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "gielab/errors.hpp"

namespace gielab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Tolerance for hermiticity claims on operators.
inline constexpr double kHermitianTol = 1e-12;
/// Tolerance for state normalization / trace.
inline constexpr double kStateTol = 1e-10;

struct Subsystem {
    std::string label;
    Eigen::Index dim;
};

/// Ordered list of labeled subsystems. The order fixes the tensor-product
/// convention: the first subsystem is the slowest-varying index, so
/// assemble order is factor(0) ⊗ factor(1) ⊗ ... ⊗ factor(last).
class CompositeSpace {
public:
    explicit CompositeSpace(std::vector<Subsystem> subsystems);

    /// Canonical tripartite space: Mass1 (dim 2), Mass2 (dim 2), Field (dim n_cut).
    static CompositeSpace standard(Eigen::Index n_cut);
    /// Two-qubit mass-pair space: Mass1, Mass2.
    static CompositeSpace mass_pair();
    /// Single-subsystem space.
    static CompositeSpace single(std::string label, Eigen::Index dim);

    const std::vector<Subsystem>& subsystems() const { return subsystems_; }
    Eigen::Index count() const { return static_cast<Eigen::Index>(subsystems_.size()); }
    Eigen::Index total_dim() const { return total_dim_; }

    bool has(std::string_view label) const;
    Eigen::Index index_of(std::string_view label) const;  // throws ConfigError on unknown label
    Eigen::Index dim(std::string_view label) const;

    bool operator==(const CompositeSpace& other) const;

private:
    std::vector<Subsystem> subsystems_;
    Eigen::Index total_dim_ = 1;
};

/// Dense complex matrix bound to a CompositeSpace.
class Operator {
public:
    Operator(CompositeSpace space, Matrix matrix, bool hermitian = false);

    const CompositeSpace& space() const { return space_; }
    const Matrix& matrix() const { return matrix_; }
    bool hermitian() const { return hermitian_; }

private:
    CompositeSpace space_;
    Matrix matrix_;
    bool hermitian_;
};

/// Pure state vector or mixed density matrix on a CompositeSpace.
class QuantumState {
public:
    static QuantumState pure(CompositeSpace space, Vector psi);
    static QuantumState mixed(CompositeSpace space, Matrix rho);

    bool is_pure() const { return pure_; }
    const CompositeSpace& space() const { return space_; }

    const Vector& vector() const;       // throws ConfigError if mixed
    const Matrix& density() const;      // throws ConfigError if pure
    Matrix to_density() const;          // |psi><psi| for pure, rho as-is for mixed

    /// Smallest eigenvalue of the density matrix (pure states report 0).
    double min_eigenvalue() const;

private:
    QuantumState(CompositeSpace space, Vector psi);
    QuantumState(CompositeSpace space, Matrix rho);

    CompositeSpace space_;
    bool pure_;
    Vector psi_;
    Matrix rho_;
};

/// Truncated bosonic annihilation matrix: A[m-1, m] = sqrt(m). Rejects n_cut < 2.
Matrix annihilation_matrix(Eigen::Index n_cut);
/// annihilation_matrix wrapped as an Operator on a Field-only space.
Operator annihilation(Eigen::Index n_cut);

/// Qubit branch projector |1><1| (the mass "number operator").
Matrix branch_projector();
/// Normalized Fock state |n> of dimension n_cut.
Vector fock_state(Eigen::Index n_cut, Eigen::Index n);
/// Truncated coherent state of amplitude alpha, renormalized after truncation.
Vector coherent_state(Eigen::Index n_cut, Complex alpha);
/// Single-qubit |+> = (|0> + |1>)/sqrt(2).
Vector plus_state();

/// Tensor product of `factor` on the target subsystem with identities elsewhere.
Operator embed(const Matrix& factor, std::string_view target_label, const CompositeSpace& space);

/// Trace out every subsystem not listed in `keep`. Keeps canonical order of the
/// kept labels. Result is a density matrix even for pure inputs.
QuantumState partial_trace(const QuantumState& state, const std::vector<std::string>& keep);
/// Same, acting directly on a density matrix over `space`.
Matrix partial_trace_matrix(const Matrix& rho, const CompositeSpace& space,
                            const std::vector<std::string>& keep);

/// Unitary evolution exp(-iHt) via Hermitian eigendecomposition (hbar = 1).
QuantumState evolve_unitary(const Operator& hamiltonian, double t, const QuantumState& state);

/// Caches the eigendecomposition of a Hermitian generator so a trajectory of
/// sample times costs one solve plus matrix-vector products.
class HermitianPropagator {
public:
    explicit HermitianPropagator(const Operator& hamiltonian);

    /// exp(-iHt) |psi>
    Vector apply(double t, const Vector& psi) const;
    /// exp(-iHt) rho exp(+iHt)
    Matrix apply_density(double t, const Matrix& rho) const;
    /// Dense exp(-iHt).
    Matrix unitary(double t) const;

    const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }

private:
    Eigen::VectorXd eigenvalues_;
    Matrix eigenvectors_;
};

/// max_ij |M - M†|, the hermiticity defect.
double hermiticity_defect(const Matrix& m);

} // namespace gielab
