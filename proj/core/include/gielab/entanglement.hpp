#pragma once

#include <string>
#include <vector>

#include "gielab/hilbert.hpp"

namespace gielab {

/// Bipartition of a state's subsystems: side_a and side_b must be disjoint and
/// together cover every label of the space.
struct Bipartition {
    std::vector<std::string> side_a;
    std::vector<std::string> side_b;
};

/// Negativity N = (||rho^{T_A}||_1 - 1)/2 over the given cut. Zero iff
/// separable on 2x2 systems, which is exactly the mass-mass cut here.
double negativity(const QuantumState& rho, const Bipartition& cut);

/// Partial transpose over the side_a subsystems.
Matrix partial_transpose(const Matrix& rho, const CompositeSpace& space,
                         const std::vector<std::string>& side_a);

/// von Neumann entropy (base 2) of the reduced state of `side` for a pure
/// input state. Eigenvalues below 1e-14 are skipped.
double entanglement_entropy(const QuantumState& psi, const std::vector<std::string>& side);

/// Wootters concurrence of a two-qubit density matrix.
double concurrence_two_qubit(const Matrix& rho);

/// Total population of the top_k highest Fock levels of the Field marginal.
double fock_tail_population(const QuantumState& state, Eigen::Index top_k);
double fock_tail_population(const Matrix& rho, const CompositeSpace& space, Eigen::Index top_k);

} // namespace gielab
