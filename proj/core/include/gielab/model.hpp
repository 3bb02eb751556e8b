#pragma once

#include <map>
#include <string>
#include <vector>

#include "gielab/hilbert.hpp"

namespace gielab {

/// Single-mode model parameters (hbar = 1 units). omega is the mode frequency,
/// lambda the mass-field coupling, n_cut the Fock truncation.
struct ModelParams {
    double omega = 1.0;
    double lambda = 0.5;
    Eigen::Index n_cut = 32;

    void validate() const;
};

enum class Provenance {
    Local,
    Diagonalized,
    ClassicalizedLocal,
    ClassicalizedNonlocal,
    Custom,
};

std::string to_string(Provenance p);

/// coefficient * (tensor product of per-subsystem factors); subsystems absent
/// from the map carry the identity.
struct HamiltonianTerm {
    double coefficient = 0.0;
    std::map<std::string, Matrix> factors;

    /// Labels whose factor is not (a multiple-free) identity.
    std::vector<std::string> support() const;
};

/// A Hamiltonian as a list of labeled-support terms. The term structure, not
/// the assembled matrix, is what the locality audit inspects.
struct HamiltonianSpec {
    CompositeSpace space;
    std::vector<HamiltonianTerm> terms;
    Provenance provenance = Provenance::Custom;

    /// Dense assembled operator; checked Hermitian to 1e-12.
    Operator assemble() const;

    /// JSON serialization of the term list (labels, coefficients, dense factors).
    std::string serialize() const;
    static HamiltonianSpec deserialize(const std::string& text);
};

/// H = omega a†a + lambda n1 (a+a†) + lambda n2 (a+a†), with the mass number
/// operators realized as the qubit branch projectors |1><1|.
HamiltonianSpec build_local_hamiltonian(const ModelParams& p);

/// The same model after the conditional displacement: omega a†a plus the exact
/// completed square -(lambda²/omega)(n1+n2)², expanded with n_i² = n_i into
/// self-energies -(lambda²/omega) n_i and the cross term -(2 lambda²/omega) n1 n2.
HamiltonianSpec build_diagonalized_hamiltonian(const ModelParams& p);

/// D = exp[(lambda/omega)(n1+n2)(a† - a)]: D† a D = a + (lambda/omega)(n1+n2).
Operator displacement_unitary(const ModelParams& p);

struct DiagonalizationReport {
    double max_deviation = 0.0;
    Eigen::Index edge_excluded = 0;
};

/// Checks the operator identity D H_local D† = H_diagonalized entrywise.
/// The truncation corner defect, conjugated by a displacement of amplitude
/// beta = 2 lambda/omega, contaminates roughly (2 beta + 1) sqrt(n_cut) levels
/// below the cutoff, so that many edge rows/columns are excluded from the
/// comparison; the count is returned as edge_excluded.
DiagonalizationReport verify_diagonalization(const ModelParams& p);

struct ClassicalizedHamiltonian {
    HamiltonianSpec mass_spec;  // on {Mass1, Mass2}
    double scalar = 0.0;        // pure c-number part, e.g. omega |alpha|²
};

/// Replace a -> alpha, a† -> alpha* in every Field factor. Recognized Field
/// factors: identity, a, a†, a+a†, a†a. Anything else is rejected.
ClassicalizedHamiltonian classicalize(const HamiltonianSpec& spec, Complex alpha);

} // namespace gielab
