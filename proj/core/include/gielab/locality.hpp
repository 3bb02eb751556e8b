#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gielab/model.hpp"

namespace gielab {

/// Syntactic verdict on a Hamiltonian's interaction structure. The audit reads
/// term supports only: the GIE no-direct-interaction rule forbids any term
/// acting on both masses, whatever else the term touches.
enum class LocalityVerdict {
    MediatedLocal,  ///< no joint-mass term; each mass couples to the mediator
    DirectCoupled,  ///< some term's support contains both masses
    Decoupled,      ///< no joint-mass term and no mediated coupling of both masses
};

std::string to_string(LocalityVerdict v);

struct OffendingTerm {
    std::size_t term_index;
    double coefficient;
    std::vector<std::string> support;
};

struct LocalityReport {
    LocalityVerdict verdict;
    std::vector<OffendingTerm> offending;  // terms whose support contains both masses
};

LocalityReport classify(const HamiltonianSpec& spec,
                        const std::pair<std::string, std::string>& mass_labels,
                        const std::string& mediator_label);

/// Human-readable audit with a term-by-term support table, using the canonical
/// labels (Mass1, Mass2, Field).
std::string audit_report(const HamiltonianSpec& spec);

/// Structured key-value rendering of the same audit for machine consumption.
std::vector<std::pair<std::string, std::string>> audit_key_values(const HamiltonianSpec& spec);

} // namespace gielab
