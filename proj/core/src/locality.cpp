#include "gielab/locality.hpp"

#include <algorithm>
#include <sstream>

namespace gielab {

namespace {

bool contains(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

std::string join(const std::vector<std::string>& v) {
    if (v.empty()) return "(none)";
    std::string out;
    for (const auto& s : v) {
        if (!out.empty()) out += ",";
        out += s;
    }
    return out;
}

} // namespace

std::string to_string(LocalityVerdict v) {
    switch (v) {
        case LocalityVerdict::MediatedLocal: return "MediatedLocal";
        case LocalityVerdict::DirectCoupled: return "DirectCoupled";
        case LocalityVerdict::Decoupled: return "Decoupled";
    }
    return "Decoupled";
}

LocalityReport classify(const HamiltonianSpec& spec,
                        const std::pair<std::string, std::string>& mass_labels,
                        const std::string& mediator_label) {
    spec.space.index_of(mass_labels.first);
    spec.space.index_of(mass_labels.second);
    if (!mediator_label.empty()) spec.space.index_of(mediator_label);

    LocalityReport report{LocalityVerdict::Decoupled, {}};
    bool mass1_mediated = false, mass2_mediated = false;
    for (std::size_t i = 0; i < spec.terms.size(); ++i) {
        const auto& term = spec.terms[i];
        if (term.coefficient == 0.0) continue;
        const auto support = term.support();
        const bool m1 = contains(support, mass_labels.first);
        const bool m2 = contains(support, mass_labels.second);
        const bool med = !mediator_label.empty() && contains(support, mediator_label);
        if (m1 && m2) report.offending.push_back({i, term.coefficient, support});
        if (m1 && med) mass1_mediated = true;
        if (m2 && med) mass2_mediated = true;
    }
    if (!report.offending.empty()) report.verdict = LocalityVerdict::DirectCoupled;
    else if (mass1_mediated && mass2_mediated) report.verdict = LocalityVerdict::MediatedLocal;
    else report.verdict = LocalityVerdict::Decoupled;
    return report;
}

std::string audit_report(const HamiltonianSpec& spec) {
    const std::string mediator = spec.space.has("Field") ? "Field" : "";
    const auto report = classify(spec, {"Mass1", "Mass2"}, mediator);

    std::ostringstream os;
    os << "locality audit\n";
    os << "  model: " << to_string(spec.provenance) << "\n";
    os << "  terms:\n";
    for (std::size_t i = 0; i < spec.terms.size(); ++i) {
        const auto& t = spec.terms[i];
        os << "    [" << i << "] coefficient " << t.coefficient
           << "  support {" << join(t.support()) << "}\n";
    }
    os << "  verdict: " << to_string(report.verdict) << "\n";
    if (!report.offending.empty()) {
        os << "  offending terms (support spans both masses):\n";
        for (const auto& o : report.offending)
            os << "    [" << o.term_index << "] coefficient " << o.coefficient
               << "  support {" << join(o.support) << "}\n";
    }
    return os.str();
}

std::vector<std::pair<std::string, std::string>> audit_key_values(const HamiltonianSpec& spec) {
    const std::string mediator = spec.space.has("Field") ? "Field" : "";
    const auto report = classify(spec, {"Mass1", "Mass2"}, mediator);

    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("model", to_string(spec.provenance));
    kv.emplace_back("verdict", to_string(report.verdict));
    kv.emplace_back("n_terms", std::to_string(spec.terms.size()));
    kv.emplace_back("n_offending", std::to_string(report.offending.size()));
    for (std::size_t i = 0; i < report.offending.size(); ++i) {
        const auto& o = report.offending[i];
        kv.emplace_back("offending_" + std::to_string(i) + "_index", std::to_string(o.term_index));
        std::ostringstream c;
        c << o.coefficient;
        kv.emplace_back("offending_" + std::to_string(i) + "_coefficient", c.str());
        kv.emplace_back("offending_" + std::to_string(i) + "_support", join(o.support));
    }
    return kv;
}

} // namespace gielab
