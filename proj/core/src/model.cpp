#include "gielab/model.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <unsupported/Eigen/MatrixFunctions>

#include <nlohmann/json.hpp>

namespace gielab {

namespace {

using nlohmann::json;

bool is_identity(const Matrix& m) {
    if (m.rows() != m.cols()) return false;
    return (m - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() <= 1e-14;
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& j) {
    const auto nr = static_cast<Eigen::Index>(j.size());
    if (nr == 0) throw ConfigError("HamiltonianSpec: empty factor matrix");
    const auto nc = static_cast<Eigen::Index>(j.at(0).size());
    Matrix m(nr, nc);
    for (Eigen::Index r = 0; r < nr; ++r)
        for (Eigen::Index c = 0; c < nc; ++c) {
            const auto& e = j.at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c));
            m(r, c) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
        }
    return m;
}

Provenance provenance_from_string(const std::string& s) {
    if (s == "local") return Provenance::Local;
    if (s == "diagonalized") return Provenance::Diagonalized;
    if (s == "classicalized-local") return Provenance::ClassicalizedLocal;
    if (s == "classicalized-nonlocal") return Provenance::ClassicalizedNonlocal;
    if (s == "custom") return Provenance::Custom;
    throw ConfigError("unknown provenance tag '" + s + "'");
}

} // namespace

void ModelParams::validate() const {
    if (!(omega > 0.0)) throw ConfigError("ModelParams: omega must be > 0");
    if (!std::isfinite(lambda)) throw ConfigError("ModelParams: lambda must be finite");
    if (n_cut < 2) throw ConfigError("ModelParams: n_cut must be >= 2");
}

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::Local: return "local";
        case Provenance::Diagonalized: return "diagonalized";
        case Provenance::ClassicalizedLocal: return "classicalized-local";
        case Provenance::ClassicalizedNonlocal: return "classicalized-nonlocal";
        case Provenance::Custom: return "custom";
    }
    return "custom";
}

std::vector<std::string> HamiltonianTerm::support() const {
    std::vector<std::string> out;
    for (const auto& [label, factor] : factors)
        if (!is_identity(factor)) out.push_back(label);
    return out;
}

Operator HamiltonianSpec::assemble() const {
    Matrix total = Matrix::Zero(space.total_dim(), space.total_dim());
    for (const auto& term : terms) {
        Matrix part = Matrix::Identity(space.total_dim(), space.total_dim());
        // Multiply embedded factors; factors on distinct subsystems commute.
        for (const auto& [label, factor] : term.factors)
            part = part * embed(factor, label, space).matrix();
        total += term.coefficient * part;
    }
    return Operator(space, std::move(total), /*hermitian=*/true);
}

std::string HamiltonianSpec::serialize() const {
    json j;
    j["provenance"] = to_string(provenance);
    json subs = json::array();
    for (const auto& s : space.subsystems())
        subs.push_back({{"label", s.label}, {"dim", s.dim}});
    j["space"] = std::move(subs);
    json jterms = json::array();
    for (const auto& t : terms) {
        json jt;
        jt["coefficient"] = t.coefficient;
        json jf = json::object();
        for (const auto& [label, factor] : t.factors) jf[label] = matrix_to_json(factor);
        jt["factors"] = std::move(jf);
        jterms.push_back(std::move(jt));
    }
    j["terms"] = std::move(jterms);
    return j.dump(2);
}

HamiltonianSpec HamiltonianSpec::deserialize(const std::string& text) {
    json j = json::parse(text);
    std::vector<Subsystem> subs;
    for (const auto& s : j.at("space"))
        subs.push_back({s.at("label").get<std::string>(), s.at("dim").get<Eigen::Index>()});
    HamiltonianSpec spec{CompositeSpace(std::move(subs)), {}, Provenance::Custom};
    spec.provenance = provenance_from_string(j.at("provenance").get<std::string>());
    for (const auto& jt : j.at("terms")) {
        HamiltonianTerm term;
        term.coefficient = jt.at("coefficient").get<double>();
        for (const auto& [label, jm] : jt.at("factors").items())
            term.factors[label] = matrix_from_json(jm);
        spec.terms.push_back(std::move(term));
    }
    return spec;
}

HamiltonianSpec build_local_hamiltonian(const ModelParams& p) {
    p.validate();
    const Matrix a = annihilation_matrix(p.n_cut);
    const Matrix x = a + a.adjoint();
    const Matrix num = a.adjoint() * a;
    const Matrix n = branch_projector();

    HamiltonianSpec spec{CompositeSpace::standard(p.n_cut), {}, Provenance::Local};
    spec.terms.push_back({p.omega, {{"Field", num}}});
    spec.terms.push_back({p.lambda, {{"Mass1", n}, {"Field", x}}});
    spec.terms.push_back({p.lambda, {{"Mass2", n}, {"Field", x}}});
    return spec;
}

HamiltonianSpec build_diagonalized_hamiltonian(const ModelParams& p) {
    p.validate();
    const Matrix a = annihilation_matrix(p.n_cut);
    const Matrix num = a.adjoint() * a;
    const Matrix n = branch_projector();
    const double self = -p.lambda * p.lambda / p.omega;

    HamiltonianSpec spec{CompositeSpace::standard(p.n_cut), {}, Provenance::Diagonalized};
    spec.terms.push_back({p.omega, {{"Field", num}}});
    if (p.lambda != 0.0) {
        spec.terms.push_back({self, {{"Mass1", n}}});
        spec.terms.push_back({self, {{"Mass2", n}}});
        spec.terms.push_back({2.0 * self, {{"Mass1", n}, {"Mass2", n}}});
    }
    return spec;
}

Operator displacement_unitary(const ModelParams& p) {
    p.validate();
    const CompositeSpace space = CompositeSpace::standard(p.n_cut);
    const Matrix a = annihilation_matrix(p.n_cut);
    const Matrix n = branch_projector();
    const Matrix s_total = embed(n, "Mass1", space).matrix() + embed(n, "Mass2", space).matrix();
    const Matrix gen = (p.lambda / p.omega) * s_total *
                       embed(Matrix(a.adjoint() - a), "Field", space).matrix();
    Matrix d = gen.exp();
    return Operator(space, std::move(d));
}

DiagonalizationReport verify_diagonalization(const ModelParams& p) {
    p.validate();
    const Matrix h_local = build_local_hamiltonian(p).assemble().matrix();
    const Matrix h_diag = build_diagonalized_hamiltonian(p).assemble().matrix();
    const Matrix d = displacement_unitary(p).matrix();
    const Matrix dev = d * h_local * d.adjoint() - h_diag;

    // Contamination depth of the conjugated corner defect: the worst-sector
    // displacement is beta = 2 lambda/omega, and the defect spreads to about
    // (2 beta + 1.2) sqrt(n_cut) levels below the cutoff.
    const double beta = 2.0 * std::abs(p.lambda) / p.omega;
    Eigen::Index excl = static_cast<Eigen::Index>(
        std::ceil((2.0 * beta + 1.2) * std::sqrt(static_cast<double>(p.n_cut))));
    excl = std::max<Eigen::Index>(excl, 4);
    excl = std::min(excl, p.n_cut - 1);

    const Eigen::Index keep = p.n_cut - excl;
    double max_dev = 0.0;
    for (Eigen::Index qr = 0; qr < 4; ++qr)
        for (Eigen::Index fr = 0; fr < keep; ++fr)
            for (Eigen::Index qc = 0; qc < 4; ++qc)
                for (Eigen::Index fc = 0; fc < keep; ++fc)
                    max_dev = std::max(max_dev,
                                       std::abs(dev(qr * p.n_cut + fr, qc * p.n_cut + fc)));
    return {max_dev, excl};
}

ClassicalizedHamiltonian classicalize(const HamiltonianSpec& spec, Complex alpha) {
    const Eigen::Index n_cut = spec.space.has("Field") ? spec.space.dim("Field") : 0;
    Matrix a, adag, x, num;
    if (n_cut >= 2) {
        a = annihilation_matrix(n_cut);
        adag = a.adjoint();
        x = a + adag;
        num = adag * a;
    }

    auto substitute = [&](const Matrix& f) -> Complex {
        auto close = [&](const Matrix& ref) {
            return f.rows() == ref.rows() && (f - ref).cwiseAbs().maxCoeff() <= 1e-12;
        };
        if (is_identity(f)) return Complex(1.0, 0.0);
        if (n_cut >= 2) {
            if (close(a)) return alpha;
            if (close(adag)) return std::conj(alpha);
            if (close(x)) return alpha + std::conj(alpha);
            if (close(num)) return Complex(std::norm(alpha), 0.0);
        }
        throw ConfigError("classicalize: Field factor not in whitelist {1, a, a†, a+a†, a†a}");
    };

    ClassicalizedHamiltonian out{
        HamiltonianSpec{CompositeSpace::mass_pair(), {},
                        spec.provenance == Provenance::Local
                            ? Provenance::ClassicalizedLocal
                            : (spec.provenance == Provenance::Diagonalized
                                   ? Provenance::ClassicalizedNonlocal
                                   : Provenance::Custom)},
        0.0};

    // Terms carrying bare a or a† substitute to complex coefficients; they only
    // become real once merged with their conjugate partner, so accumulate with
    // complex weights keyed on the mass-factor structure.
    std::vector<std::pair<HamiltonianTerm, Complex>> accum;
    Complex scalar(0.0, 0.0);

    auto same_factors = [](const HamiltonianTerm& lhs, const HamiltonianTerm& rhs) {
        if (lhs.factors.size() != rhs.factors.size()) return false;
        for (const auto& [label, factor] : lhs.factors) {
            auto it = rhs.factors.find(label);
            if (it == rhs.factors.end() || it->second.rows() != factor.rows()) return false;
            if ((it->second - factor).cwiseAbs().maxCoeff() > 1e-14) return false;
        }
        return true;
    };

    for (const auto& term : spec.terms) {
        HamiltonianTerm mass_term;
        Complex field_value(1.0, 0.0);
        for (const auto& [label, factor] : term.factors) {
            if (label == "Field") field_value = substitute(factor);
            else mass_term.factors[label] = factor;
        }
        const Complex coeff = term.coefficient * field_value;
        if (mass_term.support().empty()) {
            scalar += coeff;
            continue;
        }
        auto it = std::find_if(accum.begin(), accum.end(),
                               [&](const auto& e) { return same_factors(e.first, mass_term); });
        if (it == accum.end()) accum.emplace_back(std::move(mass_term), coeff);
        else it->second += coeff;
    }

    if (std::abs(scalar.imag()) > 1e-12)
        throw ConfigError("classicalize: scalar part not real after substitution");
    out.scalar = scalar.real();
    for (auto& [term, coeff] : accum) {
        if (std::abs(coeff.imag()) > 1e-12)
            throw ConfigError("classicalize: substituted Hamiltonian is not Hermitian");
        if (coeff.real() == 0.0) continue;
        term.coefficient = coeff.real();
        out.mass_spec.terms.push_back(std::move(term));
    }
    return out;
}

} // namespace gielab
