#include <doctest.h>

#include <algorithm>
#include <random>

#include "gielab/dynamics.hpp"
#include "gielab/locality.hpp"
#include "oracles.hpp"

using namespace gielab;

namespace {

const std::pair<std::string, std::string> kMasses{"Mass1", "Mass2"};

HamiltonianSpec shuffled(HamiltonianSpec spec, std::mt19937_64& rng) {
    std::shuffle(spec.terms.begin(), spec.terms.end(), rng);
    return spec;
}

HamiltonianSpec split_terms(HamiltonianSpec spec) {
    std::vector<HamiltonianTerm> out;
    for (auto& term : spec.terms) {
        HamiltonianTerm half = term;
        half.coefficient = term.coefficient / 2.0;
        out.push_back(half);
        out.push_back(half);
    }
    spec.terms = std::move(out);
    return spec;
}

} // namespace

TEST_SUITE("locality") {

TEST_CASE("verdicts on the built-in models") {
    const ModelParams p{1.0, 0.5, 8};
    SUBCASE("local model is MediatedLocal") {
        const auto r = classify(build_local_hamiltonian(p), kMasses, "Field");
        CHECK(r.verdict == LocalityVerdict::MediatedLocal);
        CHECK(r.offending.empty());
    }
    SUBCASE("diagonalized model is DirectCoupled with one offending term") {
        const auto r = classify(build_diagonalized_hamiltonian(p), kMasses, "Field");
        CHECK(r.verdict == LocalityVerdict::DirectCoupled);
        REQUIRE(r.offending.size() == 1);
        CHECK(r.offending[0].coefficient == doctest::Approx(-0.5));
        CHECK(r.offending[0].support == std::vector<std::string>{"Mass1", "Mass2"});
    }
    SUBCASE("classicalized local model has no joint mass term") {
        const auto c = classicalize(build_local_hamiltonian(p), Complex(1.3, -0.2));
        const auto r = classify(c.mass_spec, kMasses, "");
        CHECK(r.verdict != LocalityVerdict::DirectCoupled);
        CHECK(r.offending.empty());
    }
    SUBCASE("direct coupling wins even when the mediator is also involved") {
        HamiltonianSpec spec{CompositeSpace::standard(8), {}, Provenance::Custom};
        const Matrix a = annihilation_matrix(8);
        spec.terms.push_back({0.5, {{"Mass1", branch_projector()},
                                    {"Mass2", branch_projector()},
                                    {"Field", Matrix(a + a.adjoint())}}});
        const auto r = classify(spec, kMasses, "Field");
        CHECK(r.verdict == LocalityVerdict::DirectCoupled);
    }
    SUBCASE("single-mass coupling only is Decoupled") {
        HamiltonianSpec spec{CompositeSpace::standard(8), {}, Provenance::Custom};
        const Matrix a = annihilation_matrix(8);
        spec.terms.push_back({0.5, {{"Mass1", branch_projector()},
                                    {"Field", Matrix(a + a.adjoint())}}});
        const auto r = classify(spec, kMasses, "Field");
        CHECK(r.verdict == LocalityVerdict::Decoupled);
    }
    SUBCASE("unknown labels are rejected") {
        CHECK_THROWS_AS(classify(build_local_hamiltonian(p), {"Mass1", "Nope"}, "Field"),
                        ConfigError);
    }
}

TEST_CASE("verdict stable under term reordering and splitting") {
    const ModelParams p{1.0, 0.5, 4};
    std::mt19937_64 rng(101);
    const std::vector<HamiltonianSpec> models = {build_local_hamiltonian(p),
                                                 build_diagonalized_hamiltonian(p)};
    for (const auto& model : models) {
        const auto base = classify(model, kMasses, "Field").verdict;
        for (int trial = 0; trial < 100; ++trial) {
            CHECK(classify(shuffled(model, rng), kMasses, "Field").verdict == base);
            CHECK(classify(split_terms(model), kMasses, "Field").verdict == base);
        }
    }
}

TEST_CASE("DirectCoupled iff some support contains both masses (random specs)") {
    std::mt19937_64 rng(103);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    const auto space = CompositeSpace::standard(4);
    const Matrix a = annihilation_matrix(4);
    const Matrix x = a + a.adjoint();

    for (int trial = 0; trial < 200; ++trial) {
        HamiltonianSpec spec{space, {}, Provenance::Custom};
        bool any_joint = false;
        const int n_terms = 1 + static_cast<int>(rng() % 4);
        for (int k = 0; k < n_terms; ++k) {
            HamiltonianTerm term;
            term.coefficient = coeff(rng);
            const bool m1 = coin(rng), m2 = coin(rng), f = coin(rng);
            if (m1) term.factors["Mass1"] = branch_projector();
            if (m2) term.factors["Mass2"] = branch_projector();
            if (f) term.factors["Field"] = x;
            if (m1 && m2 && term.coefficient != 0.0) any_joint = true;
            spec.terms.push_back(std::move(term));
        }
        const auto r = classify(spec, kMasses, "Field");
        CHECK((r.verdict == LocalityVerdict::DirectCoupled) == any_joint);
    }
}

TEST_CASE("never-entangling classical models audit without joint mass terms") {
    // The no-go and the audit agree on the built-in family: a classicalized
    // local model neither entangles in dynamics nor carries a joint-support
    // term syntactically.
    std::mt19937_64 rng(107);
    std::uniform_real_distribution<double> amp(-2.0, 2.0);
    for (int trial = 0; trial < 5; ++trial) {
        const Complex alpha(amp(rng), amp(rng));
        const ModelParams p{1.0, 0.5, 8};
        const auto c = classicalize(build_local_hamiltonian(p), alpha);
        CHECK(classify(c.mass_spec, kMasses, "").offending.empty());

        EvolutionConfig cfg;
        cfg.regime = Regime::ClassicalLocal;
        cfg.t_max = 2.0 * M_PI;
        cfg.n_steps = 64;
        cfg.alpha0 = alpha;
        const Bipartition cut{{"Mass1"}, {"Mass2"}};
        for (const auto& state : run_classical_local(p, cfg).states)
            CHECK(negativity(state, cut) <= 1e-12);
    }
}

TEST_CASE("audit report rendering") {
    const ModelParams p{1.0, 0.5, 8};
    SUBCASE("local model: 3 terms, none joint") {
        const auto text = audit_report(build_local_hamiltonian(p));
        CHECK(text.find("verdict: MediatedLocal") != std::string::npos);
        CHECK(text.find("offending") == std::string::npos);
        CHECK(text.find("[2]") != std::string::npos);
    }
    SUBCASE("diagonalized model: exactly one flagged term") {
        const auto text = audit_report(build_diagonalized_hamiltonian(p));
        CHECK(text.find("verdict: DirectCoupled") != std::string::npos);
        CHECK(text.find("offending terms") != std::string::npos);
        const auto kv = audit_key_values(build_diagonalized_hamiltonian(p));
        const auto it = std::find_if(kv.begin(), kv.end(),
                                     [](const auto& e) { return e.first == "n_offending"; });
        REQUIRE(it != kv.end());
        CHECK(it->second == "1");
    }
}

} // TEST_SUITE
