#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "gielab/model.hpp"
#include "oracles.hpp"

using namespace gielab;

namespace {

Eigen::VectorXd sorted_eigenvalues(const HamiltonianSpec& spec) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(spec.assemble().matrix(), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

} // namespace

TEST_SUITE("model") {

TEST_CASE("param validation") {
    CHECK_THROWS_AS((ModelParams{0.0, 0.5, 32}.validate()), ConfigError);
    CHECK_THROWS_AS((ModelParams{1.0, 0.5, 1}.validate()), ConfigError);
    CHECK_NOTHROW((ModelParams{2.0, -0.3, 8}.validate()));
}

TEST_CASE("local hamiltonian structure") {
    const ModelParams p{1.0, 0.5, 16};
    const auto spec = build_local_hamiltonian(p);
    REQUIRE(spec.terms.size() == 3);
    CHECK(spec.provenance == Provenance::Local);
    CHECK(spec.terms[0].support() == std::vector<std::string>{"Field"});
    CHECK(spec.terms[1].support() == std::vector<std::string>{"Field", "Mass1"});
    CHECK(spec.terms[2].support() == std::vector<std::string>{"Field", "Mass2"});
    CHECK(hermiticity_defect(spec.assemble().matrix()) < 1e-12);
}

TEST_CASE("decoupled limit lambda = 0") {
    const ModelParams p{1.0, 0.0, 12};
    const auto spec = build_local_hamiltonian(p);
    const Matrix h = spec.assemble().matrix();
    // commutes with every mass operator
    const auto space = spec.space;
    std::mt19937_64 rng(3);
    const Matrix u = oracles::random_unitary(rng, 2);
    const Matrix m1 = embed(u, "Mass1", space).matrix();
    CHECK((h * m1 - m1 * h).cwiseAbs().maxCoeff() < 1e-12);
    // 4-fold degenerate oscillator ladder
    const auto ev = sorted_eigenvalues(spec);
    for (Eigen::Index k = 0; k < 4 * 4; ++k)
        CHECK(ev(k) == doctest::Approx(static_cast<double>(k / 4)).epsilon(1e-12));
}

TEST_CASE("displaced-oscillator spectrum oracle") {
    SUBCASE("lowest eigenvalue at defaults is -1") {
        const ModelParams p{1.0, 0.5, 32};
        const auto ev = sorted_eigenvalues(build_local_hamiltonian(p));
        CHECK(ev(0) == doctest::Approx(-1.0).epsilon(1e-10));
    }
    SUBCASE("low-lying spectrum matches E(s,m) = m w - l^2 s^2 / w") {
        // At lambda/omega = 0.5 and n_cut = 32 the displaced ladders track the
        // closed form far from the cutoff; the m ~ n_cut/2 states brush the
        // truncation edge, so the 1e-8 window holds for m <= 12 here and for
        // all m <= n_cut/2 once n_cut >= 48 (the acceptance suite pins that).
        const ModelParams p{1.0, 0.5, 32};
        const auto ev = sorted_eigenvalues(build_local_hamiltonian(p));
        const auto exact = oracles::displaced_oscillator_spectrum(p.omega, p.lambda, p.n_cut);
        for (int k = 0; k < 4 * 13; ++k)
            CHECK(std::abs(ev(k) - exact[static_cast<std::size_t>(k)]) < 1e-8);
    }
}

TEST_CASE("diagonalized hamiltonian") {
    const ModelParams p{1.0, 0.5, 32};
    const auto spec = build_diagonalized_hamiltonian(p);
    SUBCASE("lambda = 0 leaves only the free field") {
        const auto free_spec = build_diagonalized_hamiltonian({1.0, 0.0, 8});
        CHECK(free_spec.terms.size() == 1);
        CHECK(free_spec.terms[0].support() == std::vector<std::string>{"Field"});
    }
    SUBCASE("cross-term coefficient is -2 lambda^2 / omega") {
        bool found = false;
        for (const auto& term : spec.terms) {
            const auto sup = term.support();
            if (sup.size() == 2 && sup[0] == "Mass1" && sup[1] == "Mass2") {
                CHECK(term.coefficient == doctest::Approx(-0.5).epsilon(1e-15));
                found = true;
            }
        }
        CHECK(found);
    }
    SUBCASE("isospectral with the local model away from the cutoff") {
        const auto ev_local = sorted_eigenvalues(build_local_hamiltonian(p));
        const auto ev_diag = sorted_eigenvalues(spec);
        // levels with m <= 13 keep negligible support on the top 4 Fock levels
        // at lambda/omega = 0.5; the displaced m ~ n_cut/2 states do not
        for (Eigen::Index k = 0; k < 4 * 14; ++k)
            CHECK(std::abs(ev_local(k) - ev_diag(k)) < 1e-6);
    }
}

TEST_CASE("displacement unitary") {
    SUBCASE("lambda = 0 is the identity") {
        const auto d = displacement_unitary({1.0, 0.0, 8});
        CHECK((d.matrix() - Matrix::Identity(32, 32)).cwiseAbs().maxCoeff() < 1e-14);
    }
    SUBCASE("unitary") {
        const auto d = displacement_unitary({1.0, 0.5, 16});
        const Matrix& m = d.matrix();
        CHECK((m * m.adjoint() - Matrix::Identity(m.rows(), m.rows())).cwiseAbs().maxCoeff() <
              1e-10);
    }
    SUBCASE("acts as identity in the s = 0 sector") {
        const auto d = displacement_unitary({1.0, 0.5, 8});
        // block of |00> mass branch
        const Matrix block = d.matrix().block(0, 0, 8, 8);
        CHECK((block - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("s = 2 sector displaces the vacuum to a coherent state") {
        const ModelParams p{1.0, 0.5, 32};
        const auto d = displacement_unitary(p);
        const auto space = CompositeSpace::standard(p.n_cut);
        Vector mass11 = Vector::Zero(4);
        mass11(3) = 1.0;
        const Vector psi = oracles::kron_vec(mass11, fock_state(p.n_cut, 0));
        const Vector displaced = d.matrix() * psi;
        // overlap with the original vacuum branch: exp(-(2 lambda/omega)^2/2)
        const Complex overlap = psi.adjoint() * displaced;
        CHECK(std::abs(overlap) == doctest::Approx(std::exp(-0.5)).epsilon(1e-10));
        // and the field state is the coherent state of amplitude 2 lambda/omega
        const Vector expected = oracles::kron_vec(mass11, coherent_state(p.n_cut, 1.0));
        CHECK(std::abs(Complex(expected.adjoint() * displaced)) ==
              doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("verify_diagonalization") {
    SUBCASE("lambda = 0 has zero deviation") {
        const auto report = verify_diagonalization({1.0, 0.0, 16});
        CHECK(report.max_deviation < 1e-13);
    }
    SUBCASE("defaults stay under 1e-8 on the interior block") {
        const auto report = verify_diagonalization({1.0, 0.5, 32});
        CHECK(report.max_deviation <= 1e-8);
        CHECK(report.edge_excluded > 4);
        CHECK(report.edge_excluded < 32);
    }
    SUBCASE("deviation decreases as n_cut doubles") {
        const double d16 = verify_diagonalization({1.0, 0.5, 16}).max_deviation;
        const double d32 = verify_diagonalization({1.0, 0.5, 32}).max_deviation;
        const double d64 = verify_diagonalization({1.0, 0.5, 64}).max_deviation;
        CHECK(d16 > d32);
        CHECK(d32 > d64);
        CHECK(d64 <= 1e-8);
    }
}

TEST_CASE("classicalize") {
    const ModelParams p{1.0, 0.5, 16};

    SUBCASE("local model, real alpha") {
        const auto c = classicalize(build_local_hamiltonian(p), Complex(1.0, 0.0));
        CHECK(c.scalar == doctest::Approx(1.0).epsilon(1e-14));  // omega |alpha|^2
        REQUIRE(c.mass_spec.terms.size() == 2);
        for (const auto& term : c.mass_spec.terms) {
            CHECK(term.coefficient == doctest::Approx(1.0).epsilon(1e-14));  // lambda (a+a*)
            CHECK(term.support().size() == 1);
        }
        CHECK(c.mass_spec.provenance == Provenance::ClassicalizedLocal);
    }
    SUBCASE("local model, imaginary alpha kills the mass part") {
        const auto c = classicalize(build_local_hamiltonian(p), Complex(0.0, 1.0));
        CHECK(c.mass_spec.terms.empty());
        CHECK(c.scalar == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("diagonalized model keeps the cross term untouched") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        for (int trial = 0; trial < 20; ++trial) {
            const Complex alpha(u(rng), u(rng));
            const auto c = classicalize(build_diagonalized_hamiltonian(p), alpha);
            int cross_terms = 0;
            for (const auto& term : c.mass_spec.terms) {
                if (term.support().size() == 2) {
                    ++cross_terms;
                    CHECK(term.coefficient == doctest::Approx(-0.5).epsilon(1e-14));
                }
            }
            CHECK(cross_terms == 1);
        }
    }
    SUBCASE("local model never yields joint-mass support") {
        std::mt19937_64 rng(6);
        std::uniform_real_distribution<double> u(-3.0, 3.0);
        for (int trial = 0; trial < 100; ++trial) {
            const Complex alpha(u(rng), u(rng));
            const auto c = classicalize(build_local_hamiltonian(p), alpha);
            for (const auto& term : c.mass_spec.terms)
                CHECK(term.support().size() <= 1);
        }
    }
    SUBCASE("bare a and a† merge into a real coefficient") {
        HamiltonianSpec spec{CompositeSpace::standard(8), {}, Provenance::Custom};
        const Matrix a = annihilation_matrix(8);
        spec.terms.push_back({0.3, {{"Mass1", branch_projector()}, {"Field", a}}});
        spec.terms.push_back({0.3, {{"Mass1", branch_projector()}, {"Field", Matrix(a.adjoint())}}});
        const auto c = classicalize(spec, Complex(2.0, 1.0));
        REQUIRE(c.mass_spec.terms.size() == 1);
        CHECK(c.mass_spec.terms[0].coefficient == doctest::Approx(0.3 * 4.0).epsilon(1e-14));
    }
    SUBCASE("rejects unrecognized field factors") {
        HamiltonianSpec spec{CompositeSpace::standard(8), {}, Provenance::Custom};
        const Matrix a = annihilation_matrix(8);
        spec.terms.push_back({1.0, {{"Field", Matrix(a * a)}}});
        CHECK_THROWS_AS(classicalize(spec, Complex(1.0, 0.0)), ConfigError);
    }
}

TEST_CASE("spec serialization round-trips") {
    const auto spec = build_local_hamiltonian({1.0, 0.5, 4});
    const auto text = spec.serialize();
    const auto back = HamiltonianSpec::deserialize(text);
    CHECK(back.provenance == spec.provenance);
    REQUIRE(back.terms.size() == spec.terms.size());
    const Matrix diff = back.assemble().matrix() - spec.assemble().matrix();
    CHECK(diff.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("spec serialization golden file") {
    const auto spec = build_local_hamiltonian({1.0, 0.5, 2});
    std::ifstream golden(std::string(GIELAB_TEST_DATA_DIR) + "/local_model_ncut2.json");
    REQUIRE(golden.good());
    std::ostringstream buf;
    buf << golden.rdbuf();
    CHECK(spec.serialize() == buf.str());
}

} // TEST_SUITE
