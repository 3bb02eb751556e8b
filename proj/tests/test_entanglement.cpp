#include <doctest.h>

#include <random>

#include "gielab/entanglement.hpp"
#include "oracles.hpp"

using namespace gielab;

namespace {

const Bipartition kMassCut{{"Mass1"}, {"Mass2"}};

QuantumState two_qubit_pure(const Vector& psi) {
    return QuantumState::pure(CompositeSpace::mass_pair(), psi);
}

Vector bell_state() {
    Vector v = Vector::Zero(4);
    v(0) = 1.0 / std::sqrt(2.0);
    v(3) = 1.0 / std::sqrt(2.0);
    return v;
}

} // namespace

TEST_SUITE("entanglement") {

TEST_CASE("negativity reference values") {
    SUBCASE("product state is 0") {
        const Vector psi = oracles::kron_vec(plus_state(), plus_state());
        CHECK(negativity(two_qubit_pure(psi), kMassCut) < 1e-14);
    }
    SUBCASE("Bell state is 0.5") {
        CHECK(negativity(two_qubit_pure(bell_state()), kMassCut) ==
              doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("(|00>+|01>+|10>-|11>)/2 is 0.5, against the brute-force oracle") {
        Vector psi(4);
        psi << 0.5, 0.5, 0.5, -0.5;
        const auto state = two_qubit_pure(psi);
        const double n = negativity(state, kMassCut);
        CHECK(n == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(n == doctest::Approx(oracles::negativity_2q_bruteforce(state.to_density()))
                       .epsilon(1e-12));
    }
}

TEST_CASE("negativity matches the brute-force partial transpose on random states") {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 50; ++trial) {
        const Vector psi = oracles::random_state(rng, 4);
        const auto state = two_qubit_pure(psi);
        CHECK(negativity(state, kMassCut) ==
              doctest::Approx(oracles::negativity_2q_bruteforce(state.to_density()))
                  .epsilon(1e-12));
    }
}

TEST_CASE("negativity invariant under local unitaries") {
    std::mt19937_64 rng(73);
    for (int trial = 0; trial < 100; ++trial) {
        const Vector psi = oracles::random_state(rng, 4);
        const double base = negativity(two_qubit_pure(psi), kMassCut);
        const Matrix u = oracles::kron(oracles::random_unitary(rng, 2),
                                       oracles::random_unitary(rng, 2));
        const double rotated = negativity(two_qubit_pure(u * psi), kMassCut);
        CHECK(std::abs(base - rotated) < 1e-10);
    }
}

TEST_CASE("negativity of explicit separable mixtures is 0") {
    std::mt19937_64 rng(79);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        Matrix rho = Matrix::Zero(4, 4);
        double total = 0.0;
        for (int k = 0; k < 6; ++k) {
            const double w = unit(rng) + 1e-3;
            const Vector prod = oracles::kron_vec(oracles::random_state(rng, 2),
                                                  oracles::random_state(rng, 2));
            rho += w * (prod * prod.adjoint());
            total += w;
        }
        rho /= total;
        const auto state = QuantumState::mixed(CompositeSpace::mass_pair(), rho);
        CHECK(negativity(state, kMassCut) <= 1e-12);
    }
}

TEST_CASE("negativity rejects invalid density matrices") {
    Matrix rho = Matrix::Identity(4, 4);  // trace 4
    CHECK_THROWS_AS(QuantumState::mixed(CompositeSpace::mass_pair(), rho), ConfigError);
    const Bipartition bad{{"Mass1"}, {"Mass1"}};
    CHECK_THROWS_AS(negativity(two_qubit_pure(bell_state()), bad), ConfigError);
}

TEST_CASE("entanglement entropy") {
    SUBCASE("product is 0, Bell is 1") {
        const Vector prod = oracles::kron_vec(plus_state(), plus_state());
        CHECK(entanglement_entropy(two_qubit_pure(prod), {"Mass1"}) < 1e-12);
        CHECK(entanglement_entropy(two_qubit_pure(bell_state()), {"Mass1"}) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("symmetric across the cut") {
        std::mt19937_64 rng(83);
        const auto space = CompositeSpace::standard(6);
        for (int trial = 0; trial < 10; ++trial) {
            const auto psi = QuantumState::pure(space, oracles::random_state(rng, 24));
            const double sa = entanglement_entropy(psi, {"Mass1", "Mass2"});
            const double sb = entanglement_entropy(psi, {"Field"});
            CHECK(std::abs(sa - sb) < 1e-8);
        }
    }
    SUBCASE("rejects mixed input") {
        const auto mixed = QuantumState::mixed(CompositeSpace::mass_pair(),
                                               0.25 * Matrix::Identity(4, 4));
        CHECK_THROWS_AS(entanglement_entropy(mixed, {"Mass1"}), ConfigError);
    }
}

TEST_CASE("concurrence") {
    SUBCASE("product is 0, Bell is 1") {
        const Vector prod = oracles::kron_vec(plus_state(), plus_state());
        CHECK(concurrence_two_qubit(prod * prod.adjoint()) < 1e-10);
        const Vector bell = bell_state();
        CHECK(concurrence_two_qubit(bell * bell.adjoint()) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("N = C/2 for pure two-qubit states") {
        std::mt19937_64 rng(89);
        for (int trial = 0; trial < 100; ++trial) {
            const Vector psi = oracles::random_state(rng, 4);
            const double n = negativity(two_qubit_pure(psi), kMassCut);
            const double c = concurrence_two_qubit(psi * psi.adjoint());
            CHECK(std::abs(n - c / 2.0) < 1e-10);
        }
    }
    SUBCASE("rejects wrong dimension") {
        CHECK_THROWS_AS(concurrence_two_qubit(Matrix::Identity(3, 3)), ConfigError);
    }
}

TEST_CASE("fock tail population") {
    const auto space = CompositeSpace::standard(32);
    SUBCASE("vacuum has zero tail") {
        const Vector psi = oracles::kron_vec(oracles::kron_vec(plus_state(), plus_state()),
                                             fock_state(32, 0));
        CHECK(fock_tail_population(QuantumState::pure(space, psi), 4) == 0.0);
    }
    SUBCASE("coherent |alpha|=1 tail matches the Poisson sum and is tiny") {
        const Vector psi = oracles::kron_vec(oracles::kron_vec(plus_state(), plus_state()),
                                             coherent_state(32, Complex(1.0, 0.0)));
        const double tail = fock_tail_population(QuantumState::pure(space, psi), 4);
        const double poisson = oracles::coherent_tail_poisson(32, 4, 1.0);
        CHECK(tail < 1e-20);
        CHECK(tail == doctest::Approx(poisson).epsilon(1e-6));
    }
    SUBCASE("rejects top_k >= n_cut") {
        const Vector psi = oracles::kron_vec(oracles::kron_vec(plus_state(), plus_state()),
                                             fock_state(32, 0));
        CHECK_THROWS_AS(fock_tail_population(QuantumState::pure(space, psi), 32), ConfigError);
    }
}

} // TEST_SUITE
