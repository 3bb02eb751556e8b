#include <benchmark/benchmark.h>

#include "gielab/dynamics.hpp"
#include "gielab/entanglement.hpp"
#include "gielab/model.hpp"
#include "gielab/newtonian.hpp"

using namespace gielab;

static void BM_PropagatorSetup(benchmark::State& state) {
    const ModelParams p{1.0, 0.5, state.range(0)};
    const auto h = build_local_hamiltonian(p).assemble();
    for (auto _ : state) {
        HermitianPropagator prop(h);
        benchmark::DoNotOptimize(prop.eigenvalues().sum());
    }
}
BENCHMARK(BM_PropagatorSetup)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_QuantumLocalSample(benchmark::State& state) {
    const ModelParams p{1.0, 0.5, 32};
    const auto space = CompositeSpace::standard(p.n_cut);
    const auto h = build_local_hamiltonian(p).assemble();
    const HermitianPropagator prop(h);
    EvolutionConfig cfg;
    Vector psi0(space.total_dim());
    {
        const Vector mass = cfg.mass_state();
        const Vector field = fock_state(p.n_cut, 0);
        for (Eigen::Index i = 0; i < 4; ++i)
            psi0.segment(i * p.n_cut, p.n_cut) = mass(i) * field;
    }
    const Bipartition cut{{"Mass1"}, {"Mass2"}};
    double t = 0.0;
    for (auto _ : state) {
        t += 0.01;
        const auto psi = QuantumState::pure(space, prop.apply(t, psi0));
        const double n = negativity(partial_trace(psi, {"Mass1", "Mass2"}), cut);
        benchmark::DoNotOptimize(n);
    }
}
BENCHMARK(BM_QuantumLocalSample)->Unit(benchmark::kMicrosecond);

static void BM_MeasuredMediatorRun(benchmark::State& state) {
    const ModelParams p{1.0, 0.5, 32};
    EvolutionConfig cfg;
    cfg.regime = Regime::MeasuredMediator;
    cfg.t_max = 2.0 * M_PI;
    cfg.n_steps = static_cast<int>(state.range(0));
    for (auto _ : state) {
        const auto traj = run_measured_mediator(p, cfg);
        benchmark::DoNotOptimize(traj.mass_rho.back()(0, 0));
    }
}
BENCHMARK(BM_MeasuredMediatorRun)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_MediatorCutNegativity(benchmark::State& state) {
    const ModelParams p{1.0, 0.5, 32};
    const auto space = CompositeSpace::standard(p.n_cut);
    const auto h = build_local_hamiltonian(p).assemble();
    EvolutionConfig cfg;
    Vector psi0(space.total_dim());
    {
        const Vector mass = cfg.mass_state();
        const Vector field = fock_state(p.n_cut, 0);
        for (Eigen::Index i = 0; i < 4; ++i)
            psi0.segment(i * p.n_cut, p.n_cut) = mass(i) * field;
    }
    const HermitianPropagator prop(h);
    const auto rho = QuantumState::mixed(
        space, Matrix(prop.apply(1.0, psi0) * prop.apply(1.0, psi0).adjoint()));
    const Bipartition cut{{"Mass1", "Mass2"}, {"Field"}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(negativity(rho, cut));
    }
}
BENCHMARK(BM_MediatorCutNegativity)->Unit(benchmark::kMillisecond);

static void BM_EffectivePotential(benchmark::State& state) {
    ModeGrid grid;
    grid.k_max = 500.0;
    grid.n_k = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(effective_potential(1.0, grid));
    }
}
BENCHMARK(BM_EffectivePotential)->Arg(8192)->Arg(16384)->Unit(benchmark::kMicrosecond);

static void BM_VerifyDiagonalization(benchmark::State& state) {
    const ModelParams p{1.0, 0.5, state.range(0)};
    for (auto _ : state) {
        benchmark::DoNotOptimize(verify_diagonalization(p).max_deviation);
    }
}
BENCHMARK(BM_VerifyDiagonalization)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
