#pragma once

#include <utility>
#include <vector>

#include "gielab/entanglement.hpp"
#include "gielab/hilbert.hpp"
#include "gielab/model.hpp"

namespace gielab {

enum class Regime {
    QuantumLocal,      ///< Eq.-1 model, quantum mediator
    ClassicalLocal,    ///< classicalized Eq.-1 model, prescribed alpha(t)
    ClassicalNonlocal, ///< classicalized Eq.-2 model (keeps the direct n1 n2 term)
    MeanFieldLocal,    ///< classical field with Ehrenfest feedback
    MeasuredMediator,  ///< quantum mediator, fully dephased each step
};

enum class FieldRule { FreeRotation, MeanField, Constant };
enum class DephasingBasis { Quadrature, Fock };

/// Truncation guard: population allowed in the top 4 Fock levels.
inline constexpr Eigen::Index kGuardTopLevels = 4;
inline constexpr double kGuardThreshold = 1e-8;
/// Norm drift allowed during integration.
inline constexpr double kNormDriftGuard = 1e-6;

struct EvolutionConfig {
    double t_max = 2.0 * M_PI;
    int n_steps = 512;
    Regime regime = Regime::QuantumLocal;
    Vector initial_mass;                 ///< two-qubit vector; empty means |+>|+>
    Complex alpha0 = 0.0;                ///< classical amplitude / coherent amplitude
    bool field_coherent = false;         ///< quantum regimes: |alpha0> instead of |0>
    FieldRule field_rule = FieldRule::FreeRotation;
    DephasingBasis dephasing_basis = DephasingBasis::Quadrature;
    bool dephasing_enabled = true;

    void validate() const;
    Vector mass_state() const;           ///< initial_mass or the |+>|+> default, normalized
};

/// Classical mediator amplitude samples; strictly increasing times from t = 0.
struct ClassicalFieldTrajectory {
    std::vector<std::pair<double, Complex>> samples;
    FieldRule rule = FieldRule::FreeRotation;
};

/// alpha(t) for the prescribed rules (FreeRotation, Constant).
Complex classical_field_amplitude(FieldRule rule, Complex alpha0, double omega, double t);

/// Full tripartite pure-state trajectory.
struct StateTrajectory {
    std::vector<double> times;
    std::vector<QuantumState> states;
};

/// Two-qubit pure-state trajectory of the mass pair.
struct MassTrajectory {
    std::vector<double> times;
    std::vector<QuantumState> states;
};

struct MeanFieldResult {
    MassTrajectory mass;
    ClassicalFieldTrajectory field;
};

/// Mass-pair reduced density matrices plus mediator diagnostics.
struct MeasuredTrajectory {
    std::vector<double> times;
    std::vector<Matrix> mass_rho;             ///< 4x4 reduced states
    std::vector<double> fock_tail;            ///< field-marginal top-4 population
    /// Negativity across the masses|field cut sampled right after each unitary
    /// sub-step, before the dephasing erases it. Entry 0 corresponds to t = 0.
    std::vector<double> mediator_negativity;
};

/// |psi(t)> = exp(-i H_local t) |psi(0)> at each sample time. Guards the top-4
/// Fock tail (< 1e-8) at every sample.
StateTrajectory run_quantum_local(const ModelParams& p, const EvolutionConfig& cfg);

/// Two-mass evolution under lambda (alpha(t)+alpha*(t)) (n1+n2) with midpoint
/// stepping; the generators at different times commute, so stepping is exact
/// up to the quadrature of the phase integral.
MassTrajectory run_classical_local(const ModelParams& p, const EvolutionConfig& cfg);

/// Two-mass evolution under the classicalized diagonalized Hamiltonian; the
/// scalar omega |alpha|^2 is a global phase and is dropped.
MassTrajectory run_classical_nonlocal(const ModelParams& p, const EvolutionConfig& cfg);

/// Co-integrates d alpha/dt = -i omega alpha - i lambda <n1+n2>(t) with the mass
/// evolution. The field amplitude and the accumulated coupling phase advance by
/// classic fixed-step RK4; the mass state advances by the exact exponential of
/// the integrated phase, which keeps product states exactly product.
MeanFieldResult run_meanfield_local(const ModelParams& p, const EvolutionConfig& cfg);

/// Per step: exact unitary exp(-i H_local dt), then full dephasing of the field
/// in the chosen basis (quadrature X = (a+a†)/sqrt(2) by default). Requires
/// omega * dt <= 0.1.
MeasuredTrajectory run_measured_mediator(const ModelParams& p, const EvolutionConfig& cfg);

} // namespace gielab
