#include "gielab/dynamics.hpp"

#include <cmath>

namespace gielab {

namespace {

Vector field_initial(const ModelParams& p, const EvolutionConfig& cfg) {
    if (cfg.field_coherent) return coherent_state(p.n_cut, cfg.alpha0);
    return fock_state(p.n_cut, 0);
}

Vector kron_vec(const Vector& a, const Vector& b) {
    Vector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
        out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

/// Branch occupation s = b1 + b2 of the mass basis state with flat index i.
int branch_sum(Eigen::Index i) { return static_cast<int>((i >> 1) + (i & 1)); }

void check_regime(const EvolutionConfig& cfg, Regime expected, const char* name) {
    if (cfg.regime != expected)
        throw ConfigError(std::string(name) + ": config regime mismatch");
}

/// Applies the product unitary exp(-i theta (n1+n2)) to a two-qubit vector.
void apply_branch_phase(Vector& mass, double theta) {
    const Complex i(0.0, 1.0);
    for (Eigen::Index b = 0; b < 4; ++b)
        mass(b) *= std::exp(-i * theta * static_cast<double>(branch_sum(b)));
}

} // namespace

void EvolutionConfig::validate() const {
    if (!(t_max > 0.0)) throw ConfigError("EvolutionConfig: t_max must be > 0");
    if (n_steps < 1) throw ConfigError("EvolutionConfig: n_steps must be >= 1");
    if (initial_mass.size() != 0 && initial_mass.size() != 4)
        throw ConfigError("EvolutionConfig: initial mass state must have dimension 4");
    if (initial_mass.size() == 4 && initial_mass.norm() < 1e-12)
        throw ConfigError("EvolutionConfig: initial mass state is zero");
}

Vector EvolutionConfig::mass_state() const {
    if (initial_mass.size() == 4) return initial_mass.normalized();
    return kron_vec(plus_state(), plus_state());
}

Complex classical_field_amplitude(FieldRule rule, Complex alpha0, double omega, double t) {
    switch (rule) {
        case FieldRule::Constant: return alpha0;
        case FieldRule::FreeRotation: return alpha0 * std::exp(Complex(0.0, -omega * t));
        case FieldRule::MeanField: break;
    }
    throw ConfigError("classical_field_amplitude: MeanField amplitudes come from integration");
}

// ---------------------------------------------------------------------------
// quantum local

StateTrajectory run_quantum_local(const ModelParams& p, const EvolutionConfig& cfg) {
    p.validate();
    cfg.validate();
    check_regime(cfg, Regime::QuantumLocal, "run_quantum_local");

    const CompositeSpace space = CompositeSpace::standard(p.n_cut);
    const Operator h = build_local_hamiltonian(p).assemble();
    const HermitianPropagator prop(h);
    const Vector psi0 = kron_vec(cfg.mass_state(), field_initial(p, cfg));

    StateTrajectory traj;
    const double dt = cfg.t_max / cfg.n_steps;
    for (int k = 0; k <= cfg.n_steps; ++k) {
        const double t = k * dt;
        Vector psi = prop.apply(t, psi0);
        QuantumState state = QuantumState::pure(space, std::move(psi));
        if (fock_tail_population(state, kGuardTopLevels) >= kGuardThreshold)
            throw TruncationOverflow("quantum-local: Fock tail exceeded guard; raise n_cut");
        traj.times.push_back(t);
        traj.states.push_back(std::move(state));
    }
    return traj;
}

// ---------------------------------------------------------------------------
// classical local

MassTrajectory run_classical_local(const ModelParams& p, const EvolutionConfig& cfg) {
    p.validate();
    cfg.validate();
    check_regime(cfg, Regime::ClassicalLocal, "run_classical_local");
    if (cfg.field_rule == FieldRule::MeanField)
        throw ConfigError("run_classical_local: trajectory rule must be FreeRotation or Constant");

    const CompositeSpace mass_space = CompositeSpace::mass_pair();
    const double dt = cfg.t_max / cfg.n_steps;
    Vector mass = cfg.mass_state();

    MassTrajectory traj;
    traj.times.push_back(0.0);
    traj.states.push_back(QuantumState::pure(mass_space, mass));
    for (int k = 0; k < cfg.n_steps; ++k) {
        const double t_mid = (k + 0.5) * dt;
        const Complex alpha = classical_field_amplitude(cfg.field_rule, cfg.alpha0, p.omega, t_mid);
        const double theta = dt * p.lambda * 2.0 * alpha.real();
        apply_branch_phase(mass, theta);
        traj.times.push_back((k + 1) * dt);
        traj.states.push_back(QuantumState::pure(mass_space, mass));
    }
    return traj;
}

// ---------------------------------------------------------------------------
// classical nonlocal

MassTrajectory run_classical_nonlocal(const ModelParams& p, const EvolutionConfig& cfg) {
    p.validate();
    cfg.validate();
    check_regime(cfg, Regime::ClassicalNonlocal, "run_classical_nonlocal");

    const auto classical = classicalize(build_diagonalized_hamiltonian(p), cfg.alpha0);
    const Operator h = classical.mass_spec.assemble();
    const HermitianPropagator prop(h);
    const Vector mass0 = cfg.mass_state();
    const CompositeSpace mass_space = CompositeSpace::mass_pair();

    MassTrajectory traj;
    const double dt = cfg.t_max / cfg.n_steps;
    for (int k = 0; k <= cfg.n_steps; ++k) {
        const double t = k * dt;
        traj.times.push_back(t);
        traj.states.push_back(QuantumState::pure(mass_space, prop.apply(t, mass0)));
    }
    return traj;
}

// ---------------------------------------------------------------------------
// mean-field local

MeanFieldResult run_meanfield_local(const ModelParams& p, const EvolutionConfig& cfg) {
    p.validate();
    cfg.validate();
    check_regime(cfg, Regime::MeanFieldLocal, "run_meanfield_local");

    const CompositeSpace mass_space = CompositeSpace::mass_pair();
    const double dt = cfg.t_max / cfg.n_steps;
    Vector mass = cfg.mass_state();

    MeanFieldResult result;
    result.field.rule = FieldRule::MeanField;
    result.mass.times.push_back(0.0);
    result.mass.states.push_back(QuantumState::pure(mass_space, mass));
    result.field.samples.emplace_back(0.0, cfg.alpha0);

    Complex alpha = cfg.alpha0;
    const Complex minus_i(0.0, -1.0);

    for (int k = 0; k < cfg.n_steps; ++k) {
        // <n1+n2> of the current mass state; conserved exactly by this generator.
        double source = 0.0;
        for (Eigen::Index b = 0; b < 4; ++b)
            source += std::norm(mass(b)) * branch_sum(b);

        // RK4 on y = (alpha, theta): alpha' = -i omega alpha - i lambda <S>,
        // theta' = lambda (alpha + alpha*).
        auto deriv = [&](const Complex& a) -> std::pair<Complex, double> {
            return {minus_i * (p.omega * a + p.lambda * source), p.lambda * 2.0 * a.real()};
        };
        const auto [k1a, k1t] = deriv(alpha);
        const auto [k2a, k2t] = deriv(alpha + 0.5 * dt * k1a);
        const auto [k3a, k3t] = deriv(alpha + 0.5 * dt * k2a);
        const auto [k4a, k4t] = deriv(alpha + dt * k3a);
        alpha += (dt / 6.0) * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
        const double dtheta = (dt / 6.0) * (k1t + 2.0 * k2t + 2.0 * k3t + k4t);

        apply_branch_phase(mass, dtheta);
        const double drift = std::abs(mass.norm() - 1.0);
        if (drift > kNormDriftGuard)
            throw NumericalGuardError("meanfield-local: norm drift " + std::to_string(drift) +
                                      "; reduce the step size");

        const double t = (k + 1) * dt;
        result.mass.times.push_back(t);
        result.mass.states.push_back(QuantumState::pure(mass_space, mass));
        result.field.samples.emplace_back(t, alpha);
    }
    return result;
}

// ---------------------------------------------------------------------------
// measured mediator

MeasuredTrajectory run_measured_mediator(const ModelParams& p, const EvolutionConfig& cfg) {
    p.validate();
    cfg.validate();
    check_regime(cfg, Regime::MeasuredMediator, "run_measured_mediator");

    const double dt = cfg.t_max / cfg.n_steps;
    if (p.omega * dt > 0.1)
        throw ConfigError("run_measured_mediator: omega * dt must be <= 0.1; raise n_steps");

    const Eigen::Index n = p.n_cut;
    const CompositeSpace space = CompositeSpace::standard(n);
    const Operator h = build_local_hamiltonian(p).assemble();
    const HermitianPropagator prop(h);

    // Dephasing-basis rotation on the field factor.
    Matrix v = Matrix::Identity(n, n);
    if (cfg.dephasing_basis == DephasingBasis::Quadrature) {
        const Matrix a = annihilation_matrix(n);
        const Matrix x = (a + a.adjoint()) / std::sqrt(2.0);
        Eigen::SelfAdjointEigenSolver<Matrix> es(x);
        v = es.eigenvectors();
    }
    const Matrix w = embed(v, "Field", space).matrix();

    // Work in the dephasing frame: the step unitary conjugated once, the
    // dephasing then zeroes field-off-diagonal entries in place. The mass
    // marginal and the masses|field negativity are frame-invariant.
    const Matrix u_frame = w.adjoint() * prop.unitary(dt) * w;

    Vector psi0 = kron_vec(cfg.mass_state(), field_initial(p, cfg));
    Vector psi0_frame = w.adjoint() * psi0;
    Matrix rho = psi0_frame * psi0_frame.adjoint();

    const CompositeSpace mass_space = CompositeSpace::mass_pair();
    const Bipartition masses_vs_field{{"Mass1", "Mass2"}, {"Field"}};

    auto mass_block_trace = [&](const Matrix& r) {
        Matrix m = Matrix::Zero(4, 4);
        for (Eigen::Index i = 0; i < 4; ++i)
            for (Eigen::Index j = 0; j < 4; ++j)
                m(i, j) = r.block(i * n, j * n, n, n).trace();
        return m;
    };
    auto field_tail = [&](const Matrix& r) {
        // Field marginal in the dephasing frame, rotated back to Fock basis.
        Matrix f = Matrix::Zero(n, n);
        for (Eigen::Index i = 0; i < 4; ++i) f += r.block(i * n, i * n, n, n);
        const Matrix fock = v * f * v.adjoint();
        double tail = 0.0;
        for (Eigen::Index m = n - kGuardTopLevels; m < n; ++m) tail += fock(m, m).real();
        return std::max(0.0, tail);
    };
    auto frame_negativity = [&](const Matrix& r) {
        return negativity(QuantumState::mixed(space, r), masses_vs_field);
    };

    MeasuredTrajectory traj;
    traj.times.push_back(0.0);
    traj.mass_rho.push_back(mass_block_trace(rho));
    traj.fock_tail.push_back(field_tail(rho));
    traj.mediator_negativity.push_back(frame_negativity(rho));

    for (int k = 0; k < cfg.n_steps; ++k) {
        rho = u_frame * rho * u_frame.adjoint();
        rho = 0.5 * (rho + Matrix(rho.adjoint()));

        // The truncation guard watches the coherent dynamics. Dephasing in the
        // truncated quadrature basis intrinsically repopulates the top levels
        // (a position measurement injects energy), so after the first dephasing
        // the tail reflects the channel, not an escaping wave packet; the guard
        // is therefore enforced on pre-dephasing states only until dephasing has
        // acted, and continuously when dephasing is disabled.
        if (k == 0 || !cfg.dephasing_enabled) {
            if (field_tail(rho) >= kGuardThreshold)
                throw TruncationOverflow("measured-mediator: Fock tail exceeded guard; raise n_cut");
        }
        const double med_neg = frame_negativity(rho);

        if (cfg.dephasing_enabled) {
            for (Eigen::Index i = 0; i < 4; ++i)
                for (Eigen::Index j = 0; j < 4; ++j) {
                    auto block = rho.block(i * n, j * n, n, n);
                    const Vector diag = block.diagonal();
                    block.setZero();
                    block.diagonal() = diag;
                }
        }

        traj.times.push_back((k + 1) * dt);
        traj.mass_rho.push_back(mass_block_trace(rho));
        traj.fock_tail.push_back(field_tail(rho));
        traj.mediator_negativity.push_back(med_neg);
    }
    return traj;
}

} // namespace gielab
