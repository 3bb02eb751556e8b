#include "gielab/hilbert.hpp"

#include <algorithm>
#include <cmath>

namespace gielab {

namespace {

std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) {
        if (!out.empty()) out += ", ";
        out += s;
    }
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// CompositeSpace

CompositeSpace::CompositeSpace(std::vector<Subsystem> subsystems)
    : subsystems_(std::move(subsystems)) {
    if (subsystems_.empty()) throw ConfigError("CompositeSpace: no subsystems");
    for (std::size_t i = 0; i < subsystems_.size(); ++i) {
        const auto& s = subsystems_[i];
        if (s.dim < 1) throw ConfigError("CompositeSpace: dim < 1 for '" + s.label + "'");
        for (std::size_t j = i + 1; j < subsystems_.size(); ++j) {
            if (subsystems_[j].label == s.label)
                throw ConfigError("CompositeSpace: duplicate label '" + s.label + "'");
        }
        total_dim_ *= s.dim;
    }
}

CompositeSpace CompositeSpace::standard(Eigen::Index n_cut) {
    return CompositeSpace({{"Mass1", 2}, {"Mass2", 2}, {"Field", n_cut}});
}

CompositeSpace CompositeSpace::mass_pair() {
    return CompositeSpace({{"Mass1", 2}, {"Mass2", 2}});
}

CompositeSpace CompositeSpace::single(std::string label, Eigen::Index dim) {
    return CompositeSpace({{std::move(label), dim}});
}

bool CompositeSpace::has(std::string_view label) const {
    return std::any_of(subsystems_.begin(), subsystems_.end(),
                       [&](const Subsystem& s) { return s.label == label; });
}

Eigen::Index CompositeSpace::index_of(std::string_view label) const {
    for (std::size_t i = 0; i < subsystems_.size(); ++i)
        if (subsystems_[i].label == label) return static_cast<Eigen::Index>(i);
    throw ConfigError("unknown subsystem label '" + std::string(label) + "'");
}

Eigen::Index CompositeSpace::dim(std::string_view label) const {
    return subsystems_[static_cast<std::size_t>(index_of(label))].dim;
}

bool CompositeSpace::operator==(const CompositeSpace& other) const {
    if (subsystems_.size() != other.subsystems_.size()) return false;
    for (std::size_t i = 0; i < subsystems_.size(); ++i) {
        if (subsystems_[i].label != other.subsystems_[i].label ||
            subsystems_[i].dim != other.subsystems_[i].dim)
            return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Operator / QuantumState

Operator::Operator(CompositeSpace space, Matrix matrix, bool hermitian)
    : space_(std::move(space)), matrix_(std::move(matrix)), hermitian_(hermitian) {
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() != space_.total_dim())
        throw ConfigError("Operator: matrix side does not match space dimension");
    if (hermitian_ && hermiticity_defect(matrix_) > kHermitianTol)
        throw ConfigError("Operator: hermitian claim violated beyond 1e-12");
}

QuantumState::QuantumState(CompositeSpace space, Vector psi)
    : space_(std::move(space)), pure_(true), psi_(std::move(psi)) {
    if (psi_.size() != space_.total_dim())
        throw ConfigError("QuantumState: vector size does not match space");
    if (std::abs(psi_.norm() - 1.0) > kStateTol)
        throw ConfigError("QuantumState: pure state not normalized");
}

QuantumState::QuantumState(CompositeSpace space, Matrix rho)
    : space_(std::move(space)), pure_(false), rho_(std::move(rho)) {
    if (rho_.rows() != rho_.cols() || rho_.rows() != space_.total_dim())
        throw ConfigError("QuantumState: density matrix size does not match space");
    if (std::abs(rho_.trace().real() - 1.0) > kStateTol ||
        std::abs(rho_.trace().imag()) > kStateTol)
        throw ConfigError("QuantumState: density matrix trace != 1");
    if (hermiticity_defect(rho_) > 1e-8)
        throw ConfigError("QuantumState: density matrix not Hermitian");
}

QuantumState QuantumState::pure(CompositeSpace space, Vector psi) {
    return QuantumState(std::move(space), std::move(psi));
}

QuantumState QuantumState::mixed(CompositeSpace space, Matrix rho) {
    return QuantumState(std::move(space), std::move(rho));
}

const Vector& QuantumState::vector() const {
    if (!pure_) throw ConfigError("QuantumState: vector() on a mixed state");
    return psi_;
}

const Matrix& QuantumState::density() const {
    if (pure_) throw ConfigError("QuantumState: density() on a pure state");
    return rho_;
}

Matrix QuantumState::to_density() const {
    if (pure_) return psi_ * psi_.adjoint();
    return rho_;
}

double QuantumState::min_eigenvalue() const {
    if (pure_) return 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

// ---------------------------------------------------------------------------
// Constructors

Matrix annihilation_matrix(Eigen::Index n_cut) {
    if (n_cut < 2) throw ConfigError("annihilation: n_cut must be >= 2");
    Matrix a = Matrix::Zero(n_cut, n_cut);
    for (Eigen::Index m = 1; m < n_cut; ++m)
        a(m - 1, m) = std::sqrt(static_cast<double>(m));
    return a;
}

Operator annihilation(Eigen::Index n_cut) {
    return Operator(CompositeSpace::single("Field", n_cut), annihilation_matrix(n_cut));
}

Matrix branch_projector() {
    Matrix n = Matrix::Zero(2, 2);
    n(1, 1) = 1.0;
    return n;
}

Vector fock_state(Eigen::Index n_cut, Eigen::Index n) {
    if (n < 0 || n >= n_cut) throw ConfigError("fock_state: level outside cutoff");
    Vector v = Vector::Zero(n_cut);
    v(n) = 1.0;
    return v;
}

Vector coherent_state(Eigen::Index n_cut, Complex alpha) {
    Vector v(n_cut);
    // amplitudes alpha^n / sqrt(n!), built iteratively to avoid overflow
    Complex amp = 1.0;
    v(0) = amp;
    for (Eigen::Index n = 1; n < n_cut; ++n) {
        amp *= alpha / std::sqrt(static_cast<double>(n));
        v(n) = amp;
    }
    v.normalize();
    return v;
}

Vector plus_state() {
    Vector v(2);
    v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    return v;
}

// ---------------------------------------------------------------------------
// embed

Operator embed(const Matrix& factor, std::string_view target_label, const CompositeSpace& space) {
    const Eigen::Index target = space.index_of(target_label);
    const auto& subs = space.subsystems();
    if (factor.rows() != factor.cols() || factor.rows() != subs[static_cast<std::size_t>(target)].dim)
        throw ConfigError("embed: factor side does not match dim of '" +
                          std::string(target_label) + "'");

    Matrix out = Matrix::Ones(1, 1);
    for (std::size_t i = 0; i < subs.size(); ++i) {
        const Matrix& f = (static_cast<Eigen::Index>(i) == target)
                              ? factor
                              : Matrix(Matrix::Identity(subs[i].dim, subs[i].dim));
        Matrix next(out.rows() * f.rows(), out.cols() * f.cols());
        for (Eigen::Index r = 0; r < out.rows(); ++r)
            for (Eigen::Index c = 0; c < out.cols(); ++c)
                next.block(r * f.rows(), c * f.cols(), f.rows(), f.cols()) = out(r, c) * f;
        out = std::move(next);
    }
    return Operator(space, std::move(out));
}

// ---------------------------------------------------------------------------
// partial trace

Matrix partial_trace_matrix(const Matrix& rho, const CompositeSpace& space,
                            const std::vector<std::string>& keep) {
    if (keep.empty()) throw ConfigError("partial_trace: empty keep list");
    const auto& subs = space.subsystems();
    std::vector<bool> kept(subs.size(), false);
    for (const auto& label : keep) {
        kept[static_cast<std::size_t>(space.index_of(label))] = true;
    }

    Eigen::Index keep_dim = 1, trace_dim = 1;
    for (std::size_t i = 0; i < subs.size(); ++i)
        (kept[i] ? keep_dim : trace_dim) *= subs[i].dim;

    // Row index decomposition: for a flat index x, kept-part k(x) and traced-part
    // t(x), both in canonical order.
    const Eigen::Index total = space.total_dim();
    std::vector<Eigen::Index> kpart(static_cast<std::size_t>(total)),
        tpart(static_cast<std::size_t>(total));
    for (Eigen::Index x = 0; x < total; ++x) {
        Eigen::Index rem = x, k = 0, t = 0;
        for (std::size_t i = 0; i < subs.size(); ++i) {
            Eigen::Index block = 1;
            for (std::size_t j = i + 1; j < subs.size(); ++j) block *= subs[j].dim;
            const Eigen::Index digit = rem / block;
            rem %= block;
            if (kept[i]) k = k * subs[i].dim + digit;
            else t = t * subs[i].dim + digit;
        }
        kpart[static_cast<std::size_t>(x)] = k;
        tpart[static_cast<std::size_t>(x)] = t;
    }

    Matrix out = Matrix::Zero(keep_dim, keep_dim);
    for (Eigen::Index r = 0; r < total; ++r) {
        for (Eigen::Index c = 0; c < total; ++c) {
            if (tpart[static_cast<std::size_t>(r)] != tpart[static_cast<std::size_t>(c)]) continue;
            out(kpart[static_cast<std::size_t>(r)], kpart[static_cast<std::size_t>(c)]) += rho(r, c);
        }
    }
    return out;
}

QuantumState partial_trace(const QuantumState& state, const std::vector<std::string>& keep) {
    if (keep.empty()) throw ConfigError("partial_trace: empty keep list (" + join(keep) + ")");
    const auto& space = state.space();
    std::vector<Subsystem> kept_subs;
    for (const auto& s : space.subsystems()) {
        if (std::find(keep.begin(), keep.end(), s.label) != keep.end())
            kept_subs.push_back(s);
    }
    // Validates labels even when all are kept.
    Matrix reduced = partial_trace_matrix(state.to_density(), space, keep);
    return QuantumState::mixed(CompositeSpace(std::move(kept_subs)), std::move(reduced));
}

// ---------------------------------------------------------------------------
// evolution

double hermiticity_defect(const Matrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

HermitianPropagator::HermitianPropagator(const Operator& hamiltonian) {
    if (hermiticity_defect(hamiltonian.matrix()) > kHermitianTol)
        throw ConfigError("HermitianPropagator: generator is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(hamiltonian.matrix());
    eigenvalues_ = es.eigenvalues();
    eigenvectors_ = es.eigenvectors();
}

Vector HermitianPropagator::apply(double t, const Vector& psi) const {
    const Complex minus_i(0.0, -1.0);
    Vector phases = (minus_i * t * eigenvalues_.cast<Complex>().array()).exp();
    return eigenvectors_ * (phases.asDiagonal() * (eigenvectors_.adjoint() * psi));
}

Matrix HermitianPropagator::apply_density(double t, const Matrix& rho) const {
    Matrix u = unitary(t);
    return u * rho * u.adjoint();
}

Matrix HermitianPropagator::unitary(double t) const {
    const Complex minus_i(0.0, -1.0);
    Vector phases = (minus_i * t * eigenvalues_.cast<Complex>().array()).exp();
    return eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint();
}

QuantumState evolve_unitary(const Operator& hamiltonian, double t, const QuantumState& state) {
    if (!(hamiltonian.space() == state.space()))
        throw ConfigError("evolve_unitary: operator and state live on different spaces");
    HermitianPropagator prop(hamiltonian);
    if (state.is_pure()) {
        Vector out = prop.apply(t, state.vector());
        const double drift = std::abs(out.norm() - 1.0);
        if (drift > kStateTol)
            throw NumericalGuardError("evolve_unitary: norm drift " + std::to_string(drift));
        return QuantumState::pure(state.space(), std::move(out));
    }
    return QuantumState::mixed(state.space(), prop.apply_density(t, state.density()));
}

} // namespace gielab
