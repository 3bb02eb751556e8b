#include "gielab/entanglement.hpp"

#include <algorithm>
#include <cmath>

namespace gielab {

namespace {

void check_bipartition(const CompositeSpace& space, const Bipartition& cut) {
    std::vector<bool> seen(static_cast<std::size_t>(space.count()), false);
    auto mark = [&](const std::vector<std::string>& side) {
        for (const auto& label : side) {
            const auto idx = static_cast<std::size_t>(space.index_of(label));
            if (seen[idx]) throw ConfigError("Bipartition: label '" + label + "' repeated");
            seen[idx] = true;
        }
    };
    mark(cut.side_a);
    mark(cut.side_b);
    if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
        throw ConfigError("Bipartition: sides do not cover the space");
    if (cut.side_a.empty() || cut.side_b.empty())
        throw ConfigError("Bipartition: empty side");
}

void check_density(const Matrix& rho) {
    if (rho.rows() != rho.cols()) throw ConfigError("negativity: non-square density matrix");
    if (std::abs(rho.trace().real() - 1.0) > 1e-8 || std::abs(rho.trace().imag()) > 1e-8)
        throw ConfigError("negativity: density matrix trace != 1");
    if (hermiticity_defect(rho) > 1e-8)
        throw ConfigError("negativity: density matrix not Hermitian");
}

} // namespace

Matrix partial_transpose(const Matrix& rho, const CompositeSpace& space,
                         const std::vector<std::string>& side_a) {
    const auto& subs = space.subsystems();
    std::vector<bool> transposed(subs.size(), false);
    for (const auto& label : side_a)
        transposed[static_cast<std::size_t>(space.index_of(label))] = true;

    const Eigen::Index total = space.total_dim();
    if (rho.rows() != total) throw ConfigError("partial_transpose: size mismatch");

    // Decompose flat indices into per-subsystem digits once.
    const auto n = subs.size();
    std::vector<Eigen::Index> block(n, 1);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) block[i] *= subs[j].dim;

    Matrix out(total, total);
    std::vector<Eigen::Index> rd(n), cd(n);
    for (Eigen::Index r = 0; r < total; ++r) {
        Eigen::Index rem = r;
        for (std::size_t i = 0; i < n; ++i) { rd[i] = rem / block[i]; rem %= block[i]; }
        for (Eigen::Index c = 0; c < total; ++c) {
            rem = c;
            for (std::size_t i = 0; i < n; ++i) { cd[i] = rem / block[i]; rem %= block[i]; }
            Eigen::Index rr = 0, cc = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const Eigen::Index rdig = transposed[i] ? cd[i] : rd[i];
                const Eigen::Index cdig = transposed[i] ? rd[i] : cd[i];
                rr = rr * subs[i].dim + rdig;
                cc = cc * subs[i].dim + cdig;
            }
            out(rr, cc) = rho(r, c);
        }
    }
    return out;
}

double negativity(const QuantumState& rho, const Bipartition& cut) {
    check_bipartition(rho.space(), cut);
    const Matrix dm = rho.to_density();
    check_density(dm);
    const Matrix pt = partial_transpose(dm, rho.space(), cut.side_a);
    Eigen::SelfAdjointEigenSolver<Matrix> es(pt, Eigen::EigenvaluesOnly);
    const double trace_norm = es.eigenvalues().cwiseAbs().sum();
    return std::max(0.0, 0.5 * (trace_norm - 1.0));
}

double entanglement_entropy(const QuantumState& psi, const std::vector<std::string>& side) {
    if (!psi.is_pure())
        throw ConfigError("entanglement_entropy: input must be a pure state");
    const QuantumState reduced = partial_trace(psi, side);
    Eigen::SelfAdjointEigenSolver<Matrix> es(reduced.density(), Eigen::EigenvaluesOnly);
    double entropy = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double p = es.eigenvalues()(i);
        if (p > 1e-14) entropy -= p * std::log2(p);
    }
    return std::max(0.0, entropy);
}

double concurrence_two_qubit(const Matrix& rho) {
    if (rho.rows() != 4 || rho.cols() != 4)
        throw ConfigError("concurrence_two_qubit: expected a 4x4 density matrix");
    Matrix sy2 = Matrix::Zero(4, 4);
    // sigma_y ⊗ sigma_y in the computational basis
    sy2(0, 3) = -1.0; sy2(1, 2) = 1.0; sy2(2, 1) = 1.0; sy2(3, 0) = -1.0;

    // The spin-flip spectrum sqrt(eig(rho rho~)) equals the singular values of
    // sqrt(rho) (sy⊗sy) sqrt(rho)*, which the SVD delivers without squaring
    // away the precision of the small values.
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
    Eigen::VectorXd clamped = es.eigenvalues().cwiseMax(0.0);
    const Matrix sqrt_rho = es.eigenvectors() *
                            clamped.cwiseSqrt().cast<Complex>().asDiagonal() *
                            es.eigenvectors().adjoint();
    const Matrix m = sqrt_rho * sy2 * sqrt_rho.conjugate();
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& s = svd.singularValues();
    return std::max(0.0, s(0) - s(1) - s(2) - s(3));
}

double fock_tail_population(const Matrix& rho, const CompositeSpace& space, Eigen::Index top_k) {
    const Eigen::Index n_cut = space.dim("Field");
    if (top_k < 0 || top_k >= n_cut)
        throw ConfigError("fock_tail_population: top_k must satisfy 0 <= top_k < n_cut");
    const Matrix field = partial_trace_matrix(rho, space, {"Field"});
    double tail = 0.0;
    for (Eigen::Index n = n_cut - top_k; n < n_cut; ++n) tail += field(n, n).real();
    return std::max(0.0, tail);
}

double fock_tail_population(const QuantumState& state, Eigen::Index top_k) {
    return fock_tail_population(state.to_density(), state.space(), top_k);
}

} // namespace gielab
