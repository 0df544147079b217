#include "bellsim/propagator.hpp"

#include <algorithm>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace bellsim {

namespace {

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t i)
{
    while (parent[i] != i) {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    return i;
}

} // namespace

Propagator::Propagator(const Operator& hamiltonian)
    : space_(hamiltonian.space())
{
    if (!hamiltonian.hermitian()) {
        throw Error("propagator requires a Hermitian operator");
    }
    const auto& H = hamiltonian.entries();
    const auto n = static_cast<std::size_t>(H.rows());

    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t r = 0; r < c; ++r) {
            if (H(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) != Complex{}) {
                const auto a = find_root(parent, r);
                const auto b = find_root(parent, c);
                if (a != b) {
                    parent[std::max(a, b)] = std::min(a, b);
                }
            }
        }
    }

    std::vector<std::vector<Eigen::Index>> members(n);
    for (std::size_t i = 0; i < n; ++i) {
        members[find_root(parent, i)].push_back(static_cast<Eigen::Index>(i));
    }

    for (auto& idx : members) {
        if (idx.empty()) {
            continue;
        }
        if (idx.size() == 1 && H(idx[0], idx[0]) == Complex{}) {
            continue;
        }
        const auto m = static_cast<Eigen::Index>(idx.size());
        Eigen::MatrixXcd sub(m, m);
        for (Eigen::Index a = 0; a < m; ++a) {
            for (Eigen::Index b = 0; b < m; ++b) {
                sub(a, b) = H(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sub);
        if (solver.info() != Eigen::Success) {
            throw Error("eigendecomposition of a Hamiltonian block failed");
        }
        blocks_.push_back(Block{std::move(idx), solver.eigenvalues(), solver.eigenvectors()});
    }
}

std::size_t Propagator::largest_block() const noexcept
{
    std::size_t largest = 1;
    for (const auto& b : blocks_) {
        largest = std::max(largest, b.indices.size());
    }
    return largest;
}

void Propagator::apply(double duration, Eigen::VectorXcd& amplitudes) const
{
    Eigen::VectorXcd local;
    for (const auto& block : blocks_) {
        const auto m = static_cast<Eigen::Index>(block.indices.size());
        local.resize(m);
        for (Eigen::Index a = 0; a < m; ++a) {
            local[a] = amplitudes[block.indices[static_cast<std::size_t>(a)]];
        }
        Eigen::VectorXcd coeffs = block.vectors.adjoint() * local;
        for (Eigen::Index k = 0; k < m; ++k) {
            coeffs[k] *= std::polar(1.0, -block.energies[k] * duration);
        }
        local = block.vectors * coeffs;
        for (Eigen::Index a = 0; a < m; ++a) {
            amplitudes[block.indices[static_cast<std::size_t>(a)]] = local[a];
        }
    }
}

StateVector Propagator::apply(double duration, const StateVector& psi) const
{
    if (!same_space(space_, psi.space())) {
        throw Error("propagator and state live in different spaces");
    }
    Eigen::VectorXcd amps = psi.amplitudes();
    apply(duration, amps);
    return StateVector(psi.space(), std::move(amps));
}

StateVector evolve_unitary(const Operator& hamiltonian, double duration, const StateVector& psi)
{
    if (!(duration >= 0.0)) {
        throw Error("evolve_unitary: duration must be non-negative");
    }
    if (!hamiltonian.hermitian() || hamiltonian.hermiticity_defect() > hermiticity_tolerance) {
        throw Error("evolve_unitary: Hamiltonian is not Hermitian");
    }
    return Propagator(hamiltonian).apply(duration, psi);
}

} // namespace bellsim
