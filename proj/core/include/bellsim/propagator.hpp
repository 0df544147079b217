#pragma once

#include <vector>

#include <Eigen/Dense>

#include "bellsim/operator.hpp"

namespace bellsim {

/*!
 * Exact propagator exp(-i H t) for a fixed Hermitian H.
 *
 * H is split into the connected components of its nonzero pattern and each
 * block is diagonalized once; applying the propagator for any duration then
 * costs one small change of basis per block. Rotation-measurement
 * Hamiltonians decompose into blocks of size <= 4, so this is much cheaper
 * than a dense exponential of the full matrix while remaining exact.
 */
class Propagator {
public:
    /// Throws Error unless `hamiltonian` is flagged Hermitian.
    explicit Propagator(const Operator& hamiltonian);

    StateVector apply(double duration, const StateVector& psi) const;
    /// In-place variant on raw amplitudes; no space check.
    void apply(double duration, Eigen::VectorXcd& amplitudes) const;

    std::size_t block_count() const noexcept { return blocks_.size(); }
    std::size_t largest_block() const noexcept;

private:
    struct Block {
        std::vector<Eigen::Index> indices;
        Eigen::VectorXd energies;
        Eigen::MatrixXcd vectors;
    };

    SpacePtr space_;
    std::vector<Block> blocks_; // stationary 1x1 zero blocks are omitted
};

/// exp(-i H duration) psi. H must be Hermitian and duration >= 0.
StateVector evolve_unitary(const Operator& hamiltonian, double duration, const StateVector& psi);

} // namespace bellsim
