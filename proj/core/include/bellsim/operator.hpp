#pragma once

#include <Eigen/Dense>

#include "bellsim/state_vector.hpp"

namespace bellsim {

/// Tolerance used when a caller claims an operator is Hermitian.
inline constexpr double hermiticity_tolerance = 1e-12;
inline constexpr double unitarity_tolerance = 1e-10;

/*!
 * Dense linear operator on a TensorSpace.
 *
 * Energies are in units where the reduced action constant is 1, so a
 * Hamiltonian H generates exp(-i H t) directly.
 */
class Operator {
public:
    /// Throws Error if `entries` is not square of the space's dimension, or
    /// if `hermitian` is set and max|H - H^dagger| exceeds 1e-12.
    Operator(SpacePtr space, Eigen::MatrixXcd entries, bool hermitian);

    static Operator zero(const SpacePtr& space);
    static Operator identity(const SpacePtr& space);

    const SpacePtr& space() const noexcept { return space_; }
    const Eigen::MatrixXcd& entries() const noexcept { return entries_; }
    bool hermitian() const noexcept { return hermitian_; }

    double hermiticity_defect() const;
    /// max|U^dagger U - I|.
    double unitarity_defect() const;

    StateVector apply(const StateVector& psi) const;
    /// Composition (*this) * other.
    Operator compose(const Operator& other) const;

private:
    SpacePtr space_;
    Eigen::MatrixXcd entries_;
    bool hermitian_ = false;
};

/*!
 * Pads `local` with identities on every factor of `target` it does not
 * mention. The local operator's space must consist of factors of `target`
 * (same ids and labels), in any order.
 */
Operator embed_operator(const Operator& local, const SpacePtr& target);

/// <bra| op |ket>, conjugating the bra.
Complex matrix_element(const StateVector& bra, const Operator& op, const StateVector& ket);

} // namespace bellsim
