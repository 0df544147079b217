#pragma once

#include <map>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bellsim/beables.hpp"
#include "bellsim/operator.hpp"

namespace bellsim {

/*!
 * Two-or-more outcome measurement modeled as a rotation of the pointer.
 *
 * Over a duration tau each |k>_sys |ready>_ptr rotates to |k>_sys |k>_ptr
 * at angular rate lambda = pi / (2 tau):
 *
 *   |k>|0>  ->  cos(lambda t) |k>|0> + sin(lambda t) |k>|k>.
 *
 * Outcome system vectors may span several factors (e.g. an entangled basis
 * of F1 (x) C), given as partial states over the same factor set.
 */
struct MeasurementRotation {
    struct Outcome {
        PartialState system_vector;
        std::string pointer_label;
    };

    std::string pointer;
    std::string ready_label = "0";
    std::vector<Outcome> outcomes;
    double duration = 1.0;

    double angular_rate() const noexcept { return std::numbers::pi / (2.0 * duration); }
    /// Factor ids spanned by the outcome system vectors, in first-seen order.
    std::vector<std::string> system_factors() const;
};

/// i lambda sum_k |k><k|_sys (x) (|k><ready| - |ready><k|)_ptr, embedded in `space`.
Operator rotation_hamiltonian(const MeasurementRotation& measurement, const SpacePtr& space);

/// Control label -> unitary acting on the target factor.
using ControlledBlocks = std::map<std::string, Eigen::MatrixXcd, std::less<>>;

/*!
 * Block-diagonal controlled unitary: on control basis state c applies
 * blocks[c] to the target factor, identity for unlisted control labels.
 * When `spec` is given, rejects results that couple different sectors.
 */
Operator controlled_preparation(const std::string& control, const std::string& target, const ControlledBlocks& blocks,
                                const SpacePtr& space, const BeableSpec* spec = nullptr);

} // namespace bellsim
