#pragma once

#include <complex>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bellsim/tensor_space.hpp"

namespace bellsim {

using Complex = std::complex<double>;

/// Dense amplitude vector over the product basis of a TensorSpace.
class StateVector {
public:
    /// Zero vector.
    explicit StateVector(SpacePtr space);
    StateVector(SpacePtr space, Eigen::VectorXcd amplitudes);

    const SpacePtr& space() const noexcept { return space_; }
    std::size_t dimension() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }
    const Eigen::VectorXcd& amplitudes() const noexcept { return amplitudes_; }
    Complex operator[](std::size_t i) const { return amplitudes_[static_cast<Eigen::Index>(i)]; }

    double norm_squared() const { return amplitudes_.squaredNorm(); }
    bool is_normalized(double tolerance = 1e-10) const;
    StateVector normalized() const;

    StateVector operator+(const StateVector& other) const;
    StateVector operator-(const StateVector& other) const;
    StateVector operator*(Complex scale) const;

private:
    SpacePtr space_;
    Eigen::VectorXcd amplitudes_;
};

/// Unit vector at the basis state named by `labels` (one label per factor).
StateVector basis_state(const SpacePtr& space, const LabelAssignment& labels);

/// Componentwise linear combination; no normalization is applied.
StateVector superpose(std::span<const std::pair<Complex, StateVector>> terms);
StateVector superpose(std::initializer_list<std::pair<Complex, StateVector>> terms);

/// One term of a state on a subset of factors: amplitude times a basis ket.
struct PartialKet {
    Complex amplitude;
    LabelAssignment labels;
};
using PartialState = std::vector<PartialKet>;

/// Tensor product of partial states over disjoint factor subsets that
/// together cover every factor of `space`.
StateVector product_state(const SpacePtr& space, std::span<const PartialState> parts);
StateVector product_state(const SpacePtr& space, std::initializer_list<PartialState> parts);

/// <bra|ket>, conjugate-linear in `bra`.
Complex inner_product(const StateVector& bra, const StateVector& ket);

/// max_k |a_k - e^{i theta} b_k| for the phase theta that best aligns b with a.
double distance_up_to_phase(const StateVector& a, const StateVector& b);

void require_same_space(const StateVector& a, const StateVector& b, const char* what);

} // namespace bellsim
