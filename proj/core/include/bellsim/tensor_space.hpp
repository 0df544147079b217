#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bellsim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// factor id -> basis label, e.g. {"F1": "tail", "C": "tail"}.
using LabelAssignment = std::map<std::string, std::string, std::less<>>;

struct Factor {
    std::string id;
    std::vector<std::string> labels;

    std::size_t dimension() const noexcept { return labels.size(); }
};

/*!
 * Ordered tensor product of labeled finite-dimensional factors.
 *
 * Basis states are addressed by a mixed-radix index in which the leftmost
 * factor is the most significant digit. For factors (S: up,down) and
 * (E: 0,1,2) the state |down>|2> therefore has index 1*3 + 2 = 5.
 */
class TensorSpace {
public:
    explicit TensorSpace(std::vector<Factor> factors);

    std::size_t dimension() const noexcept { return dimension_; }
    std::size_t factor_count() const noexcept { return factors_.size(); }
    std::span<const Factor> factors() const noexcept { return factors_; }
    const Factor& factor(std::size_t i) const { return factors_.at(i); }

    std::optional<std::size_t> find_factor(std::string_view id) const;
    /// Throws Error for an unknown id.
    std::size_t factor_index(std::string_view id) const;
    /// Throws Error for an unknown label.
    std::size_t label_index(std::size_t factor, std::string_view label) const;

    std::size_t stride(std::size_t factor) const { return strides_.at(factor); }
    std::size_t digit(std::size_t basis_index, std::size_t factor) const
    {
        return (basis_index / strides_[factor]) % factors_[factor].dimension();
    }
    std::size_t index_of(std::span<const std::size_t> digits) const;
    /// Index of the basis state named by a complete label assignment.
    std::size_t index_of(const LabelAssignment& labels) const;

    /// Human-readable ket, e.g. "|tail,0,0,0,tail,up>".
    std::string describe(std::size_t basis_index) const;

    bool operator==(const TensorSpace& other) const;

private:
    std::vector<Factor> factors_;
    std::vector<std::size_t> strides_;
    std::size_t dimension_ = 1;
};

using SpacePtr = std::shared_ptr<const TensorSpace>;

/// Validates the factor list and fixes the index convention.
SpacePtr make_space(std::vector<Factor> factors);

/// Space formed by a subset of `parent`'s factors, in the order given.
SpacePtr subspace(const TensorSpace& parent, std::span<const std::string> factor_ids);

bool same_space(const SpacePtr& a, const SpacePtr& b);

} // namespace bellsim
