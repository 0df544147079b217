#include "bellsim/tensor_space.hpp"

#include <set>

namespace bellsim {

TensorSpace::TensorSpace(std::vector<Factor> factors)
    : factors_(std::move(factors))
{
    if (factors_.empty()) {
        throw Error("tensor space needs at least one factor");
    }
    std::set<std::string, std::less<>> ids;
    for (const auto& f : factors_) {
        if (f.id.empty()) {
            throw Error("factor id must not be empty");
        }
        if (!ids.insert(f.id).second) {
            throw Error("duplicate factor id '" + f.id + "'");
        }
        if (f.dimension() < 2) {
            throw Error("factor '" + f.id + "' has dimension < 2");
        }
        std::set<std::string, std::less<>> labels;
        for (const auto& l : f.labels) {
            if (l.empty()) {
                throw Error("factor '" + f.id + "' has an empty basis label");
            }
            if (!labels.insert(l).second) {
                throw Error("duplicate basis label '" + l + "' in factor '" + f.id + "'");
            }
        }
    }

    strides_.resize(factors_.size());
    std::size_t stride = 1;
    for (std::size_t i = factors_.size(); i-- > 0;) {
        strides_[i] = stride;
        stride *= factors_[i].dimension();
    }
    dimension_ = stride;
}

std::optional<std::size_t> TensorSpace::find_factor(std::string_view id) const
{
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (factors_[i].id == id) {
            return i;
        }
    }
    return std::nullopt;
}

std::size_t TensorSpace::factor_index(std::string_view id) const
{
    if (auto i = find_factor(id)) {
        return *i;
    }
    throw Error("unknown factor '" + std::string(id) + "'");
}

std::size_t TensorSpace::label_index(std::size_t factor, std::string_view label) const
{
    const auto& labels = factors_.at(factor).labels;
    for (std::size_t k = 0; k < labels.size(); ++k) {
        if (labels[k] == label) {
            return k;
        }
    }
    throw Error("unknown label '" + std::string(label) + "' for factor '" + factors_[factor].id + "'");
}

std::size_t TensorSpace::index_of(std::span<const std::size_t> digits) const
{
    if (digits.size() != factors_.size()) {
        throw Error("digit count does not match factor count");
    }
    std::size_t index = 0;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (digits[i] >= factors_[i].dimension()) {
            throw Error("digit out of range for factor '" + factors_[i].id + "'");
        }
        index += digits[i] * strides_[i];
    }
    return index;
}

std::size_t TensorSpace::index_of(const LabelAssignment& labels) const
{
    std::vector<std::size_t> digits(factors_.size());
    std::size_t assigned = 0;
    for (const auto& [id, label] : labels) {
        const auto f = factor_index(id);
        digits[f] = label_index(f, label);
        ++assigned;
    }
    if (assigned != factors_.size()) {
        throw Error("basis state must assign exactly one label to every factor");
    }
    return index_of(digits);
}

std::string TensorSpace::describe(std::size_t basis_index) const
{
    std::string out = "|";
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (i) {
            out += ',';
        }
        out += factors_[i].labels[digit(basis_index, i)];
    }
    out += '>';
    return out;
}

bool TensorSpace::operator==(const TensorSpace& other) const
{
    if (factors_.size() != other.factors_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (factors_[i].id != other.factors_[i].id || factors_[i].labels != other.factors_[i].labels) {
            return false;
        }
    }
    return true;
}

SpacePtr make_space(std::vector<Factor> factors)
{
    return std::make_shared<const TensorSpace>(std::move(factors));
}

SpacePtr subspace(const TensorSpace& parent, std::span<const std::string> factor_ids)
{
    std::vector<Factor> factors;
    factors.reserve(factor_ids.size());
    for (const auto& id : factor_ids) {
        factors.push_back(parent.factor(parent.factor_index(id)));
    }
    return make_space(std::move(factors));
}

bool same_space(const SpacePtr& a, const SpacePtr& b)
{
    return a && b && (a == b || *a == *b);
}

} // namespace bellsim
