#include "bellsim/state_vector.hpp"

#include <cmath>
#include <set>

namespace bellsim {

StateVector::StateVector(SpacePtr space)
    : space_(std::move(space))
{
    if (!space_) {
        throw Error("state vector needs a space");
    }
    amplitudes_ = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(space_->dimension()));
}

StateVector::StateVector(SpacePtr space, Eigen::VectorXcd amplitudes)
    : space_(std::move(space)), amplitudes_(std::move(amplitudes))
{
    if (!space_) {
        throw Error("state vector needs a space");
    }
    if (static_cast<std::size_t>(amplitudes_.size()) != space_->dimension()) {
        throw Error("amplitude count does not match space dimension");
    }
}

bool StateVector::is_normalized(double tolerance) const
{
    return std::abs(norm_squared() - 1.0) <= tolerance;
}

StateVector StateVector::normalized() const
{
    const double n = amplitudes_.norm();
    if (n == 0.0) {
        throw Error("cannot normalize the zero vector");
    }
    return StateVector(space_, amplitudes_ / n);
}

StateVector StateVector::operator+(const StateVector& other) const
{
    require_same_space(*this, other, "addition");
    return StateVector(space_, amplitudes_ + other.amplitudes_);
}

StateVector StateVector::operator-(const StateVector& other) const
{
    require_same_space(*this, other, "subtraction");
    return StateVector(space_, amplitudes_ - other.amplitudes_);
}

StateVector StateVector::operator*(Complex scale) const
{
    return StateVector(space_, amplitudes_ * scale);
}

void require_same_space(const StateVector& a, const StateVector& b, const char* what)
{
    if (!same_space(a.space(), b.space())) {
        throw Error(std::string("mismatched spaces in ") + what);
    }
}

StateVector basis_state(const SpacePtr& space, const LabelAssignment& labels)
{
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(space->dimension()));
    amps[static_cast<Eigen::Index>(space->index_of(labels))] = 1.0;
    return StateVector(space, std::move(amps));
}

StateVector superpose(std::span<const std::pair<Complex, StateVector>> terms)
{
    if (terms.empty()) {
        throw Error("superpose needs at least one term");
    }
    const auto& space = terms.front().second.space();
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(space->dimension()));
    for (const auto& [c, v] : terms) {
        require_same_space(terms.front().second, v, "superpose");
        amps += c * v.amplitudes();
    }
    return StateVector(space, std::move(amps));
}

StateVector superpose(std::initializer_list<std::pair<Complex, StateVector>> terms)
{
    return superpose(std::span<const std::pair<Complex, StateVector>>(terms.begin(), terms.size()));
}

StateVector product_state(const SpacePtr& space, std::span<const PartialState> parts)
{
    // Accumulate the product term by term; each part must name the same
    // factor set in all of its kets and the parts must be disjoint.
    std::vector<std::pair<Complex, LabelAssignment>> terms{{Complex{1.0}, {}}};
    std::set<std::string, std::less<>> covered;
    for (const auto& part : parts) {
        if (part.empty()) {
            throw Error("product_state: empty partial state");
        }
        for (const auto& [id, label] : part.front().labels) {
            if (!covered.insert(id).second) {
                throw Error("product_state: factor '" + id + "' appears in more than one part");
            }
        }
        std::vector<std::pair<Complex, LabelAssignment>> next;
        next.reserve(terms.size() * part.size());
        for (const auto& [c, labels] : terms) {
            for (const auto& ket : part) {
                if (ket.labels.size() != part.front().labels.size()) {
                    throw Error("product_state: kets of one part must cover the same factors");
                }
                LabelAssignment merged = labels;
                for (const auto& [id, label] : ket.labels) {
                    if (!part.front().labels.contains(id)) {
                        throw Error("product_state: kets of one part must cover the same factors");
                    }
                    merged[id] = label;
                }
                next.emplace_back(c * ket.amplitude, std::move(merged));
            }
        }
        terms = std::move(next);
    }

    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(space->dimension()));
    for (const auto& [c, labels] : terms) {
        amps[static_cast<Eigen::Index>(space->index_of(labels))] += c;
    }
    return StateVector(space, std::move(amps));
}

StateVector product_state(const SpacePtr& space, std::initializer_list<PartialState> parts)
{
    return product_state(space, std::span<const PartialState>(parts.begin(), parts.size()));
}

Complex inner_product(const StateVector& bra, const StateVector& ket)
{
    require_same_space(bra, ket, "inner product");
    return bra.amplitudes().dot(ket.amplitudes());
}

double distance_up_to_phase(const StateVector& a, const StateVector& b)
{
    require_same_space(a, b, "phase comparison");
    const Complex overlap = b.amplitudes().dot(a.amplitudes());
    const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex{1.0};
    return (a.amplitudes() - phase * b.amplitudes()).cwiseAbs().maxCoeff();
}

} // namespace bellsim
