#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bellsim/state_vector.hpp"

namespace bellsim {

using SectorId = std::uint32_t;

/// One joint assignment of beable values, stored as label indices in the
/// order of BeableSpec::beable_factors().
struct Sector {
    std::vector<std::size_t> values;

    auto operator<=>(const Sector&) const = default;
};

/// Weights below this are treated as empty sectors.
inline constexpr double empty_sector_weight = 1e-20;

/*!
 * Declares which factors of a space are beables.
 *
 * Sectors (viable subspaces) are numbered lexicographically in factor order
 * then label order, so SectorId 0 is every beable at its first label.
 */
class BeableSpec {
public:
    BeableSpec(SpacePtr space, const std::vector<std::string>& beable_ids);

    const SpacePtr& space() const noexcept { return space_; }
    /// Indices into the space's factor list, ascending.
    const std::vector<std::size_t>& beable_factors() const noexcept { return beables_; }
    std::size_t sector_count() const noexcept { return sector_count_; }

    SectorId sector_of_basis(std::size_t basis_index) const { return sector_of_basis_[basis_index]; }
    /// Basis indices spanning a sector's subspace.
    const std::vector<std::size_t>& basis_of(SectorId id) const { return basis_of_.at(id); }

    Sector sector(SectorId id) const;
    SectorId id_of(const Sector& sector) const;
    /// Label index of the beable at `position` within beable_factors().
    std::size_t value(SectorId id, std::size_t position) const;
    /// Label of factor `factor_id` in the sector; the factor must be a beable.
    const std::string& label(SectorId id, std::string_view factor_id) const;
    /// Position of a factor within beable_factors(); throws if not a beable.
    std::size_t position_of(std::string_view factor_id) const;

    /// Builds a sector from factor id -> label (every beable required).
    SectorId sector_from_labels(const LabelAssignment& labels) const;

    /// Ordered label tuple, e.g. "tail,+,ok,0".
    std::string to_string(SectorId id) const;
    SectorId parse(std::string_view text) const;

private:
    SpacePtr space_;
    std::vector<std::size_t> beables_;
    std::vector<std::size_t> sector_strides_;
    std::size_t sector_count_ = 1;
    std::vector<SectorId> sector_of_basis_;
    std::vector<std::vector<std::size_t>> basis_of_;
};

struct ViableComponent {
    SectorId sector;
    StateVector component;
    double weight;
};

/// Probability (or weight) per SectorId.
using SectorDistribution = std::vector<double>;

/// Every sector in SectorId order.
std::vector<Sector> sectors(const BeableSpec& spec);

/// Projections of psi onto each sector with weight >= 1e-20.
std::vector<ViableComponent> decompose(const StateVector& psi, const BeableSpec& spec);

/// Squared norm of every sector's projection; no normalization check.
SectorDistribution sector_weights(const Eigen::VectorXcd& amplitudes, const BeableSpec& spec);

/// Born weights of a normalized state; throws Error if |<psi|psi> - 1| > 1e-10.
SectorDistribution born_weights(const StateVector& psi, const BeableSpec& spec);

/// Marginal of a sector distribution on some beable factors, keyed by their
/// label indices in the order the factors are given.
std::map<std::vector<std::size_t>, double> marginal(const SectorDistribution& distribution, const BeableSpec& spec,
                                                    const std::vector<std::string>& factor_ids);

} // namespace bellsim
