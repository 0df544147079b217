#include "bellsim/beables.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace bellsim {

BeableSpec::BeableSpec(SpacePtr space, const std::vector<std::string>& beable_ids)
    : space_(std::move(space))
{
    if (!space_) {
        throw Error("beable spec needs a space");
    }
    if (beable_ids.empty()) {
        throw Error("at least one beable factor is required");
    }
    std::set<std::size_t> chosen;
    for (const auto& id : beable_ids) {
        if (!chosen.insert(space_->factor_index(id)).second) {
            throw Error("beable factor '" + id + "' listed twice");
        }
    }
    beables_.assign(chosen.begin(), chosen.end());

    sector_strides_.resize(beables_.size());
    for (std::size_t i = beables_.size(); i-- > 0;) {
        sector_strides_[i] = sector_count_;
        sector_count_ *= space_->factor(beables_[i]).dimension();
    }

    sector_of_basis_.resize(space_->dimension());
    basis_of_.resize(sector_count_);
    for (std::size_t b = 0; b < space_->dimension(); ++b) {
        std::size_t id = 0;
        for (std::size_t i = 0; i < beables_.size(); ++i) {
            id += space_->digit(b, beables_[i]) * sector_strides_[i];
        }
        sector_of_basis_[b] = static_cast<SectorId>(id);
        basis_of_[id].push_back(b);
    }
}

Sector BeableSpec::sector(SectorId id) const
{
    if (id >= sector_count_) {
        throw Error("sector id out of range");
    }
    Sector s;
    s.values.resize(beables_.size());
    for (std::size_t i = 0; i < beables_.size(); ++i) {
        s.values[i] = value(id, i);
    }
    return s;
}

SectorId BeableSpec::id_of(const Sector& sector) const
{
    if (sector.values.size() != beables_.size()) {
        throw Error("sector has the wrong number of beable values");
    }
    std::size_t id = 0;
    for (std::size_t i = 0; i < beables_.size(); ++i) {
        if (sector.values[i] >= space_->factor(beables_[i]).dimension()) {
            throw Error("sector value out of range");
        }
        id += sector.values[i] * sector_strides_[i];
    }
    return static_cast<SectorId>(id);
}

std::size_t BeableSpec::value(SectorId id, std::size_t position) const
{
    return (id / sector_strides_[position]) % space_->factor(beables_[position]).dimension();
}

std::size_t BeableSpec::position_of(std::string_view factor_id) const
{
    const auto f = space_->factor_index(factor_id);
    const auto it = std::find(beables_.begin(), beables_.end(), f);
    if (it == beables_.end()) {
        throw Error("factor '" + std::string(factor_id) + "' is not a beable");
    }
    return static_cast<std::size_t>(it - beables_.begin());
}

const std::string& BeableSpec::label(SectorId id, std::string_view factor_id) const
{
    const auto pos = position_of(factor_id);
    return space_->factor(beables_[pos]).labels[value(id, pos)];
}

SectorId BeableSpec::sector_from_labels(const LabelAssignment& labels) const
{
    Sector s;
    s.values.resize(beables_.size());
    std::size_t assigned = 0;
    for (const auto& [id, lab] : labels) {
        const auto pos = position_of(id);
        s.values[pos] = space_->label_index(beables_[pos], lab);
        ++assigned;
    }
    if (assigned != beables_.size()) {
        throw Error("sector must assign every beable");
    }
    return id_of(s);
}

std::string BeableSpec::to_string(SectorId id) const
{
    std::string out;
    for (std::size_t i = 0; i < beables_.size(); ++i) {
        if (i) {
            out += ',';
        }
        out += space_->factor(beables_[i]).labels[value(id, i)];
    }
    return out;
}

SectorId BeableSpec::parse(std::string_view text) const
{
    Sector s;
    std::size_t begin = 0;
    for (std::size_t i = 0; i < beables_.size(); ++i) {
        const auto end = text.find(',', begin);
        const auto piece = text.substr(begin, end == std::string_view::npos ? text.npos : end - begin);
        s.values.push_back(space_->label_index(beables_[i], piece));
        if (end == std::string_view::npos) {
            if (i + 1 != beables_.size()) {
                throw Error("sector '" + std::string(text) + "' has too few labels");
            }
            return id_of(s);
        }
        begin = end + 1;
    }
    throw Error("sector '" + std::string(text) + "' has too many labels");
}

std::vector<Sector> sectors(const BeableSpec& spec)
{
    std::vector<Sector> out;
    out.reserve(spec.sector_count());
    for (SectorId id = 0; id < spec.sector_count(); ++id) {
        out.push_back(spec.sector(id));
    }
    return out;
}

std::vector<ViableComponent> decompose(const StateVector& psi, const BeableSpec& spec)
{
    if (!same_space(psi.space(), spec.space())) {
        throw Error("decompose: state and beable spec use different spaces");
    }
    std::vector<ViableComponent> out;
    for (SectorId id = 0; id < spec.sector_count(); ++id) {
        Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(psi.dimension()));
        double weight = 0.0;
        for (const auto b : spec.basis_of(id)) {
            const auto k = static_cast<Eigen::Index>(b);
            amps[k] = psi.amplitudes()[k];
            weight += std::norm(amps[k]);
        }
        if (weight >= empty_sector_weight) {
            out.push_back(ViableComponent{id, StateVector(psi.space(), std::move(amps)), weight});
        }
    }
    return out;
}

SectorDistribution sector_weights(const Eigen::VectorXcd& amplitudes, const BeableSpec& spec)
{
    SectorDistribution w(spec.sector_count(), 0.0);
    for (Eigen::Index b = 0; b < amplitudes.size(); ++b) {
        w[spec.sector_of_basis(static_cast<std::size_t>(b))] += std::norm(amplitudes[b]);
    }
    return w;
}

SectorDistribution born_weights(const StateVector& psi, const BeableSpec& spec)
{
    if (!same_space(psi.space(), spec.space())) {
        throw Error("born_weights: state and beable spec use different spaces");
    }
    if (!psi.is_normalized(1e-10)) {
        throw Error("born_weights: state is not normalized (norm^2 = " + std::to_string(psi.norm_squared()) + ")");
    }
    return sector_weights(psi.amplitudes(), spec);
}

std::map<std::vector<std::size_t>, double> marginal(const SectorDistribution& distribution, const BeableSpec& spec,
                                                    const std::vector<std::string>& factor_ids)
{
    if (distribution.size() != spec.sector_count()) {
        throw Error("marginal: distribution size does not match sector count");
    }
    std::vector<std::size_t> positions;
    for (const auto& id : factor_ids) {
        positions.push_back(spec.position_of(id));
    }
    std::map<std::vector<std::size_t>, double> out;
    std::vector<std::size_t> key(positions.size());
    for (SectorId id = 0; id < spec.sector_count(); ++id) {
        if (distribution[id] == 0.0) {
            continue;
        }
        for (std::size_t i = 0; i < positions.size(); ++i) {
            key[i] = spec.value(id, positions[i]);
        }
        out[key] += distribution[id];
    }
    return out;
}

} // namespace bellsim
