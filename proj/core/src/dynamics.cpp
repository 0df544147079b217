#include "bellsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace bellsim {

SectorCurrents::SectorCurrents(const Operator& hamiltonian, const BeableSpec& spec)
    : sectors_(spec.sector_count())
{
    if (!same_space(hamiltonian.space(), spec.space())) {
        throw Error("sector currents: Hamiltonian and beable spec use different spaces");
    }
    const auto& H = hamiltonian.entries();
    basis_sector_.resize(spec.space()->dimension());
    for (std::size_t b = 0; b < basis_sector_.size(); ++b) {
        basis_sector_[b] = spec.sector_of_basis(b);
    }
    std::vector<std::set<SectorId>> coupled(sectors_);
    for (Eigen::Index c = 0; c < H.cols(); ++c) {
        const auto sc = spec.sector_of_basis(static_cast<std::size_t>(c));
        for (Eigen::Index r = 0; r < H.rows(); ++r) {
            const Complex v = H(r, c);
            if (v == Complex{}) {
                continue;
            }
            const auto sr = spec.sector_of_basis(static_cast<std::size_t>(r));
            if (sr == sc) {
                continue;
            }
            entries_.push_back(Entry{static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c), sr, sc, v});
            coupled[sc].insert(sr);
        }
    }
    coupled_.resize(sectors_);
    for (std::size_t i = 0; i < sectors_; ++i) {
        coupled_[i].assign(coupled[i].begin(), coupled[i].end());
    }
    weights_.assign(sectors_, 0.0);
    currents_.assign(sectors_ * sectors_, 0.0);
}

void SectorCurrents::evaluate(const Eigen::VectorXcd& amplitudes)
{
    std::fill(weights_.begin(), weights_.end(), 0.0);
    for (const auto& e : entries_) {
        currents_[e.row_sector * sectors_ + e.col_sector] = 0.0;
    }
    for (const auto& e : entries_) {
        const Complex z = std::conj(amplitudes[e.row]) * e.value * amplitudes[e.col];
        currents_[e.row_sector * sectors_ + e.col_sector] += 2.0 * z.imag();
    }
    for (std::size_t b = 0; b < basis_sector_.size(); ++b) {
        weights_[basis_sector_[b]] += std::norm(amplitudes[static_cast<Eigen::Index>(b)]);
    }
}

double SectorCurrents::outflow(SectorId from) const
{
    double total = 0.0;
    for (const auto j : coupled_[from]) {
        total += std::max(0.0, current(j, from));
    }
    return total;
}

std::vector<SectorRate> jump_rates(const Operator& hamiltonian, const StateVector& pilot, const BeableSpec& spec,
                                   SectorId current, double weight_floor)
{
    if (!same_space(pilot.space(), spec.space())) {
        throw Error("jump_rates: pilot and beable spec use different spaces");
    }
    SectorCurrents currents(hamiltonian, spec);
    currents.evaluate(pilot.amplitudes());
    const double w = currents.weight(current);
    if (w < weight_floor) {
        throw StarvationError("sector " + spec.to_string(current) + " has pilot weight " + std::to_string(w) +
                              " below the floor");
    }
    std::vector<SectorRate> rates;
    for (const auto j : currents.coupled(current)) {
        const double flow = currents.current(j, current);
        if (flow > 0.0) {
            rates.push_back(SectorRate{j, flow / w});
        }
    }
    return rates;
}

std::uint64_t mix_seed(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RandomStream RandomStream::derive(std::uint64_t master_seed, std::uint64_t index)
{
    return RandomStream(mix_seed(mix_seed(master_seed) ^ mix_seed(index + 0x632be59bd9b4e019ULL)));
}

double RandomStream::uniform()
{
    // 53 random bits, shifted to the cell centre so 0 and 1 never occur.
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

namespace {

void normalize_cumulative(std::vector<std::pair<SectorId, double>>& targets, double total)
{
    double acc = 0.0;
    for (auto& [id, w] : targets) {
        acc += w;
        w = acc / total;
    }
    targets.back().second = 1.0;
}

} // namespace

bool starving(const SectorCurrents& currents, SectorId from, const StepPolicy& policy)
{
    if (currents.weight(from) >= policy.weight_floor) {
        return false;
    }
    double net = 0.0;
    for (const auto j : currents.coupled(from)) {
        net += currents.current(j, from);
    }
    return net > 0.0;
}

JumpKernel jump_kernel(const SectorCurrents& currents, SectorId from, double dt, const StepPolicy& policy)
{
    JumpKernel k;
    const double w = currents.weight(from);
    double total_flow = 0.0;
    for (const auto j : currents.coupled(from)) {
        const double flow = currents.current(j, from);
        if (flow > 0.0) {
            k.targets.emplace_back(j, flow);
            total_flow += flow;
        }
    }

    if (!starving(currents, from, policy)) {
        if (k.targets.empty() || w <= 0.0) {
            return k;
        }
        k.total_rate = total_flow / w;
        k.stay = std::exp(-k.total_rate * dt);
        if (w >= policy.weight_floor && 1.0 - k.stay > policy.max_step_jump_probability) {
            throw PolicyViolation("one-step jump probability " + std::to_string(1.0 - k.stay) +
                                  " exceeds the policy guard");
        }
        normalize_cumulative(k.targets, total_flow);
        return k;
    }

    // Starved: the occupied branch has (nearly) died out.
    k.forced = true;
    k.stay = 0.0;
    if (k.targets.empty()) {
        double total = 0.0;
        for (const auto j : currents.coupled(from)) {
            if (currents.weight(j) >= empty_sector_weight) {
                k.targets.emplace_back(j, currents.weight(j));
                total += currents.weight(j);
            }
        }
        if (k.targets.empty()) {
            k.forced = false;
            k.stranded = true;
            k.stay = 1.0;
            return k;
        }
        normalize_cumulative(k.targets, total);
        return k;
    }
    normalize_cumulative(k.targets, total_flow);
    return k;
}

StepResult sample_kernel(const JumpKernel& kernel, SectorId current, double dt, RandomStream& rng)
{
    StepResult r{current};
    if (kernel.targets.empty()) {
        return r;
    }
    if (!kernel.forced) {
        // Inverse-CDF jump time; a jump happens iff it falls inside the step.
        const double offset = -std::log1p(-rng.uniform()) / kernel.total_rate;
        if (!(offset < dt)) {
            return r;
        }
        r.offset = offset;
    } else {
        r.starved = true;
    }
    const double v = rng.uniform();
    auto it = std::find_if(kernel.targets.begin(), kernel.targets.end(),
                           [v](const auto& t) { return v < t.second; });
    if (it == kernel.targets.end()) {
        it = std::prev(kernel.targets.end());
    }
    r.sector = it->first;
    r.jumped = true;
    return r;
}

StepResult step(const Operator& hamiltonian, const StateVector& pilot, const BeableSpec& spec, SectorId current,
                double dt, RandomStream& rng, const StepPolicy& policy)
{
    if (!same_space(pilot.space(), spec.space())) {
        throw Error("step: pilot and beable spec use different spaces");
    }
    SectorCurrents currents(hamiltonian, spec);
    currents.evaluate(pilot.amplitudes());
    return sample_kernel(jump_kernel(currents, current, dt, policy), current, dt, rng);
}

} // namespace bellsim
