#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "bellsim/beables.hpp"
#include "bellsim/operator.hpp"

namespace bellsim {

/// Step-size and regularization parameters of the jump process.
struct StepPolicy {
    /// Base step is segment duration / dt_divisor.
    double dt_divisor = 2000.0;
    /// Steps are halved until (total outgoing rate) * dt <= rate_cap.
    double rate_cap = 0.1;
    /// A sector whose pilot weight is below this and still draining is starved.
    double weight_floor = 1e-10;
    int max_halvings = 60;
    /// Internal guard: an unforced step may never jump with higher probability.
    double max_step_jump_probability = 0.5;
};

/// Raised when rates are requested for a sector whose pilot weight is below the floor.
class StarvationError : public Error {
public:
    using Error::Error;
};

/// Raised when a step would jump with probability above the policy guard.
class PolicyViolation : public Error {
public:
    using Error::Error;
};

struct SectorRate {
    SectorId target;
    double rate;
};

/*!
 * Bell transition rates out of `current`:
 *
 *   w_j = max(0, 2 Re[<psi_j|H|psi_i> / i]) / <psi_i|psi_i>
 *
 * for every sector j != current; zero rates are omitted. Throws
 * StarvationError when <psi_i|psi_i> < weight_floor.
 */
std::vector<SectorRate> jump_rates(const Operator& hamiltonian, const StateVector& pilot, const BeableSpec& spec,
                                   SectorId current, double weight_floor = 1e-10);

/*!
 * Sector weights and the antisymmetric probability-current matrix
 * J(j, i) = 2 Im <psi_j|H|psi_i> for one pilot vector.
 *
 * The rate from i to j is max(0, J(j, i)) / weight(i). Built from the
 * nonzero pattern of H, so one evaluation costs O(nnz(H) + sectors^2).
 */
class SectorCurrents {
public:
    SectorCurrents(const Operator& hamiltonian, const BeableSpec& spec);

    /// Recomputes weights and currents for `amplitudes`.
    void evaluate(const Eigen::VectorXcd& amplitudes);

    std::size_t sector_count() const noexcept { return sectors_; }
    double weight(SectorId i) const { return weights_[i]; }
    double current(SectorId to, SectorId from) const { return currents_[to * sectors_ + from]; }
    /// Sum over j of max(0, J(j, i)).
    double outflow(SectorId from) const;
    /// Sectors j with a nonzero element of H between sectors i and j.
    const std::vector<SectorId>& coupled(SectorId i) const { return coupled_[i]; }

private:
    struct Entry {
        std::uint32_t row;
        std::uint32_t col;
        SectorId row_sector;
        SectorId col_sector;
        Complex value;
    };
    std::size_t sectors_;
    std::vector<SectorId> basis_sector_;
    std::vector<Entry> entries_; // off-diagonal nonzeros between different sectors
    std::vector<std::vector<SectorId>> coupled_;
    std::vector<double> weights_;
    std::vector<double> currents_;
};

/// Deterministic random stream; one per trajectory.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    /// Independent stream `index` of a master seed.
    static RandomStream derive(std::uint64_t master_seed, std::uint64_t index);

    /// Uniform double in the open interval (0, 1).
    double uniform();

private:
    std::mt19937_64 engine_;
};

/// SplitMix64 finalizer used to decorrelate derived seeds.
std::uint64_t mix_seed(std::uint64_t x) noexcept;

/*!
 * One-step jump law out of a sector. `targets` holds cumulative selection
 * probabilities (last entry 1). A forced kernel jumps with probability one.
 */
struct JumpKernel {
    double total_rate = 0.0;
    double stay = 1.0;
    bool forced = false;
    /// Starved with no admissible target; the sector is kept.
    bool stranded = false;
    std::vector<std::pair<SectorId, double>> targets;
};

/// True if `from` is below the weight floor and losing weight.
bool starving(const SectorCurrents& currents, SectorId from, const StepPolicy& policy);

/// Builds the kernel of sector `from` for a step of length dt. Throws
/// PolicyViolation if an unforced jump probability exceeds the policy guard.
JumpKernel jump_kernel(const SectorCurrents& currents, SectorId from, double dt, const StepPolicy& policy);

struct StepResult {
    SectorId sector;
    bool jumped = false;
    /// The occupied sector was below the weight floor and a jump was forced.
    bool starved = false;
    /// Time of the jump measured from the start of the step.
    double offset = 0.0;
};

/// Draws from a kernel; consumes one uniform for the jump time and, on a
/// jump, one for the target.
StepResult sample_kernel(const JumpKernel& kernel, SectorId current, double dt, RandomStream& rng);

/*!
 * Samples at most one jump over a step of length dt with rates evaluated on
 * `pilot`: sector j is chosen with probability (w_j / W)(1 - exp(-W dt)),
 * W = sum_j w_j. A starved sector jumps with probability one, proportionally
 * to its rates, or if those vanish proportionally to the Born weights of the
 * sectors H couples it to.
 */
StepResult step(const Operator& hamiltonian, const StateVector& pilot, const BeableSpec& spec, SectorId current,
                double dt, RandomStream& rng, const StepPolicy& policy = {});

} // namespace bellsim
