#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "bellsim/trajectory.hpp"

namespace bellsim {

/*!
 * Integer-valued summary of an ensemble of trajectories.
 *
 * Everything is a count, so merging is associative and order independent
 * and the statistics are identical for any thread count.
 */
struct EnsembleStats {
    std::uint64_t n_runs = 0;
    std::uint64_t seed = 0;
    std::size_t sector_count = 0;
    std::vector<double> checkpoints;
    /// counts[c][s]: runs whose sector at checkpoint c is s.
    std::vector<std::vector<std::uint64_t>> counts;
    /// Tuple of sectors at every checkpoint -> number of runs.
    std::map<std::vector<SectorId>, std::uint64_t> paths;
    std::map<TransitionKey, std::uint64_t> transitions;
    /// jumps_after[c]: jumps strictly later than checkpoint c, over all runs.
    std::vector<std::uint64_t> jumps_after;
    std::uint64_t starvation_events = 0;
    std::uint64_t starved_runs = 0;
    std::uint64_t stranded_events = 0;
    /// (run, segment) pairs with more than one jump.
    std::uint64_t multi_jump_segments = 0;
    /// Jumps that return a measuring agent's record to its ready label.
    std::uint64_t reverse_jumps = 0;

    double frequency(std::size_t checkpoint, SectorId sector) const;
    SectorDistribution frequencies(std::size_t checkpoint) const;
    /// Index of a checkpoint time (exact match up to 1e-12), or throws Error.
    std::size_t checkpoint_index(double t) const;
    /// Adds another ensemble's counts; checkpoints and sector count must agree.
    void merge(const EnsembleStats& other);

    bool operator==(const EnsembleStats&) const = default;
};

/// Runs n trajectories; trajectory k uses RandomStream::derive(seed, k).
/// threads = 0 picks the hardware concurrency.
EnsembleStats run_ensemble(std::uint64_t n, const PilotTimeline& timeline, std::uint64_t seed,
                           const std::vector<double>& checkpoints, unsigned threads = 0);

/// Convenience form that discretizes the schedule first.
EnsembleStats run_ensemble(std::uint64_t n, const Schedule& schedule, const StateVector& initial_pilot,
                           const BeableSpec& spec, const StepPolicy& policy, std::uint64_t seed,
                           const std::vector<double>& checkpoints, unsigned threads = 0);

} // namespace bellsim
