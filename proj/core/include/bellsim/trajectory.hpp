#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "bellsim/timeline.hpp"

namespace bellsim {

struct Jump {
    double time;
    SectorId from;
    SectorId to;
    /// Timeline step in which the jump happened.
    std::uint32_t step;
    std::uint32_t segment;
    /// Forced by starvation rather than drawn from the rates.
    bool forced;
};

struct TransitionKey {
    std::uint32_t segment;
    SectorId from;
    SectorId to;

    auto operator<=>(const TransitionKey&) const = default;
};

/// One realization of the real configuration: an initial sector plus jumps.
struct Trajectory {
    SectorId initial = 0;
    std::vector<Jump> jumps;
    /// Forced jumps out of starved sectors.
    std::size_t starved = 0;
    /// Steps spent in a starved sector with nowhere to go.
    std::size_t stranded = 0;

    /// Sector after every jump with time <= t.
    SectorId sector_at(double t) const;
    /// Sector after the first `steps` timeline steps.
    SectorId sector_after_steps(std::size_t steps) const;
    SectorId final_sector() const { return jumps.empty() ? initial : jumps.back().to; }
};

/// Index drawn from a distribution by inverse CDF with uniform u in (0, 1).
SectorId sample_sector(const SectorDistribution& distribution, double u);

/// Samples the initial sector from the pilot's Born weights, then walks the timeline.
Trajectory simulate_trajectory(const PilotTimeline& timeline, RandomStream& rng);

/// Walks the timeline from a given initial sector.
Trajectory simulate_trajectory(const PilotTimeline& timeline, SectorId initial, RandomStream& rng);

/// Convenience form that discretizes the schedule first.
Trajectory simulate_trajectory(const Schedule& schedule, const StateVector& initial_pilot, SectorId initial,
                               const BeableSpec& spec, const StepPolicy& policy, RandomStream& rng);

/// CSV with header "t,from_sector,to_sector", one line per jump.
std::string jumps_csv(const Trajectory& trajectory, const BeableSpec& spec);

} // namespace bellsim
