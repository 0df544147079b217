#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bellsim/beables.hpp"
#include "bellsim/operator.hpp"
#include "bellsim/propagator.hpp"

namespace bellsim {

/// A Hamiltonian switched on over [t_start, t_end].
struct Segment {
    double t_start = 0.0;
    double t_end = 0.0;
    Operator hamiltonian;
    /// Name of the measuring agent, if the segment is a measurement.
    std::string agent;
    /// Factor index of the agent's record (pointer) and its ready label.
    std::optional<std::size_t> pointer;
    std::size_t ready_label = 0;

    double duration() const noexcept { return t_end - t_start; }
};

/// Instantaneous unitary applied to the pilot at `time`.
struct UnitaryEvent {
    double time = 0.0;
    Operator unitary;
    std::string label;
    /// Permits the event to fall strictly inside a segment.
    bool inside_segment = false;
};

/// A maximal time interval with one Hamiltonian (or none) and no events inside.
struct SchedulePiece {
    double t_start;
    double t_end;
    std::optional<std::size_t> segment;
};

/*!
 * Piecewise-constant Hamiltonian schedule plus instantaneous unitaries.
 *
 * The state at time t includes every event at time <= t. Events at exactly
 * t_start are rejected so the initial state is unambiguous.
 */
class Schedule {
public:
    Schedule(SpacePtr space, double t_start, double t_final, std::vector<Segment> segments,
             std::vector<UnitaryEvent> events);

    const SpacePtr& space() const noexcept { return space_; }
    double t_start() const noexcept { return t_start_; }
    double t_final() const noexcept { return t_final_; }
    const std::vector<Segment>& segments() const noexcept { return segments_; }
    const std::vector<UnitaryEvent>& events() const noexcept { return events_; }
    const std::vector<SchedulePiece>& pieces() const noexcept { return pieces_; }
    const Propagator& propagator(std::size_t segment) const { return *propagators_.at(segment); }

    /// Index of the segment whose agent is `agent`, if any.
    std::optional<std::size_t> find_agent(std::string_view agent) const;

    /// Pure unitary evolution from `from` to `to`, applying events in (from, to].
    StateVector evolve(const StateVector& psi, double from, double to) const;

    /// Throws Error if some event couples different sectors of `spec`.
    void require_sector_preserving_events(const BeableSpec& spec) const;

private:
    SpacePtr space_;
    double t_start_;
    double t_final_;
    std::vector<Segment> segments_;
    std::vector<UnitaryEvent> events_;
    std::vector<SchedulePiece> pieces_;
    std::vector<std::shared_ptr<const Propagator>> propagators_;
};

/// Largest |entry| of `op` connecting basis states of different sectors.
double cross_sector_coupling(const Operator& op, const BeableSpec& spec);

} // namespace bellsim
