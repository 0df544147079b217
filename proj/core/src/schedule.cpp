#include "bellsim/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace bellsim {

Schedule::Schedule(SpacePtr space, double t_start, double t_final, std::vector<Segment> segments,
                   std::vector<UnitaryEvent> events)
    : space_(std::move(space)), t_start_(t_start), t_final_(t_final), segments_(std::move(segments)),
      events_(std::move(events))
{
    if (!(t_final >= t_start)) {
        throw Error("schedule: t_final precedes t_start");
    }
    std::stable_sort(segments_.begin(), segments_.end(),
                     [](const Segment& a, const Segment& b) { return a.t_start < b.t_start; });
    std::stable_sort(events_.begin(), events_.end(),
                     [](const UnitaryEvent& a, const UnitaryEvent& b) { return a.time < b.time; });

    double previous_end = t_start_;
    for (const auto& s : segments_) {
        if (!same_space(s.hamiltonian.space(), space_)) {
            throw Error("schedule: segment Hamiltonian lives in another space");
        }
        if (!(s.t_end > s.t_start)) {
            throw Error("schedule: segment has non-positive duration");
        }
        if (s.t_start < previous_end) {
            throw Error("schedule: segments overlap or start before t_start");
        }
        if (s.t_end > t_final_) {
            throw Error("schedule: segment ends after t_final");
        }
        if (!s.hamiltonian.hermitian()) {
            throw Error("schedule: segment Hamiltonian is not Hermitian");
        }
        previous_end = s.t_end;
    }
    for (const auto& e : events_) {
        if (!same_space(e.unitary.space(), space_)) {
            throw Error("schedule: event unitary lives in another space");
        }
        if (!(e.time > t_start_) || e.time > t_final_) {
            throw Error("schedule: event time must lie in (t_start, t_final]");
        }
        const double defect = e.unitary.unitarity_defect();
        if (defect > unitarity_tolerance) {
            throw Error("schedule: event '" + e.label + "' is not unitary (defect " + std::to_string(defect) + ")");
        }
        if (!e.inside_segment) {
            for (const auto& s : segments_) {
                if (e.time > s.t_start && e.time < s.t_end) {
                    throw Error("schedule: event '" + e.label + "' falls inside a segment without being flagged");
                }
            }
        }
    }

    // Breakpoints: segment boundaries and event times.
    std::set<double> cuts{t_start_, t_final_};
    for (const auto& s : segments_) {
        cuts.insert(s.t_start);
        cuts.insert(s.t_end);
    }
    for (const auto& e : events_) {
        cuts.insert(e.time);
    }
    for (auto it = cuts.begin(); std::next(it) != cuts.end(); ++it) {
        const double a = *it;
        const double b = *std::next(it);
        std::optional<std::size_t> seg;
        for (std::size_t k = 0; k < segments_.size(); ++k) {
            if (segments_[k].t_start <= a && b <= segments_[k].t_end) {
                seg = k;
                break;
            }
        }
        pieces_.push_back(SchedulePiece{a, b, seg});
    }

    propagators_.reserve(segments_.size());
    for (const auto& s : segments_) {
        propagators_.push_back(std::make_shared<const Propagator>(s.hamiltonian));
    }
}

std::optional<std::size_t> Schedule::find_agent(std::string_view agent) const
{
    for (std::size_t k = 0; k < segments_.size(); ++k) {
        if (segments_[k].agent == agent) {
            return k;
        }
    }
    return std::nullopt;
}

StateVector Schedule::evolve(const StateVector& psi, double from, double to) const
{
    if (!same_space(psi.space(), space_)) {
        throw Error("schedule: state lives in another space");
    }
    if (to < from) {
        throw Error("schedule: cannot evolve backwards in time");
    }
    Eigen::VectorXcd amps = psi.amplitudes();
    auto next_event = std::upper_bound(events_.begin(), events_.end(), from,
                                       [](double t, const UnitaryEvent& e) { return t < e.time; });
    auto apply_events_until = [&](double t) {
        while (next_event != events_.end() && next_event->time <= t && next_event->time <= to) {
            amps = next_event->unitary.entries() * amps;
            ++next_event;
        }
    };

    for (const auto& piece : pieces_) {
        if (piece.t_end <= from) {
            continue;
        }
        if (piece.t_start >= to) {
            break;
        }
        apply_events_until(piece.t_start);
        if (piece.segment) {
            const double a = std::max(piece.t_start, from);
            const double b = std::min(piece.t_end, to);
            propagators_[*piece.segment]->apply(b - a, amps);
        }
    }
    apply_events_until(to);
    return StateVector(psi.space(), std::move(amps));
}

void Schedule::require_sector_preserving_events(const BeableSpec& spec) const
{
    for (const auto& e : events_) {
        const double c = cross_sector_coupling(e.unitary, spec);
        if (c > 1e-12) {
            throw Error("event '" + e.label + "' couples different sectors (|element| = " + std::to_string(c) + ")");
        }
    }
}

double cross_sector_coupling(const Operator& op, const BeableSpec& spec)
{
    const auto& m = op.entries();
    double worst = 0.0;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        const auto sc = spec.sector_of_basis(static_cast<std::size_t>(c));
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            if (spec.sector_of_basis(static_cast<std::size_t>(r)) != sc) {
                worst = std::max(worst, std::abs(m(r, c)));
            }
        }
    }
    return worst;
}

} // namespace bellsim
