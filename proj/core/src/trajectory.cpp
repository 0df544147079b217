#include "bellsim/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bellsim {

SectorId Trajectory::sector_at(double t) const
{
    SectorId s = initial;
    for (const auto& j : jumps) {
        if (j.time > t) {
            break;
        }
        s = j.to;
    }
    return s;
}

SectorId Trajectory::sector_after_steps(std::size_t steps) const
{
    SectorId s = initial;
    for (const auto& j : jumps) {
        if (j.step >= steps) {
            break;
        }
        s = j.to;
    }
    return s;
}

SectorId sample_sector(const SectorDistribution& distribution, double u)
{
    double total = 0.0;
    for (const double p : distribution) {
        total += p;
    }
    if (!(total > 0.0)) {
        throw Error("cannot sample from an empty distribution");
    }
    const double target = u * total;
    double acc = 0.0;
    SectorId last_live = 0;
    for (std::size_t i = 0; i < distribution.size(); ++i) {
        if (distribution[i] <= 0.0) {
            continue;
        }
        acc += distribution[i];
        last_live = static_cast<SectorId>(i);
        if (target < acc) {
            return last_live;
        }
    }
    return last_live;
}

Trajectory simulate_trajectory(const PilotTimeline& timeline, RandomStream& rng)
{
    return simulate_trajectory(timeline, sample_sector(timeline.initial_weights(), rng.uniform()), rng);
}

Trajectory simulate_trajectory(const PilotTimeline& timeline, SectorId initial, RandomStream& rng)
{
    if (initial >= timeline.spec().sector_count()) {
        throw Error("initial sector out of range");
    }
    Trajectory tr;
    tr.initial = initial;
    SectorId current = initial;
    const auto steps = timeline.steps();
    for (std::size_t s = 0; s < steps.size(); ++s) {
        const auto& st = steps[s];
        const auto* k = timeline.find_kernel(s, current);
        SectorId next = current;
        double offset = st.dt;
        bool forced = false;
        if (k) {
            if (k->target_count == 0) {
                tr.stranded += k->stranded ? 1 : 0;
                continue;
            }
            if (!k->forced) {
                offset = -std::log1p(-rng.uniform()) / k->total_rate;
                if (!(offset < st.dt)) {
                    continue;
                }
            }
            forced = k->forced;
            const double v = rng.uniform();
            const auto targets = timeline.targets(*k);
            auto it = std::find_if(targets.begin(), targets.end(), [v](const auto& t) { return v < t.cumulative; });
            next = (it == targets.end() ? targets.back() : *it).sector;
        } else {
            const auto fb = timeline.fallback_kernel(s, current);
            if (fb.targets.empty()) {
                tr.stranded += fb.stranded ? 1 : 0;
                continue;
            }
            const auto r = sample_kernel(fb, current, st.dt, rng);
            next = r.sector;
            forced = true;
        }
        tr.starved += forced ? 1 : 0;
        tr.jumps.push_back(Jump{st.t_start + std::min(offset, st.dt), current, next, static_cast<std::uint32_t>(s),
                                st.segment, forced});
        current = next;
    }
    return tr;
}

Trajectory simulate_trajectory(const Schedule& schedule, const StateVector& initial_pilot, SectorId initial,
                               const BeableSpec& spec, const StepPolicy& policy, RandomStream& rng)
{
    return simulate_trajectory(PilotTimeline(schedule, initial_pilot, spec, policy), initial, rng);
}

std::string jumps_csv(const Trajectory& trajectory, const BeableSpec& spec)
{
    std::ostringstream out;
    out.precision(17);
    out << "t,from_sector,to_sector\n";
    for (const auto& j : trajectory.jumps) {
        out << j.time << ",\"" << spec.to_string(j.from) << "\",\"" << spec.to_string(j.to) << "\"\n";
    }
    return out.str();
}

} // namespace bellsim
