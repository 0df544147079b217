#include "bellsim/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace bellsim {

double EnsembleStats::frequency(std::size_t checkpoint, SectorId sector) const
{
    if (n_runs == 0) {
        return 0.0;
    }
    return static_cast<double>(counts.at(checkpoint).at(sector)) / static_cast<double>(n_runs);
}

SectorDistribution EnsembleStats::frequencies(std::size_t checkpoint) const
{
    SectorDistribution f(sector_count);
    for (SectorId s = 0; s < sector_count; ++s) {
        f[s] = frequency(checkpoint, s);
    }
    return f;
}

std::size_t EnsembleStats::checkpoint_index(double t) const
{
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
        if (std::abs(checkpoints[c] - t) <= 1e-12 * std::max(1.0, std::abs(t))) {
            return c;
        }
    }
    throw Error("ensemble has no checkpoint at t = " + std::to_string(t));
}

void EnsembleStats::merge(const EnsembleStats& other)
{
    if (other.checkpoints != checkpoints || other.sector_count != sector_count) {
        throw Error("cannot merge ensembles with different checkpoints or sectors");
    }
    n_runs += other.n_runs;
    for (std::size_t c = 0; c < counts.size(); ++c) {
        for (std::size_t s = 0; s < sector_count; ++s) {
            counts[c][s] += other.counts[c][s];
        }
        jumps_after[c] += other.jumps_after[c];
    }
    for (const auto& [k, v] : other.paths) {
        paths[k] += v;
    }
    for (const auto& [k, v] : other.transitions) {
        transitions[k] += v;
    }
    starvation_events += other.starvation_events;
    starved_runs += other.starved_runs;
    stranded_events += other.stranded_events;
    multi_jump_segments += other.multi_jump_segments;
    reverse_jumps += other.reverse_jumps;
}

namespace {

EnsembleStats empty_stats(std::uint64_t seed, std::size_t sectors, const std::vector<double>& checkpoints)
{
    EnsembleStats s;
    s.seed = seed;
    s.sector_count = sectors;
    s.checkpoints = checkpoints;
    s.counts.assign(checkpoints.size(), std::vector<std::uint64_t>(sectors, 0));
    s.jumps_after.assign(checkpoints.size(), 0);
    return s;
}

// Beable position of each segment's pointer, if the pointer is a beable.
struct PointerInfo {
    std::optional<std::size_t> position;
    std::size_t ready = 0;
};

std::vector<PointerInfo> pointer_positions(const Schedule& schedule, const BeableSpec& spec)
{
    std::vector<PointerInfo> out;
    const auto& beables = spec.beable_factors();
    for (const auto& seg : schedule.segments()) {
        PointerInfo info;
        if (seg.pointer) {
            const auto it = std::find(beables.begin(), beables.end(), *seg.pointer);
            if (it != beables.end()) {
                info.position = static_cast<std::size_t>(it - beables.begin());
                info.ready = seg.ready_label;
            }
        }
        out.push_back(info);
    }
    return out;
}

void record(EnsembleStats& stats, const Trajectory& tr, const std::vector<std::size_t>& checkpoint_steps,
            const std::vector<PointerInfo>& pointers, const BeableSpec& spec)
{
    ++stats.n_runs;
    std::vector<SectorId> path(checkpoint_steps.size());
    for (std::size_t c = 0; c < checkpoint_steps.size(); ++c) {
        path[c] = tr.sector_after_steps(checkpoint_steps[c]);
        ++stats.counts[c][path[c]];
        for (const auto& j : tr.jumps) {
            if (j.step >= checkpoint_steps[c]) {
                ++stats.jumps_after[c];
            }
        }
    }
    ++stats.paths[path];

    std::uint32_t previous_segment = 0;
    std::size_t in_segment = 0;
    for (const auto& j : tr.jumps) {
        ++stats.transitions[TransitionKey{j.segment, j.from, j.to}];
        in_segment = (in_segment > 0 && j.segment == previous_segment) ? in_segment + 1 : 1;
        if (in_segment == 2) {
            ++stats.multi_jump_segments;
        }
        previous_segment = j.segment;
        const auto& p = pointers[j.segment];
        if (p.position && spec.value(j.from, *p.position) != p.ready && spec.value(j.to, *p.position) == p.ready) {
            ++stats.reverse_jumps;
        }
    }
    stats.starvation_events += tr.starved;
    stats.starved_runs += tr.starved > 0 ? 1 : 0;
    stats.stranded_events += tr.stranded;
}

} // namespace

EnsembleStats run_ensemble(std::uint64_t n, const PilotTimeline& timeline, std::uint64_t seed,
                           const std::vector<double>& checkpoints, unsigned threads)
{
    if (n < 1) {
        throw Error("ensemble size must be at least 1");
    }
    const auto& schedule = timeline.schedule();
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
        if (checkpoints[c] < schedule.t_start() || checkpoints[c] > schedule.t_final()) {
            throw Error("checkpoint " + std::to_string(checkpoints[c]) + " lies outside the schedule");
        }
        if (c > 0 && !(checkpoints[c] > checkpoints[c - 1])) {
            throw Error("checkpoints must be strictly increasing");
        }
    }
    std::vector<std::size_t> checkpoint_steps;
    for (const double t : checkpoints) {
        checkpoint_steps.push_back(timeline.steps_completed_by(t));
    }
    const auto pointers = pointer_positions(schedule, timeline.spec());
    const auto sectors = timeline.spec().sector_count();

    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, n));

    std::vector<EnsembleStats> partial(threads, empty_stats(seed, sectors, checkpoints));
    auto work = [&](unsigned w) {
        const std::uint64_t begin = n * w / threads;
        const std::uint64_t end = n * (w + 1) / threads;
        for (std::uint64_t k = begin; k < end; ++k) {
            auto rng = RandomStream::derive(seed, k);
            record(partial[w], simulate_trajectory(timeline, rng), checkpoint_steps, pointers, timeline.spec());
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        std::vector<std::exception_ptr> errors(threads);
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] {
                try {
                    work(w);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        pool.clear();
        for (const auto& e : errors) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
    }

    auto stats = empty_stats(seed, sectors, checkpoints);
    for (const auto& p : partial) {
        stats.merge(p);
    }
    return stats;
}

EnsembleStats run_ensemble(std::uint64_t n, const Schedule& schedule, const StateVector& initial_pilot,
                           const BeableSpec& spec, const StepPolicy& policy, std::uint64_t seed,
                           const std::vector<double>& checkpoints, unsigned threads)
{
    return run_ensemble(n, PilotTimeline(schedule, initial_pilot, spec, policy), seed, checkpoints, threads);
}

} // namespace bellsim
