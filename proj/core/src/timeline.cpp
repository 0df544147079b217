#include "bellsim/timeline.hpp"

#include <algorithm>
#include <cmath>

namespace bellsim {

namespace {

// Relative tolerance for snapping a step end onto a piece boundary.
constexpr double snap_tolerance = 1e-12;

} // namespace

PilotTimeline::PilotTimeline(const Schedule& schedule, const StateVector& initial_pilot, const BeableSpec& spec,
                             const StepPolicy& policy)
    : schedule_(std::make_shared<const Schedule>(schedule)), spec_(std::make_shared<const BeableSpec>(spec)),
      policy_(policy), initial_pilot_(initial_pilot), final_pilot_(initial_pilot)
{
    if (!same_space(initial_pilot.space(), schedule.space()) || !same_space(spec.space(), schedule.space())) {
        throw Error("timeline: schedule, pilot and beable spec must share one space");
    }
    if (!initial_pilot.is_normalized()) {
        throw Error("timeline: initial pilot is not normalized");
    }
    if (!(policy.dt_divisor >= 1.0) || !(policy.rate_cap > 0.0) || policy.max_halvings < 0) {
        throw Error("timeline: invalid step policy");
    }
    schedule.require_sector_preserving_events(spec);

    const auto sectors = spec.sector_count();
    initial_weights_ = born_weights(initial_pilot, spec);

    std::vector<SectorCurrents> currents;
    currents.reserve(schedule.segments().size());
    coupled_.reserve(schedule.segments().size());
    for (const auto& seg : schedule.segments()) {
        currents.emplace_back(seg.hamiltonian, spec);
        std::vector<std::vector<SectorId>> c(sectors);
        for (SectorId i = 0; i < sectors; ++i) {
            c[i] = currents.back().coupled(i);
        }
        coupled_.push_back(std::move(c));
    }

    const auto& events = schedule.events();
    auto next_event = events.begin();
    Eigen::VectorXcd amps = initial_pilot.amplitudes();
    auto apply_events_until = [&](double t) {
        while (next_event != events.end() && next_event->time <= t) {
            amps = next_event->unitary.entries() * amps;
            ++next_event;
        }
    };

    Eigen::VectorXcd probe;
    for (const auto& piece : schedule.pieces()) {
        apply_events_until(piece.t_start);
        if (!piece.segment) {
            continue;
        }
        const auto s = *piece.segment;
        const auto& segment = schedule.segments()[s];
        const auto& prop = schedule.propagator(s);
        auto& cur = currents[s];
        const double base = segment.duration() / policy.dt_divisor;
        const double snap = snap_tolerance * std::max(1.0, std::abs(piece.t_end));
        const Eigen::VectorXcd start = amps;

        double t = piece.t_start;
        while (piece.t_end - t > snap) {
            double h = std::min(base, piece.t_end - t);
            int halvings = 0;
            for (;;) {
                probe = start;
                prop.apply(t + 0.5 * h - piece.t_start, probe);
                cur.evaluate(probe);
                double worst = 0.0;
                for (SectorId i = 0; i < sectors; ++i) {
                    const double w = cur.weight(i);
                    if (w >= policy.weight_floor) {
                        worst = std::max(worst, cur.outflow(i) / w);
                    }
                }
                if (worst * h <= policy.rate_cap || halvings >= policy.max_halvings) {
                    break;
                }
                h *= 0.5;
                ++halvings;
            }
            deepest_halving_ = std::max(deepest_halving_, halvings);

            Step st{t, h, static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(kernels_.size()), 0};
            // Every live sector gets an entry; one without targets stays put.
            for (SectorId i = 0; i < sectors; ++i) {
                if (cur.weight(i) < empty_sector_weight) {
                    continue;
                }
                auto k = jump_kernel(cur, i, h, policy);
                kernels_.push_back(Kernel{i, static_cast<std::uint32_t>(targets_.size()),
                                          static_cast<std::uint32_t>(k.targets.size()), k.total_rate, k.forced,
                                          k.stranded});
                for (const auto& [j, c] : k.targets) {
                    targets_.push_back(Target{j, c});
                }
                forced_kernels_ += k.forced ? 1 : 0;
                ++st.kernel_count;
            }

            double t_next = t + h;
            if (piece.t_end - t_next <= snap) {
                t_next = piece.t_end;
            }
            probe = start;
            prop.apply(t_next - piece.t_start, probe);
            const auto w_after = sector_weights(probe, spec);
            weights_after_.insert(weights_after_.end(), w_after.begin(), w_after.end());
            steps_.push_back(st);
            step_end_.push_back(t_next);
            t = t_next;
        }
        amps = start;
        prop.apply(piece.t_end - piece.t_start, amps);
    }
    apply_events_until(schedule.t_final());
    final_pilot_ = StateVector(initial_pilot.space(), std::move(amps));
}

const PilotTimeline::Kernel* PilotTimeline::find_kernel(std::size_t step, SectorId sector) const
{
    const auto& st = steps_[step];
    const auto first = kernels_.begin() + st.first_kernel;
    const auto last = first + st.kernel_count;
    const auto it = std::lower_bound(first, last, sector, [](const Kernel& k, SectorId s) { return k.sector < s; });
    if (it == last || it->sector != sector) {
        return nullptr;
    }
    return &*it;
}

JumpKernel PilotTimeline::fallback_kernel(std::size_t step, SectorId sector) const
{
    const auto& st = steps_.at(step);
    const auto w = weights_after(step);
    JumpKernel k;
    double total = 0.0;
    for (const auto j : coupled_[st.segment][sector]) {
        if (w[j] >= empty_sector_weight) {
            k.targets.emplace_back(j, w[j]);
            total += w[j];
        }
    }
    if (k.targets.empty()) {
        // Untouched by this segment's Hamiltonian: nothing moves it.
        k.stranded = !coupled_[st.segment][sector].empty();
        return k;
    }
    double acc = 0.0;
    for (auto& [j, c] : k.targets) {
        acc += c;
        c = acc / total;
    }
    k.targets.back().second = 1.0;
    k.forced = true;
    k.stay = 0.0;
    return k;
}

std::span<const double> PilotTimeline::weights_after(std::size_t step) const
{
    if (step >= steps_.size()) {
        throw Error("timeline: step index out of range");
    }
    const auto n = spec_->sector_count();
    return std::span<const double>(weights_after_).subspan(step * n, n);
}

std::size_t PilotTimeline::steps_completed_by(double t) const
{
    const double snap = snap_tolerance * std::max(1.0, std::abs(t));
    return static_cast<std::size_t>(std::upper_bound(step_end_.begin(), step_end_.end(), t + snap) -
                                    step_end_.begin());
}

SectorDistribution PilotTimeline::weights_at(double t) const
{
    if (t < schedule_->t_start() || t > schedule_->t_final()) {
        throw Error("timeline: time outside the schedule");
    }
    const auto n = steps_completed_by(t);
    const double snap = snap_tolerance * std::max(1.0, std::abs(t));
    if (n < steps_.size() && steps_[n].t_start < t - snap) {
        // t falls strictly inside a step.
        return born_weights(schedule_->evolve(initial_pilot_, schedule_->t_start(), t), *spec_);
    }
    if (n == 0) {
        return initial_weights_;
    }
    const auto w = weights_after(n - 1);
    return SectorDistribution(w.begin(), w.end());
}

} // namespace bellsim
