#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bellsim/dynamics.hpp"
#include "bellsim/schedule.hpp"

namespace bellsim {

/*!
 * The pilot vector's evolution over a schedule, discretized once for all
 * trajectories.
 *
 * The pilot does not depend on the real state, so the time grid and the
 * per-sector jump kernels are shared by every trajectory and by the master
 * equation. Within each segment the grid starts from duration / dt_divisor
 * and halves a step until max_i W_i * dt <= rate_cap over every live,
 * non-starved sector i, with rates evaluated at the step midpoint. Steps
 * are never taken outside segments: with no Hamiltonian there are no jumps.
 */
class PilotTimeline {
public:
    struct Step {
        double t_start;
        double dt;
        std::uint32_t segment;
        std::uint32_t first_kernel;
        std::uint32_t kernel_count;
    };

    struct Kernel {
        SectorId sector;
        std::uint32_t first_target;
        std::uint32_t target_count;
        double total_rate;
        bool forced;
        bool stranded;
    };

    struct Target {
        SectorId sector;
        double cumulative;
    };

    PilotTimeline(const Schedule& schedule, const StateVector& initial_pilot, const BeableSpec& spec,
                  const StepPolicy& policy = {});

    const Schedule& schedule() const noexcept { return *schedule_; }
    const BeableSpec& spec() const noexcept { return *spec_; }
    const StepPolicy& policy() const noexcept { return policy_; }

    std::span<const Step> steps() const noexcept { return steps_; }
    std::span<const Target> targets(const Kernel& k) const
    {
        return std::span<const Target>(targets_).subspan(k.first_target, k.target_count);
    }
    /// Kernel of `sector` at `step`, or nullptr if the sector was empty at the step midpoint.
    const Kernel* find_kernel(std::size_t step, SectorId sector) const;
    /// Law used when find_kernel returns nullptr.
    JumpKernel fallback_kernel(std::size_t step, SectorId sector) const;

    const SectorDistribution& initial_weights() const noexcept { return initial_weights_; }
    /// Born weights of the pilot at the end of `step`.
    std::span<const double> weights_after(std::size_t step) const;
    /// Born weights of the pilot at time t (t_start <= t <= t_final).
    SectorDistribution weights_at(double t) const;

    double step_end(std::size_t step) const { return step_end_.at(step); }
    /// Number of steps that end at or before t.
    std::size_t steps_completed_by(double t) const;

    const StateVector& initial_pilot() const noexcept { return initial_pilot_; }
    const StateVector& final_pilot() const noexcept { return final_pilot_; }

    /// Kernels built for starved sectors (diagnostic).
    std::size_t forced_kernel_count() const noexcept { return forced_kernels_; }
    int deepest_halving() const noexcept { return deepest_halving_; }

private:
    std::shared_ptr<const Schedule> schedule_;
    std::shared_ptr<const BeableSpec> spec_;
    StepPolicy policy_;
    StateVector initial_pilot_;
    StateVector final_pilot_;
    std::vector<Step> steps_;
    std::vector<Kernel> kernels_;
    std::vector<Target> targets_;
    std::vector<double> step_end_;
    SectorDistribution initial_weights_;
    std::vector<double> weights_after_;
    std::vector<std::vector<std::vector<SectorId>>> coupled_; // [segment][sector]
    std::size_t forced_kernels_ = 0;
    int deepest_halving_ = 0;
};

} // namespace bellsim
