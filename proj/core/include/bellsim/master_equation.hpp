#pragma once

#include <map>
#include <vector>

#include "bellsim/trajectory.hpp"

namespace bellsim {

/// Sector distributions on the timeline grid, with the pilot's Born weights alongside.
struct MasterEquationSeries {
    /// times[0] is the schedule start; times[k] is the end of step k - 1.
    std::vector<double> times;
    std::vector<SectorDistribution> probabilities;
    std::vector<SectorDistribution> born;
    /// Expected number of jumps per trajectory for each (segment, from, to).
    std::map<TransitionKey, double> expected_transitions;

    /// max_k max_i |probabilities[k][i] - born[k][i]|
    double max_deviation() const;
    /// Index of the last grid time <= t.
    std::size_t index_at(double t) const;
};

/// Raised when probability is not conserved to 1e-6.
class IntegrationError : public Error {
public:
    using Error::Error;
};

/*!
 * Deterministic evolution of the sector distribution under the same
 * one-step kernels the trajectory sampler uses:
 *
 *   p_j(t + dt) = p_j(t) stay_j + sum_i p_i(t) (1 - stay_i) q_ij
 *
 * which is the exponential-form discretization of
 * dp_i/dt = sum_j (w_ji p_j - w_ij p_i).
 */
MasterEquationSeries integrate_master_equation(const PilotTimeline& timeline, const SectorDistribution& initial);

/// Convenience form that discretizes the schedule first.
MasterEquationSeries integrate_master_equation(const Schedule& schedule, const StateVector& initial_pilot,
                                               const SectorDistribution& initial, const BeableSpec& spec,
                                               const StepPolicy& policy = {});

} // namespace bellsim
