#include "bellsim/master_equation.hpp"

#include <algorithm>
#include <cmath>

namespace bellsim {

double MasterEquationSeries::max_deviation() const
{
    double worst = 0.0;
    for (std::size_t k = 0; k < probabilities.size(); ++k) {
        for (std::size_t i = 0; i < probabilities[k].size(); ++i) {
            worst = std::max(worst, std::abs(probabilities[k][i] - born[k][i]));
        }
    }
    return worst;
}

std::size_t MasterEquationSeries::index_at(double t) const
{
    const double snap = 1e-12 * std::max(1.0, std::abs(t));
    const auto it = std::upper_bound(times.begin(), times.end(), t + snap);
    if (it == times.begin()) {
        throw Error("master equation: time precedes the series");
    }
    return static_cast<std::size_t>(it - times.begin()) - 1;
}

namespace {

void spread(SectorDistribution& next, double mass, const std::vector<std::pair<SectorId, double>>& targets,
            std::map<TransitionKey, double>& flux, std::uint32_t segment, SectorId from)
{
    double previous = 0.0;
    for (const auto& [j, c] : targets) {
        next[j] += mass * (c - previous);
        flux[TransitionKey{segment, from, j}] += mass * (c - previous);
        previous = c;
    }
}

} // namespace

MasterEquationSeries integrate_master_equation(const PilotTimeline& timeline, const SectorDistribution& initial)
{
    const auto& spec = timeline.spec();
    const auto n = spec.sector_count();
    if (initial.size() != n) {
        throw Error("master equation: initial distribution has the wrong size");
    }
    double total = 0.0;
    for (const double p : initial) {
        if (p < 0.0) {
            throw Error("master equation: negative initial probability");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-6) {
        throw Error("master equation: initial distribution does not sum to 1");
    }

    MasterEquationSeries out;
    const auto steps = timeline.steps();
    out.times.reserve(steps.size() + 1);
    out.probabilities.reserve(steps.size() + 1);
    out.born.reserve(steps.size() + 1);
    out.times.push_back(timeline.schedule().t_start());
    out.probabilities.push_back(initial);
    out.born.push_back(timeline.initial_weights());

    SectorDistribution p = initial;
    SectorDistribution next(n);
    std::vector<std::pair<SectorId, double>> buffer;
    for (std::size_t s = 0; s < steps.size(); ++s) {
        next = p;
        for (SectorId i = 0; i < n; ++i) {
            if (p[i] <= 0.0) {
                continue;
            }
            if (const auto* k = timeline.find_kernel(s, i)) {
                if (k->target_count == 0) {
                    continue;
                }
                const double leave = k->forced ? 1.0 : -std::expm1(-k->total_rate * steps[s].dt);
                const double mass = p[i] * leave;
                next[i] -= mass;
                buffer.clear();
                for (const auto& t : timeline.targets(*k)) {
                    buffer.emplace_back(t.sector, t.cumulative);
                }
                spread(next, mass, buffer, out.expected_transitions, steps[s].segment, i);
            } else {
                const auto fb = timeline.fallback_kernel(s, i);
                if (fb.targets.empty()) {
                    continue;
                }
                next[i] -= p[i];
                spread(next, p[i], fb.targets, out.expected_transitions, steps[s].segment, i);
            }
        }
        std::swap(p, next);
        double sum = 0.0;
        for (auto& v : p) {
            v = std::max(v, 0.0);
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-6) {
            throw IntegrationError("master equation: probability drifted to " + std::to_string(sum));
        }
        out.times.push_back(timeline.step_end(s));
        out.probabilities.push_back(p);
        const auto w = timeline.weights_after(s);
        out.born.emplace_back(w.begin(), w.end());
    }
    return out;
}

MasterEquationSeries integrate_master_equation(const Schedule& schedule, const StateVector& initial_pilot,
                                               const SectorDistribution& initial, const BeableSpec& spec,
                                               const StepPolicy& policy)
{
    return integrate_master_equation(PilotTimeline(schedule, initial_pilot, spec, policy), initial);
}

} // namespace bellsim
