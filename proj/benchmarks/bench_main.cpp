#include <benchmark/benchmark.h>

#include <bellsim/ensemble.hpp>
#include <bellsim/fr_experiment.hpp>
#include <bellsim/master_equation.hpp>
#include <bellsim/perspectives.hpp>

using namespace bellsim;

namespace {

const Scenario& fr_scenario()
{
    static const Scenario sc = fr::build_scenario();
    return sc;
}

const PilotTimeline& fr_timeline()
{
    static const PilotTimeline tl(fr_scenario().schedule, fr_scenario().initial_state, fr_scenario().spec);
    return tl;
}

void BM_PropagatorApply(benchmark::State& state)
{
    const auto& sc = fr_scenario();
    const auto& prop = sc.schedule.propagator(3);
    Eigen::VectorXcd amps = sc.initial_state.amplitudes();
    for (auto _ : state) {
        prop.apply(0.01, amps);
        benchmark::DoNotOptimize(amps.data());
    }
}
BENCHMARK(BM_PropagatorApply);

void BM_TimelineBuild(benchmark::State& state)
{
    const auto& sc = fr_scenario();
    StepPolicy policy;
    policy.dt_divisor = static_cast<double>(state.range(0));
    for (auto _ : state) {
        PilotTimeline tl(sc.schedule, sc.initial_state, sc.spec, policy);
        benchmark::DoNotOptimize(tl.steps().size());
    }
}
BENCHMARK(BM_TimelineBuild)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_MasterEquation(benchmark::State& state)
{
    const auto& tl = fr_timeline();
    for (auto _ : state) {
        auto series = integrate_master_equation(tl, tl.initial_weights());
        benchmark::DoNotOptimize(series.times.size());
    }
}
BENCHMARK(BM_MasterEquation)->Unit(benchmark::kMillisecond);

void BM_Trajectory(benchmark::State& state)
{
    const auto& tl = fr_timeline();
    std::uint64_t k = 0;
    for (auto _ : state) {
        auto rng = RandomStream::derive(1, k++);
        auto tr = simulate_trajectory(tl, rng);
        benchmark::DoNotOptimize(tr.jumps.data());
    }
}
BENCHMARK(BM_Trajectory)->Unit(benchmark::kMicrosecond);

void BM_Ensemble(benchmark::State& state)
{
    const auto& tl = fr_timeline();
    const auto threads = static_cast<unsigned>(state.range(0));
    for (auto _ : state) {
        auto stats = run_ensemble(2000, tl, 42, fr_scenario().checkpoints, threads);
        benchmark::DoNotOptimize(stats.n_runs);
    }
}
BENCHMARK(BM_Ensemble)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_FullTable(benchmark::State& state)
{
    const auto& sc = fr_scenario();
    for (auto _ : state) {
        auto table = full_table(sc);
        benchmark::DoNotOptimize(table.rows.data());
    }
}
BENCHMARK(BM_FullTable)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
