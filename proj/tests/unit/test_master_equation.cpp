#include <doctest.h>

#include <cmath>

#include <bellsim/master_equation.hpp>
#include <bellsim/scenario.hpp>

using namespace bellsim;

TEST_SUITE("master_equation")
{
    TEST_CASE("rotation ends on the Born outcomes")
    {
        const auto sc = build_scenario(builtin_config("rotation"));
        const PilotTimeline tl(sc.schedule, sc.initial_state, sc.spec);
        const auto series = integrate_master_equation(tl, tl.initial_weights());
        const auto& last = series.probabilities.back();
        CHECK(last[sc.spec.parse("0")] == doctest::Approx(0.0).epsilon(1e-6));
        CHECK(last[sc.spec.parse("1")] == doctest::Approx(1.0 / 3).epsilon(1e-4));
        CHECK(last[sc.spec.parse("2")] == doctest::Approx(2.0 / 3).epsilon(1e-4));
        CHECK(series.max_deviation() < 1e-3);
        double sum = 0.0;
        for (const auto& [key, flux] : series.expected_transitions) {
            CHECK(key.from == sc.spec.parse("0"));
            sum += flux;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
    }

    TEST_CASE("a zero Hamiltonian leaves the distribution unchanged")
    {
        const auto sc = build_scenario(builtin_config("free"));
        const PilotTimeline tl(sc.schedule, sc.initial_state, sc.spec);
        const auto series = integrate_master_equation(tl, tl.initial_weights());
        for (const auto& p : series.probabilities) {
            CHECK(p == tl.initial_weights());
        }
        CHECK(series.max_deviation() == 0.0);
        CHECK(series.expected_transitions.empty());
    }

    TEST_CASE("the deviation from Born weights shrinks with the step")
    {
        const auto sc = build_scenario(builtin_config("fr"));
        double previous = 1.0;
        for (double divisor : {500.0, 1000.0, 2000.0}) {
            StepPolicy policy;
            policy.dt_divisor = divisor;
            const auto series =
                integrate_master_equation(sc.schedule, sc.initial_state, born_weights(sc.initial_state, sc.spec),
                                          sc.spec, policy);
            CHECK(series.max_deviation() < 1e-3);
            CHECK(series.max_deviation() < previous);
            previous = series.max_deviation();
        }
    }

    TEST_CASE("every time point sums to one and lines up with the Born weights")
    {
        const auto sc = build_scenario(builtin_config("fr"));
        const PilotTimeline tl(sc.schedule, sc.initial_state, sc.spec);
        const auto series = integrate_master_equation(tl, tl.initial_weights());
        REQUIRE(series.times.size() == series.probabilities.size());
        REQUIRE(series.times.size() == series.born.size());
        for (std::size_t i = 0; i < series.times.size(); i += 97) {
            double sum = 0.0;
            for (double p : series.probabilities[i]) {
                CHECK(p >= 0.0);
                sum += p;
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        }
        const auto i4 = series.index_at(4.0);
        CHECK(series.times[i4] == doctest::Approx(4.0));
        const auto born4 = tl.weights_at(4.0);
        for (SectorId s = 0; s < sc.spec.sector_count(); ++s) {
            CHECK(series.born[i4][s] == doctest::Approx(born4[s]).epsilon(1e-12));
        }
        CHECK_THROWS_AS(series.index_at(-100.0), Error);
    }

    TEST_CASE("invalid initial distributions")
    {
        const auto sc = build_scenario(builtin_config("rotation"));
        const PilotTimeline tl(sc.schedule, sc.initial_state, sc.spec);
        CHECK_THROWS_AS(integrate_master_equation(tl, SectorDistribution{1.0}), Error);
        CHECK_THROWS_AS(integrate_master_equation(tl, SectorDistribution{1.5, -0.5, 0.0}), Error);
        CHECK_THROWS_AS(integrate_master_equation(tl, SectorDistribution{0.5, 0.0, 0.0}), Error);
    }
}
