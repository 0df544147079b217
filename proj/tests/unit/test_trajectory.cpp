#include <doctest.h>

#include <cmath>
#include <sstream>

#include <bellsim/scenario.hpp>
#include <bellsim/trajectory.hpp>

using namespace bellsim;

TEST_SUITE("trajectory")
{
    TEST_CASE("sampling a sector by inverse CDF")
    {
        const SectorDistribution d{0.0, 0.25, 0.0, 0.75};
        CHECK(sample_sector(d, 0.1) == 1);
        CHECK(sample_sector(d, 0.25 + 1e-12) == 3);
        CHECK(sample_sector(d, 0.999999) == 3);
        CHECK_THROWS_AS(sample_sector(SectorDistribution{}, 0.5), Error);
    }

    TEST_CASE("jumps are time ordered and chain together")
    {
        const auto sc = build_scenario(builtin_config("fr"));
        const PilotTimeline tl(sc.schedule, sc.initial_state, sc.spec);
        for (std::uint64_t k = 0; k < 200; ++k) {
            auto rng = RandomStream::derive(1, k);
            const auto tr = simulate_trajectory(tl, rng);
            SectorId at = tr.initial;
            double last = sc.schedule.t_start();
            for (const auto& j : tr.jumps) {
                CHECK(j.from == at);
                CHECK(j.to != j.from);
                CHECK(j.time >= last);
                CHECK(j.time <= sc.schedule.t_final());
                const auto& seg = sc.schedule.segments()[j.segment];
                CHECK(j.time >= seg.t_start - 1e-12);
                CHECK(j.time <= seg.t_end + 1e-12);
                at = j.to;
                last = j.time;
            }
            CHECK(tr.final_sector() == at);
            CHECK(tr.sector_at(sc.schedule.t_final()) == at);
            CHECK(tr.sector_at(sc.schedule.t_start()) == tr.initial);
            CHECK(tr.sector_after_steps(tl.steps().size()) == at);
        }
    }

    TEST_CASE("identical streams give identical trajectories")
    {
        const auto sc = build_scenario(builtin_config("fr"));
        const PilotTimeline tl(sc.schedule, sc.initial_state, sc.spec);
        auto a = RandomStream::derive(99, 5);
        auto b = RandomStream::derive(99, 5);
        const auto ta = simulate_trajectory(tl, a);
        const auto tb = simulate_trajectory(tl, b);
        CHECK(jumps_csv(ta, sc.spec) == jumps_csv(tb, sc.spec));
        CHECK(ta.initial == tb.initial);
    }

    TEST_CASE("the schedule overload matches the timeline walk")
    {
        const auto sc = build_scenario(builtin_config("rotation"));
        const PilotTimeline tl(sc.schedule, sc.initial_state, sc.spec);
        auto a = RandomStream(17);
        auto b = RandomStream(17);
        const auto ready = sc.spec.parse("0");
        const auto ta = simulate_trajectory(tl, ready, a);
        const auto tb = simulate_trajectory(sc.schedule, sc.initial_state, ready, sc.spec, StepPolicy{}, b);
        CHECK(jumps_csv(ta, sc.spec) == jumps_csv(tb, sc.spec));
        CHECK_THROWS_AS(simulate_trajectory(tl, 99, a), Error);
    }

    TEST_CASE("rotation trajectories end on the Born outcomes")
    {
        const auto sc = build_scenario(builtin_config("rotation"));
        const PilotTimeline tl(sc.schedule, sc.initial_state, sc.spec);
        const int n = 6000;
        int ones = 0;
        for (int k = 0; k < n; ++k) {
            auto rng = RandomStream::derive(2024, static_cast<std::uint64_t>(k));
            const auto tr = simulate_trajectory(tl, rng);
            REQUIRE(tr.jumps.size() == 1);
            CHECK(tr.jumps[0].from == sc.spec.parse("0"));
            ones += tr.final_sector() == sc.spec.parse("1") ? 1 : 0;
        }
        const double p = 1.0 / 3;
        CHECK(std::abs(static_cast<double>(ones) / n - p) < 4 * std::sqrt(p * (1 - p) / n));
    }

    TEST_CASE("a free segment never jumps")
    {
        const auto sc = build_scenario(builtin_config("free"));
        const PilotTimeline tl(sc.schedule, sc.initial_state, sc.spec);
        for (std::uint64_t k = 0; k < 50; ++k) {
            auto rng = RandomStream::derive(3, k);
            CHECK(simulate_trajectory(tl, rng).jumps.empty());
        }
    }

    TEST_CASE("a trajectory placed in a sector the pilot never reaches is moved to a live one")
    {
        auto config = builtin_config("rotation");
        config.initial_state = {{1.0, {{"S", "1"}}}};
        const auto sc = build_scenario(config);
        const PilotTimeline tl(sc.schedule, sc.initial_state, sc.spec);
        auto rng = RandomStream(5);
        const auto tr = simulate_trajectory(tl, sc.spec.parse("2"), rng);
        REQUIRE(tr.jumps.size() == 2);
        CHECK(tr.jumps[0].forced);
        CHECK(tr.jumps[0].to == sc.spec.parse("0"));
        CHECK(tr.jumps[0].step == 0);
        CHECK_FALSE(tr.jumps[1].forced);
        CHECK(tr.final_sector() == sc.spec.parse("1"));
        CHECK(tr.starved == 1);
        CHECK(tr.stranded == 0);
    }

    TEST_CASE("a newly populated sector is not forced out")
    {
        const auto sc = build_scenario(builtin_config("rotation"));
        const PilotTimeline tl(sc.schedule, sc.initial_state, sc.spec);
        auto rng = RandomStream(5);
        const auto tr = simulate_trajectory(tl, sc.spec.parse("2"), rng);
        CHECK(tr.jumps.empty());
        CHECK(tr.starved == 0);
    }

    TEST_CASE("CSV export")
    {
        const auto sc = build_scenario(builtin_config("rotation"));
        const PilotTimeline tl(sc.schedule, sc.initial_state, sc.spec);
        auto rng = RandomStream(8);
        const auto tr = simulate_trajectory(tl, sc.spec.parse("0"), rng);
        std::istringstream in(jumps_csv(tr, sc.spec));
        std::string line;
        std::getline(in, line);
        CHECK(line == "t,from_sector,to_sector");
        int rows = 0;
        while (std::getline(in, line)) {
            ++rows;
            CHECK(line.find("\"0\"") != std::string::npos);
        }
        CHECK(rows == 1);
    }
}
