#include <doctest.h>

#include <cmath>

#include <bellsim/ensemble.hpp>
#include <bellsim/fr_experiment.hpp>

using namespace bellsim;

TEST_SUITE("fr_experiment")
{
    TEST_CASE("the evolved pilot matches the hand-built states")
    {
        for (double tau : {0.2, 0.5, 0.9}) {
            CAPTURE(tau);
            const auto sc = fr::build_scenario(tau);
            for (int k = 0; k <= 4; ++k) {
                CAPTURE(k);
                const auto psi = sc.schedule.evolve(sc.initial_state, sc.schedule.t_start(), k);
                const auto ref = fr::reference_pilot(sc, k);
                CHECK(ref.is_normalized());
                CHECK(distance_up_to_phase(psi, ref) < 1e-8);
            }
        }
    }

    TEST_CASE("sector structure of the reference pilots")
    {
        const auto sc = fr::build_scenario();
        CHECK(decompose(fr::reference_pilot(sc, 0), sc.spec).size() == 2);
        const auto at2 = decompose(fr::reference_pilot(sc, 2), sc.spec);
        CHECK(at2.size() == 3);
        for (const auto& c : at2) {
            CHECK(c.weight == doctest::Approx(1.0 / 3));
        }
        CHECK(fr::reference_real(sc, 2).weight == doctest::Approx(1.0 / 3));
        CHECK(fr::reference_real(sc, 3).weight == doctest::Approx(1.0 / 12));
        CHECK(fr::reference_real(sc, 4).weight == doctest::Approx(1.0 / 48));
        CHECK(sc.spec.to_string(fr::chain_sector(sc, 4)) == "tail,-,ok,ok");
        CHECK_THROWS_AS(fr::reference_pilot(sc, 5), Error);
    }

    TEST_CASE("final expansion has sixteen components")
    {
        const auto sc = fr::build_scenario();
        const auto parts = fr::final_expansion(sc);
        CHECK(parts.size() == 16);
        double total = 0.0, ok_ok = 0.0, tail_ok_ok = 0.0;
        for (const auto& c : parts) {
            total += c.weight;
            if (sc.spec.label(c.sector, "A") == "ok" && sc.spec.label(c.sector, "W") == "ok") {
                CHECK(c.weight == doctest::Approx(1.0 / 48));
                ok_ok += c.weight;
                if (sc.spec.label(c.sector, "F1") == "tail") {
                    tail_ok_ok += c.weight;
                }
            }
        }
        CHECK(total == doctest::Approx(1.0));
        CHECK(ok_ok == doctest::Approx(1.0 / 12));
        CHECK(tail_ok_ok == doctest::Approx(1.0 / 24));
        CHECK(std::abs(fr::stated_phi4_amplitude) > std::sqrt(1.0 / 48) + 0.05);
    }

    TEST_CASE("tau outside (0, 1) is rejected")
    {
        CHECK_THROWS_AS(fr::build_scenario(0.0), Error);
        CHECK_THROWS_AS(fr::build_scenario(1.0), Error);
    }

    TEST_CASE("claims report on a small ensemble")
    {
        const auto sc = fr::build_scenario();
        const PilotTimeline tl(sc.schedule, sc.initial_state, sc.spec);
        const auto stats = run_ensemble(2000, tl, 11, sc.checkpoints);
        const auto r = fr::check_claims(stats, sc);
        CHECK(r.n_runs == 2000);
        CHECK(r.r1_tail + r.r1_head == 2000);
        CHECK(r.head_tail_jumps_during_F2 == 0);
        CHECK(r.jumps_after_final_measurement == 0);
        CHECK(r.eq2_refuted());
        CHECK(r.eq6_witnessed());
        CHECK(r.phi_chain <= r.r4_tail_x4_ok_w4_ok);
        CHECK(r.phi_chain_z_minus <= r.phi_chain);

        const auto partial = run_ensemble(10, tl, 11, {0.0, 1.0});
        CHECK_THROWS_AS(fr::check_claims(partial, sc), Error);
    }
}
