#include <doctest.h>

#include <bellsim/fr_experiment.hpp>
#include <bellsim/perspectives.hpp>

using namespace bellsim;

namespace {

void check_row(const TableRow& got, const std::array<double, 4>& want)
{
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
    }
}

} // namespace

TEST_SUITE("perspectives")
{
    TEST_CASE("the four agents' tables")
    {
        for (double tau : {0.2, 0.5, 0.9}) {
            CAPTURE(tau);
            const auto sc = fr::build_scenario(tau);
            const auto table = full_table(sc);
            REQUIRE(table.rows.size() == 4);
            for (const auto& expected : fr::expected_table) {
                CAPTURE(expected.agent);
                check_row(table.row(expected.agent), expected.p);
            }
        }
    }

    TEST_CASE("rows are distributions and pairwise distinct")
    {
        const auto table = full_table(fr::build_scenario());
        for (const auto& [agent, row] : table.rows) {
            double sum = 0.0;
            for (double p : row) {
                CHECK(p >= 0.0);
                sum += p;
            }
            CHECK(sum == doctest::Approx(1.0));
        }
        for (std::size_t a = 0; a < table.rows.size(); ++a) {
            for (std::size_t b = a + 1; b < table.rows.size(); ++b) {
                CHECK(table.rows[a].second != table.rows[b].second);
            }
        }
        CHECK_THROWS_AS(table.row("Z"), Error);
    }

    TEST_CASE("the last measurer's row is the final pilot's marginal")
    {
        const auto sc = fr::build_scenario();
        const auto final_pilot = sc.schedule.evolve(sc.initial_state, sc.schedule.t_start(), sc.schedule.t_final());
        check_row(gods_eye_prediction(sc), table_marginal(sc, final_pilot));
        check_row(full_table(sc).row("W"), fr::expected_table[3].p);
    }

    TEST_CASE("weighting by the uncollapsed pilot")
    {
        const auto sc = fr::build_scenario();
        const auto born = full_table(sc, OutcomeWeighting::pilot_born);
        check_row(born.row("A"), born.row("W"));
        check_row(born.row("F1"), fr::expected_table[0].p);
        CHECK(parse_weighting("pilot_born") == OutcomeWeighting::pilot_born);
        CHECK(to_string(OutcomeWeighting::records_definite) == "records_definite");
        CHECK_THROWS_AS(parse_weighting("psychic"), Error);
    }

    TEST_CASE("outcome weights of the first measurer")
    {
        const auto sc = fr::build_scenario();
        const auto w = outcome_weights(sc, "F1", OutcomeWeighting::records_definite);
        REQUIRE(w.size() == 2);
        CHECK(w[0].first == "head");
        CHECK(w[0].second == doctest::Approx(1.0 / 3));
        CHECK(w[1].second == doctest::Approx(2.0 / 3));
        CHECK_THROWS_AS(outcome_weights(sc, "nobody", OutcomeWeighting::records_definite), Error);
    }

    TEST_CASE("a scenario without a table has no predictions")
    {
        const auto sc = build_scenario(builtin_config("rotation"));
        CHECK_THROWS_AS(full_table(sc), Error);
    }
}
