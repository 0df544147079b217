#include <doctest.h>

#include <array>

#include <bellsim/tensor_space.hpp>

using namespace bellsim;

TEST_SUITE("tensor_space")
{
    TEST_CASE("leftmost factor is the most significant digit")
    {
        const auto space = make_space({{"S", {"up", "down"}}, {"E", {"0", "1", "2"}}});
        CHECK(space->dimension() == 6);
        CHECK(space->stride(0) == 3);
        CHECK(space->stride(1) == 1);
        CHECK(space->index_of(LabelAssignment{{"S", "down"}, {"E", "2"}}) == 5);
        CHECK(space->digit(5, 0) == 1);
        CHECK(space->digit(5, 1) == 2);
        CHECK(space->describe(5) == "|down,2>");
    }

    TEST_CASE("digits round trip for every basis state")
    {
        const auto space = make_space({{"A", {"x", "y", "z"}}, {"B", {"p", "q"}}, {"C", {"0", "1", "2", "3"}}});
        for (std::size_t i = 0; i < space->dimension(); ++i) {
            std::array<std::size_t, 3> d{space->digit(i, 0), space->digit(i, 1), space->digit(i, 2)};
            CHECK(space->index_of(d) == i);
        }
    }

    TEST_CASE("lookups")
    {
        const auto space = make_space({{"S", {"up", "down"}}, {"E", {"0", "1"}}});
        CHECK(space->factor_index("E") == 1);
        CHECK(space->label_index(0, "down") == 1);
        CHECK_FALSE(space->find_factor("Q").has_value());
        CHECK_THROWS_AS(space->factor_index("Q"), Error);
        CHECK_THROWS_AS(space->label_index(0, "sideways"), Error);
        CHECK_THROWS_AS(space->index_of(LabelAssignment{{"S", "up"}}), Error);
    }

    TEST_CASE("invalid factor lists are rejected")
    {
        CHECK_THROWS_AS(make_space({}), Error);
        CHECK_THROWS_AS(make_space({{"S", {"up"}}}), Error);
        CHECK_THROWS_AS(make_space({{"S", {"up", "up"}}}), Error);
        CHECK_THROWS_AS(make_space({{"S", {"up", "down"}}, {"S", {"a", "b"}}}), Error);
        CHECK_THROWS_AS(make_space({{"", {"a", "b"}}}), Error);
    }

    TEST_CASE("subspace keeps the requested order")
    {
        const auto space = make_space({{"S", {"up", "down"}}, {"E", {"0", "1", "2"}}});
        const std::array<std::string, 1> ids{"E"};
        const auto sub = subspace(*space, ids);
        CHECK(sub->dimension() == 3);
        CHECK(sub->factor(0).id == "E");
        CHECK(*sub == *make_space({{"E", {"0", "1", "2"}}}));
        const std::array<std::string, 1> bad{"Q"};
        CHECK_THROWS_AS(subspace(*space, bad), Error);
    }
}
