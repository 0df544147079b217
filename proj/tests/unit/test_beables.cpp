#include <doctest.h>

#include <cmath>

#include <bellsim/beables.hpp>

using namespace bellsim;

namespace {

SpacePtr space3()
{
    return make_space({{"S", {"up", "down"}}, {"E", {"0", "1", "2"}}, {"P", {"0", "a"}}});
}

} // namespace

TEST_SUITE("beables")
{
    TEST_CASE("sectors list beables in the space's factor order")
    {
        const auto space = space3();
        const BeableSpec spec(space, {"P", "E"});
        CHECK(spec.sector_count() == 6);
        CHECK(spec.beable_factors() == std::vector<std::size_t>{1, 2});
        const auto id = spec.parse("2,a");
        CHECK(id == 5);
        CHECK(spec.to_string(id) == "2,a");
        CHECK(spec.label(id, "E") == "2");
        CHECK(spec.label(id, "P") == "a");
        CHECK(spec.sector_from_labels({{"P", "a"}, {"E", "2"}}) == id);
        CHECK(spec.basis_of(id).size() == 2);
        for (SectorId s = 0; s < spec.sector_count(); ++s) {
            CHECK(spec.parse(spec.to_string(s)) == s);
            CHECK(spec.id_of(spec.sector(s)) == s);
        }
        for (std::size_t b = 0; b < space->dimension(); ++b) {
            const auto s = spec.sector_of_basis(b);
            CHECK(spec.value(s, spec.position_of("E")) == space->digit(b, 1));
        }
    }

    TEST_CASE("invalid specs and sector strings")
    {
        const auto space = space3();
        CHECK_THROWS_AS(BeableSpec(space, {}), Error);
        CHECK_THROWS_AS(BeableSpec(space, {"E", "E"}), Error);
        CHECK_THROWS_AS(BeableSpec(space, {"X"}), Error);
        const BeableSpec spec(space, {"E"});
        CHECK_THROWS_AS(spec.parse("7"), Error);
        CHECK_THROWS_AS(spec.parse("1,1"), Error);
        CHECK_THROWS_AS(spec.label(0, "S"), Error);
        CHECK_THROWS_AS(spec.sector(99), Error);
    }

    TEST_CASE("decomposition reconstructs the state")
    {
        const auto space = space3();
        const BeableSpec spec(space, {"E"});
        StateVector psi(space, Eigen::VectorXcd::Random(12));
        psi = psi.normalized();
        const auto parts = decompose(psi, spec);
        StateVector sum(space);
        double total = 0.0;
        for (const auto& c : parts) {
            sum = sum + c.component;
            total += c.weight;
            CHECK(c.weight == doctest::Approx(c.component.norm_squared()));
            for (std::size_t b = 0; b < space->dimension(); ++b) {
                if (spec.sector_of_basis(b) != c.sector) {
                    CHECK(c.component[b] == Complex{});
                }
            }
        }
        CHECK((sum.amplitudes() - psi.amplitudes()).cwiseAbs().maxCoeff() < 1e-15);
        CHECK(total == doctest::Approx(1.0));
    }

    TEST_CASE("born weights and marginals")
    {
        const auto space = space3();
        const BeableSpec spec(space, {"E", "P"});
        const double r = 1.0 / std::sqrt(3.0);
        const auto psi = superpose({{r, basis_state(space, {{"S", "up"}, {"E", "0"}, {"P", "0"}})},
                                    {r, basis_state(space, {{"S", "down"}, {"E", "0"}, {"P", "0"}})},
                                    {r, basis_state(space, {{"S", "up"}, {"E", "2"}, {"P", "a"}})}});
        const auto w = born_weights(psi, spec);
        CHECK(w[spec.parse("0,0")] == doctest::Approx(2.0 / 3));
        CHECK(w[spec.parse("2,a")] == doctest::Approx(1.0 / 3));
        const auto m = marginal(w, spec, {"P"});
        CHECK(m.at({0}) == doctest::Approx(2.0 / 3));
        CHECK(m.at({1}) == doctest::Approx(1.0 / 3));
        CHECK_THROWS_AS(born_weights(psi * 2.0, spec), Error);
        CHECK_THROWS_AS(marginal(SectorDistribution(2), spec, {"P"}), Error);
    }
}
