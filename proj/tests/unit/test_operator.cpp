#include <doctest.h>

#include <bellsim/operator.hpp>

using namespace bellsim;

TEST_SUITE("operator")
{
    TEST_CASE("hermiticity is enforced on request")
    {
        const auto space = make_space({{"Q", {"a", "b"}}});
        Eigen::MatrixXcd m(2, 2);
        m << 0.0, 1.0, 0.0, 0.0;
        CHECK_THROWS_AS(Operator(space, m, true), Error);
        CHECK_NOTHROW(Operator(space, m, false));
        CHECK_THROWS_AS(Operator(space, Eigen::MatrixXcd::Zero(3, 3), false), Error);
        const Operator h(space, m + m.adjoint(), true);
        CHECK(h.hermiticity_defect() == 0.0);
        CHECK(Operator::identity(space).unitarity_defect() == 0.0);
    }

    TEST_CASE("embedding pads with identities in the target's factor order")
    {
        const auto target = make_space({{"A", {"0", "1"}}, {"B", {"0", "1", "2"}}});
        const auto local_space = make_space({{"B", {"0", "1", "2"}}});
        Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(3, 3);
        x(1, 0) = 1.0;
        x(0, 1) = 1.0;
        x(2, 2) = 1.0;
        const auto e = embed_operator(Operator(local_space, x, true), target);
        Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(6, 6);
        expected.block(0, 0, 3, 3) = x;
        expected.block(3, 3, 3, 3) = x;
        CHECK((e.entries() - expected).cwiseAbs().maxCoeff() == 0.0);
    }

    TEST_CASE("embedding of a reordered two-factor operator")
    {
        const auto target = make_space({{"A", {"0", "1"}}, {"B", {"0", "1"}}, {"C", {"0", "1"}}});
        const auto local_space = make_space({{"C", {"0", "1"}}, {"A", {"0", "1"}}});
        // |c a> -> |c, not a> when c = 1 (a CNOT controlled by C).
        Eigen::MatrixXcd cnot = Eigen::MatrixXcd::Zero(4, 4);
        cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1.0;
        const auto e = embed_operator(Operator(local_space, cnot, true), target);
        const auto in = basis_state(target, {{"A", "0"}, {"B", "1"}, {"C", "1"}});
        const auto expected = basis_state(target, {{"A", "1"}, {"B", "1"}, {"C", "1"}});
        CHECK(distance_up_to_phase(e.apply(in), expected) < 1e-15);
        const auto idle = basis_state(target, {{"A", "0"}, {"B", "1"}, {"C", "0"}});
        CHECK(distance_up_to_phase(e.apply(idle), idle) < 1e-15);
    }

    TEST_CASE("foreign factors cannot be embedded")
    {
        const auto target = make_space({{"A", {"0", "1"}}});
        const auto other = make_space({{"Z", {"0", "1"}}});
        CHECK_THROWS_AS(embed_operator(Operator::identity(other), target), Error);
        const auto relabeled = make_space({{"A", {"x", "y"}}});
        CHECK_THROWS_AS(embed_operator(Operator::identity(relabeled), target), Error);
    }

    TEST_CASE("matrix elements and composition")
    {
        const auto space = make_space({{"Q", {"a", "b"}}});
        Eigen::MatrixXcd y(2, 2);
        y << 0.0, Complex(0, -1), Complex(0, 1), 0.0;
        const Operator op(space, y, true);
        const auto a = basis_state(space, {{"Q", "a"}});
        const auto b = basis_state(space, {{"Q", "b"}});
        CHECK(matrix_element(b, op, a) == Complex(0, 1));
        CHECK(matrix_element(a, op, b) == Complex(0, -1));
        CHECK((op.compose(op).entries() - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);
    }
}
