#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "psps/oracles.hpp"
#include "psps/scenario1.hpp"
#include "test_support.hpp"

#include <cmath>

using namespace psps;

namespace {

struct Instance {
    TransitionModel model;
    Eigen::VectorXd risk;
    CostSchedule costs;
};

Instance make_instance(int T, std::size_t n, std::uint64_t seed, bool flat = false) {
    return {testsup::random_chain(n, seed), testsup::random_risk(n, seed + 1),
            testsup::random_costs(T, seed + 2, flat)};
}

}  // namespace

TEST_CASE("rolled-out table policy achieves the oracle optimum") {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        int T = 3 + static_cast<int>(seed % 5);
        std::size_t n = 2 + seed % 3;
        int N = 1 + static_cast<int>(seed % 3);
        if (N > T) N = T;
        Instance in = make_instance(T, n, 100 + seed * 17);
        PolicyTableS1 table = build_s1(T, N, in.costs, in.model, in.risk);
        BudgetOracle oracle = oracle_budget(T, N, in.costs, in.model, in.risk);
        auto policy = [&](int t, int k, int u_prev, std::size_t x) {
            return decide_s1(table, T - t + 1, k, u_prev, x);
        };
        PolicyEval eval = eval_policy_budget(T, N, in.costs, in.model, in.risk, policy);
        for (std::size_t x = 0; x < n; ++x) {
            double opt = oracle.J(1, N, 0, x);
            CHECK(eval.value(static_cast<Eigen::Index>(x)) ==
                  doctest::Approx(opt).epsilon(1e-10));
        }
    }
}

TEST_CASE("decision agrees with the oracle argmin away from ties") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        int T = 4 + static_cast<int>(seed % 3);
        std::size_t n = 3;
        int N = 2;
        Instance in = make_instance(T, n, 500 + seed * 31);
        PolicyTableS1 table = build_s1(T, N, in.costs, in.model, in.risk);
        BudgetOracle oracle = oracle_budget(T, N, in.costs, in.model, in.risk);
        const Eigen::VectorXd w = in.model.apply(in.risk);
        for (int t = 1; t <= T; ++t)
            for (int k = 1; k <= N; ++k)
                for (int u = 0; u < 2; ++u)
                    for (std::size_t x = 0; x < n; ++x) {
                        // branch totals recomputed from the oracle's tail
                        double b0 = in.costs.A(t) * w(static_cast<Eigen::Index>(x)) +
                                    switching_cost(u, 0, in.costs.s1(t), in.costs.s2(t));
                        double b1 = in.costs.a(t) +
                                    switching_cost(u, 1, in.costs.s1(t), in.costs.s2(t));
                        for (std::size_t xs = 0; xs < n; ++xs) {
                            double p = in.model.matrix()(static_cast<Eigen::Index>(x),
                                                         static_cast<Eigen::Index>(xs));
                            b0 += p * oracle.J(t + 1, k, 0, xs);
                            b1 += p * oracle.J(t + 1, k - 1, 1, xs);
                        }
                        if (std::abs(b0 - b1) < 1e-9) continue;
                        CHECK(decide_s1(table, T - t + 1, k, u, x) == (b1 < b0 ? 1 : 0));
                    }
    }
}

TEST_CASE("depleted budget pins the threshold at infinity") {
    Instance in = make_instance(4, 3, 7);
    PolicyTableS1 table = build_s1(4, 2, in.costs, in.model, in.risk);
    for (int d = 1; d <= 4; ++d)
        for (int u = 0; u < 2; ++u)
            for (std::size_t x = 0; x < 3; ++x) {
                CHECK(std::isinf(threshold_s1(table, d, 0, u, x)));
                CHECK(decide_s1(table, d, 0, u, x) == 0);
            }
}

TEST_CASE("terminal layer carries the residual exposure") {
    Instance in = make_instance(5, 3, 21);
    PolicyTableS1 table = build_s1(5, 2, in.costs, in.model, in.risk);
    Eigen::VectorXd pw = in.model.apply(in.model.apply(in.risk));
    for (int k = 0; k <= 2; ++k)
        for (int u = 0; u < 2; ++u)
            for (std::size_t x = 0; x < 3; ++x) {
                double expect = u * in.costs.s1(6) +
                                in.costs.A(6) * pw(static_cast<Eigen::Index>(x));
                CHECK(table.g(0, k, u, x) == doctest::Approx(expect));
            }
}

TEST_CASE("a larger budget never hurts") {
    Instance in = make_instance(6, 4, 33);
    PolicyTableS1 table = build_s1(6, 3, in.costs, in.model, in.risk);
    for (int d = 0; d <= 6; ++d)
        for (int k = 1; k <= 3; ++k)
            for (int u = 0; u < 2; ++u)
                for (std::size_t x = 0; x < 4; ++x)
                    CHECK(table.g(d, k, u, x) <= table.g(d, k - 1, u, x) + 1e-12);
}

TEST_CASE("free shutoffs with huge wildfire cost fire on every risky day") {
    // wrp never exceeds 1, so a threshold above 1 can never fire; with A
    // enormous and switching negligible the threshold drops near zero
    auto model = testsup::random_chain(3, 3);
    Eigen::VectorXd f(3);
    f << 1, 1, 0;
    CostSchedule costs = CostSchedule::uniform(4, 1e9, 1.0, 1e-6, 1e-6);
    PolicyTableS1 table = build_s1(4, 4, costs, model, f);
    for (int d = 1; d <= 4; ++d)
        for (std::size_t x = 0; x < 3; ++x) {
            double th = threshold_s1(table, d, d, 0, x);
            CHECK(th < 0.01);
            CHECK(decide_s1(table, d, d, 0, x) == 1);
        }
}

TEST_CASE("argument validation") {
    Instance in = make_instance(3, 2, 91);
    CHECK_THROWS(build_s1(0, 0, in.costs, in.model, in.risk));
    CHECK_THROWS(build_s1(3, 4, in.costs, in.model, in.risk));
    CHECK_THROWS(build_s1(4, 1, in.costs, in.model, in.risk));  // horizon mismatch
    PolicyTableS1 table = build_s1(3, 1, in.costs, in.model, in.risk);
    CHECK_THROWS(threshold_s1(table, 0, 1, 0, 0));
    CHECK_THROWS(threshold_s1(table, 1, 2, 0, 0));
    CHECK_THROWS(threshold_s1(table, 1, 1, 0, 5));
}
