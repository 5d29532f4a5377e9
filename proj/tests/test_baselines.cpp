#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "psps/baselines_sim.hpp"
#include "psps/oracles.hpp"
#include "test_support.hpp"

#include <cmath>
#include <sstream>

using namespace psps;

namespace {

struct Instance {
    TransitionModel model;
    Eigen::VectorXd risk;
    CostSchedule costs;
};

Instance make_instance(int T, std::size_t n, std::uint64_t seed) {
    return {testsup::random_chain(n, seed), testsup::random_risk(n, seed + 1),
            testsup::random_costs(T, seed + 2)};
}

}  // namespace

TEST_CASE("episode replay prices the sampled path") {
    Instance in = make_instance(4, 3, 3100);
    std::vector<std::size_t> path = {0, 1, 2, 0, 1, 2};
    Policy fire_once = [](int t, int, int, std::size_t) {
        return PolicyDecision{t == 2 ? 1 : 0, 0.5};
    };
    EpisodeResult ep = run_policy(path, in.costs, in.model, in.risk, 2, fire_once);
    REQUIRE(ep.decisions == std::vector<int>{0, 1, 0, 0});
    CHECK(ep.count == 1);
    CHECK(ep.budget_left == std::vector<int>{2, 1, 1, 1});

    const Eigen::VectorXd w = in.model.apply(in.risk);
    double realized = in.costs.A(1) * in.risk(2)  // day 1 keeps, next state 2
                      + in.costs.a(2) + in.costs.s2(2)  // day 2 fires from u=0
                      + in.costs.A(3) * in.risk(1) + in.costs.s1(3)  // back on
                      + in.costs.A(4) * in.risk(2)
                      + in.costs.A(5) * w(2);  // boundary, u_T = 0
    CHECK(ep.total_realized == doctest::Approx(realized));
    double expected = in.costs.A(1) * w(1) + in.costs.a(2) + in.costs.s2(2) +
                      in.costs.A(3) * w(0) + in.costs.s1(3) + in.costs.A(4) * w(1) +
                      in.costs.A(5) * w(2);
    CHECK(ep.total_expected == doctest::Approx(expected));
}

TEST_CASE("firing on an exhausted budget is a contract violation") {
    Instance in = make_instance(3, 2, 3200);
    std::vector<std::size_t> path = {0, 0, 1, 0, 1};
    Policy always = [](int, int, int, std::size_t) { return PolicyDecision{1, 0.0}; };
    CHECK_THROWS_AS(run_policy(path, in.costs, in.model, in.risk, 1, always),
                    std::logic_error);
    CHECK_NOTHROW(run_policy(path, in.costs, in.model, in.risk, -1, always));
    CHECK_THROWS(run_policy({0, 1}, in.costs, in.model, in.risk, -1, always));
}

TEST_CASE("mean expected episode cost converges to the table value") {
    Instance in = make_instance(5, 3, 3300);
    PolicyTableS1 table = build_s1(5, 2, in.costs, in.model, in.risk);
    std::vector<PolicySpec> specs{{"p1", policy_from_s1(table), 2}};
    auto summaries = monte_carlo(in.model, in.risk, in.costs, 0, 5, 4000, 77, specs);
    REQUIRE(summaries.size() == 1);
    // optimal expected value; Monte-Carlo mean within a few standard errors
    double opt = table.g(5, 2, 0, 0);
    double se = summaries[0].std_expected_cost / std::sqrt(4000.0);
    CHECK(std::abs(summaries[0].mean_expected_cost - opt) < 5.0 * se + 1e-9);
}

TEST_CASE("no other policy beats the optimum on the same years") {
    Instance in = make_instance(6, 3, 3400);
    PolicyTableS1 table = build_s1(6, 2, in.costs, in.model, in.risk);
    const Eigen::VectorXd w = in.model.apply(in.risk);
    Policy front_load = [](int t, int, int, std::size_t) {
        return PolicyDecision{t <= 2 ? 1 : 0, 0.0};
    };
    std::vector<PolicySpec> specs{{"p1", policy_from_s1(table), 2},
                                  {"never", threshold_policy(w, 2.0), 2},
                                  {"front", front_load, 2}};
    auto s = monte_carlo(in.model, in.risk, in.costs, 0, 6, 600, 99, specs);
    CHECK(s[0].mean_expected_cost <= s[1].mean_expected_cost + 1e-9);
    CHECK(s[0].mean_expected_cost <= s[2].mean_expected_cost + 1e-9);
}

TEST_CASE("historical threshold averages the yearly N-th largest") {
    std::vector<std::vector<double>> years = {{0.1, 0.9, 0.4, 0.2}, {0.5, 0.3, 0.8, 0.6}};
    CHECK(historical_threshold(years, 1) == doctest::Approx(0.85));
    CHECK(historical_threshold(years, 2) == doctest::Approx((0.4 + 0.6) / 2));
    CHECK_THROWS(historical_threshold({}, 1));
    CHECK_THROWS(historical_threshold(years, 0));
    CHECK_THROWS(historical_threshold(years, 5));
}

TEST_CASE("hindsight picks the largest realized days") {
    std::vector<double> realized = {3.0, 7.0, 7.0, 1.0, 5.0};
    CHECK(hindsight_policy(realized, 2) == std::vector<int>{0, 1, 1, 0, 0});
    CHECK(hindsight_policy(realized, 0) == std::vector<int>{0, 0, 0, 0, 0});
    CHECK(hindsight_policy(realized, 5) == std::vector<int>{1, 1, 1, 1, 1});
    CHECK_THROWS(hindsight_policy(realized, 6));
}

TEST_CASE("sampled years are deterministic and decorrelated") {
    Instance in = make_instance(4, 3, 3500);
    auto a = sample_years(in.model, 0, 4, 3, 11);
    auto b = sample_years(in.model, 0, 4, 3, 11);
    CHECK(a == b);
    CHECK(a.size() == 3);
    for (const auto& y : a) {
        CHECK(y.size() == 6);
        CHECK(y.front() == 0);
    }
    CHECK(a[0] != a[1]);
}

TEST_CASE("trace rows follow the csv contract") {
    Instance in = make_instance(3, 2, 3600);
    std::vector<std::size_t> path = {0, 1, 0, 1, 0};
    EpisodeResult ep =
        run_policy(path, in.costs, in.model, in.risk, -1,
                   threshold_policy(in.model.apply(in.risk), 0.4));
    std::ostringstream out;
    write_trace(out, ep);
    std::istringstream lines(out.str());
    std::string line;
    std::getline(lines, line);
    CHECK(line == "day,metric,threshold,decision,budget_left");
    int rows = 0;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows == 3);
}

TEST_CASE("cpp path cost decomposes day by day") {
    std::uint64_t ctr = 0;
    std::size_t n = 3;
    Eigen::VectorXd q(3);
    q << 80.0, 120.0, 150.0;
    QuadCost quad = QuadCost::uniform(3, 0.02, 1.5, 10.0);
    CppParams params = CppParams::uniform(3, 2, 30.0, 25.0);
    auto model = testsup::random_chain(n, 3700 + ctr);
    std::vector<std::size_t> path = {0, 1, 2, 0, 1};
    std::vector<int> u = {0, 1, 0};
    double total = cpp_path_cost(path, params, quad, q, model, u);
    double manual = power_cost(q(2), quad, 1) +
                    power_cost(q(0) - 30.0, quad, 2) + 25.0 +
                    power_cost(q(1), quad, 3);
    Eigen::ArrayXd qa = q.array();
    Eigen::VectorXd cvec = (0.02 * qa.square() + 1.5 * qa + 10.0).matrix();
    manual += model.apply(cvec)(1);
    CHECK(total == doctest::Approx(manual));
    CHECK_THROWS(cpp_path_cost({0, 1}, params, quad, q, model, u));
}

TEST_CASE("cpp replay matches the path cost of its own decisions") {
    std::size_t n = 3;
    Eigen::VectorXd q(3);
    q << 90.0, 110.0, 140.0;
    QuadCost quad = QuadCost::uniform(4, 0.015, 2.0, 5.0);
    CppParams params = CppParams::uniform(4, 2, 25.0, 60.0);
    auto model = testsup::random_chain(n, 3800);
    PolicyTableCpp table = build_cpp(4, params, quad, q, model);
    auto path = sample_path(model, 0, 5, 7);
    EpisodeResult ep = run_policy_cpp(path, params, quad, q, model, 2, policy_from_cpp(table));
    CHECK(ep.count <= 2);
    CHECK(ep.total_realized ==
          doctest::Approx(cpp_path_cost(path, params, quad, q, model, ep.decisions)));
}

TEST_CASE("savings ratio normalizes against hindsight") {
    CHECK(savings_vs_hindsight(100.0, 90.0, 80.0) == doctest::Approx(0.5));
    CHECK(savings_vs_hindsight(100.0, 80.0, 80.0) == doctest::Approx(1.0));
    CHECK_THROWS(savings_vs_hindsight(100.0, 90.0, 100.0));
}
