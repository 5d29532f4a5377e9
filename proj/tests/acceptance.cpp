// End-to-end acceptance checks: each criterion prints one PASS/FAIL line and
// the process exits nonzero if any of them fail. The references are the
// brute-force oracles and literal recursions, which share no code with the
// production table builders.

#include "psps/baselines_sim.hpp"
#include "psps/fixture.hpp"
#include "psps/oracles.hpp"
#include "psps/scenario3.hpp"
#include "test_support.hpp"

#include <sys/resource.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

using namespace psps;
using clk = std::chrono::steady_clock;

namespace {

double seconds_since(clk::time_point t0) {
    return std::chrono::duration<double>(clk::now() - t0).count();
}

bool close(double a, double b, double rel = 1e-9) {
    return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

struct Instance {
    TransitionModel model;
    Eigen::VectorXd risk;
    CostSchedule costs;
};

Instance make_instance(int T, std::size_t n, std::uint64_t seed) {
    return {testsup::random_chain(n, seed), testsup::random_risk(n, seed + 1),
            testsup::random_costs(T, seed + 2)};
}

// ---- criterion 1: budgeted shutoff policy attains the exhaustive optimum

bool check_budgeted_optimum(double* elapsed) {
    auto t0 = clk::now();
    bool ok = true;
    for (std::uint64_t s = 0; s < 50; ++s) {
        int T = 3 + static_cast<int>(s % 6);
        std::size_t n = 2 + s % 3;
        int N = std::min(T, 1 + static_cast<int>(s % 3));
        Instance in = make_instance(T, n, 40000 + s * 13);
        PolicyTableS1 table = build_s1(T, N, in.costs, in.model, in.risk);
        BudgetOracle oracle = oracle_budget(T, N, in.costs, in.model, in.risk);
        PolicyEval eval = eval_policy_budget(
            T, N, in.costs, in.model, in.risk,
            [&](int t, int k, int u_prev, std::size_t x) {
                return decide_s1(table, T - t + 1, k, u_prev, x);
            });
        for (std::size_t x = 0; x < n; ++x)
            ok = ok && close(eval.value(static_cast<Eigen::Index>(x)), oracle.value(x));
    }
    *elapsed = seconds_since(t0);
    return ok && *elapsed < 10.0;
}

// ---- criterion 2: accumulated-cost recursions split into carried cost
// plus the stored tables

bool check_value_decomposition() {
    bool ok = true;
    for (std::uint64_t s = 0; s < 20; ++s) {
        int T = 2 + static_cast<int>(s % 4);
        std::size_t n = 2 + s % 2;
        int N = std::min(T, 1 + static_cast<int>(s % 3));
        Instance in = make_instance(T, n, 41000 + s * 17);
        Eigen::VectorXd wrp = in.model.apply(in.risk);
        PolicyTableS1 s1 = build_s1(T, N, in.costs, in.model, in.risk);
        PolicyTableS2 s2 = build_s2(T, in.costs, in.model, in.risk);
        std::uint64_t ctr = 0;
        for (int d = 0; d <= T; ++d)
            for (int u = 0; u < 2; ++u)
                for (std::size_t x = 0; x < n; ++x) {
                    for (int k = 0; k <= N; ++k) {
                        double w = 500.0 * uniform_from(s + 1, ctr++);
                        double v = v_literal(T, N, in.costs, in.model, wrp, d, w, k, u, x);
                        ok = ok && close(v, w + s1.g(d, k, u, x));
                    }
                    double w = 500.0 * uniform_from(s + 2, ctr++);
                    double z = z_literal(T, in.costs, in.model, wrp, d, w, u, x);
                    ok = ok && close(z, w + s2.h(d, u, x));
                }
    }
    return ok;
}

// ---- criterion 3: the per-extra-event penalty is an exact relaxation of
// the hard budget once it clears the enumerated price gap

bool check_penalty_relaxation() {
    bool ok = true;
    for (std::uint64_t s = 0; s < 20; ++s) {
        int T = 3 + static_cast<int>(s % 4);
        std::size_t n = 2 + s % 3;
        int N = std::min(T - 1, 1 + static_cast<int>(s % 2));
        Instance in = make_instance(T, n, 42000 + s * 19);
        BudgetOracle budgeted = oracle_budget(T, N, in.costs, in.model, in.risk);
        PenalizedOracle free_oracle = oracle_penalized(T, N, 0.0, in.costs, in.model, in.risk);
        for (std::size_t x0 = 0; x0 < n; ++x0) {
            double alpha = lemma1_alpha(T, N, in.costs, in.model, in.risk, x0);
            double gamma = alpha + 1e-6 * std::max(1.0, std::abs(alpha));
            // the exactness claim is over committed decision sequences, where
            // the count is deterministic and the cheapest violation costs one
            // whole extra event; enumerate them all
            double best_capped = std::numeric_limits<double>::infinity();
            double best_pen = best_capped, best_over = best_capped;
            std::vector<int> u(static_cast<std::size_t>(T));
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << T); ++mask) {
                int count = 0;
                for (int t = 0; t < T; ++t) {
                    u[static_cast<std::size_t>(t)] = static_cast<int>((mask >> t) & 1u);
                    count += u[static_cast<std::size_t>(t)];
                }
                double cost = open_loop_cost(T, in.costs, in.model, in.risk, x0, u);
                double pen = cost + gamma * std::max(0, count - N);
                best_pen = std::min(best_pen, pen);
                if (count <= N)
                    best_capped = std::min(best_capped, cost);
                else
                    best_over = std::min(best_over, pen);
            }
            // every over-budget sequence prices strictly worse, so the
            // penalized optima are exactly the budget-feasible optima
            ok = ok && best_over > best_capped + 1e-9;
            ok = ok && close(best_pen, best_capped);
            // zero penalty is a pure relaxation, closed loop included
            ok = ok && free_oracle.value(x0) <= budgeted.value(x0) + 1e-9;
            ok = ok && free_oracle.value(x0) <= best_capped + 1e-9;
        }
    }
    return ok;
}

// ---- criterion 4: unbudgeted adjusted policy matches the exhaustive argmin

bool check_adjustment_argmin() {
    bool ok = true;
    for (std::uint64_t s = 0; s < 50; ++s) {
        int T = 3 + static_cast<int>(s % 5);
        std::size_t n = 2 + s % 3;
        Instance in = make_instance(T, n, 43000 + s * 23);
        PolicyTableS2 table = build_s2(T, in.costs, in.model, in.risk);
        AdjustOracle oracle = oracle_adjustment(T, in.costs, in.model, in.risk);
        PolicyEval eval = eval_policy_adjust(
            T, in.costs, in.model, in.risk, [&](int t, int u_prev, std::size_t x) {
                return decide_s2(table, T - t + 1, u_prev, x);
            });
        const Eigen::VectorXd w = in.model.apply(in.risk);
        for (std::size_t x = 0; x < n; ++x)
            ok = ok && close(eval.value(static_cast<Eigen::Index>(x)), oracle.value(x));
        for (int t = 1; t <= T; ++t)
            for (int u = 0; u < 2; ++u)
                for (std::size_t x = 0; x < n; ++x) {
                    double b0 = in.costs.A(t) * w(static_cast<Eigen::Index>(x)) +
                                switching_cost(u, 0, in.costs.s1(t), in.costs.s2(t));
                    double b1 = in.costs.a(t) + in.costs.lambda +
                                switching_cost(u, 1, in.costs.s1(t), in.costs.s2(t));
                    for (std::size_t xs = 0; xs < n; ++xs) {
                        double p = in.model.matrix()(static_cast<Eigen::Index>(x),
                                                     static_cast<Eigen::Index>(xs));
                        b0 += p * oracle.J(t + 1, 0, xs);
                        b1 += p * oracle.J(t + 1, 1, xs);
                    }
                    if (std::abs(b0 - b1) <= 1e-9 * std::max({1.0, b0, b1})) continue;
                    ok = ok && decide_s2(table, T - t + 1, u, x) == (b1 < b0 ? 1 : 0);
                }
    }
    return ok;
}

// ---- criterion 5: cost-budgeted event minimization agrees with full
// enumeration over grid-valued successor budgets

struct GridInstance {
    TransitionModel model;
    Eigen::VectorXd risk;
    CostSchedule costs;
    AlphaGrid grid;
    double alpha_bar;
};

GridInstance make_grid_instance(int T, std::size_t n, std::uint64_t seed) {
    GridInstance in{testsup::random_chain(n, seed), testsup::random_risk(n, seed + 1),
                    testsup::random_costs(T, seed + 2), {}, 0.0};
    double hi = 0.0;
    for (int t = 1; t <= T; ++t) hi += std::max(in.costs.A(t), in.costs.a(t));
    in.grid = AlphaGrid{0.0, hi, hi / 100.0};  // step is 1% of the grid range
    in.alpha_bar = 0.6 * hi;
    return in;
}

/// Reference values with no breakpoint compression or domination pruning:
/// Cartesian enumeration of one grid budget per successor state.
std::vector<double> brute_grid_value(int T, const GridInstance& in) {
    const std::size_t n = in.model.size();
    const std::size_t G = in.grid.size();
    const double vbar = static_cast<double>(T) + 1.0;
    const Eigen::VectorXd w = in.model.apply(in.risk);
    std::vector<double> V(static_cast<std::size_t>(T) * n * G, vbar);
    auto at = [&](int tau, std::size_t x, std::size_t ai) -> double& {
        return V[(static_cast<std::size_t>(tau - 1) * n + x) * G + ai];
    };
    auto cost = [&](int tau, int u, std::size_t x) {
        int day = T - tau + 1;
        return in.costs.a(day) * u +
               in.costs.A(day) * w(static_cast<Eigen::Index>(x)) * (1 - u);
    };
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t ai = 0; ai < G; ++ai) {
            if (cost(1, 0, x) <= in.grid.value(ai))
                at(1, x, ai) = 0.0;
            else if (cost(1, 1, x) <= in.grid.value(ai))
                at(1, x, ai) = 1.0;
        }
    for (int tau = 2; tau <= T; ++tau)
        for (std::size_t x = 0; x < n; ++x) {
            std::vector<std::pair<double, double>> points{{0.0, 0.0}};
            for (std::size_t xs = 0; xs < n; ++xs) {
                double p = in.model.matrix()(static_cast<Eigen::Index>(x),
                                             static_cast<Eigen::Index>(xs));
                if (p == 0.0) continue;
                std::vector<std::pair<double, double>> next;
                next.reserve(points.size() * G);
                for (const auto& [wt, val] : points)
                    for (std::size_t ai = 0; ai < G; ++ai) {
                        double v = at(tau - 1, xs, ai);
                        if (v >= vbar) continue;
                        next.emplace_back(wt + p * in.grid.value(ai), val + p * v);
                    }
                points = std::move(next);
                if (points.empty()) break;
            }
            std::sort(points.begin(), points.end());
            double run = vbar;
            for (auto& pt : points) {
                run = std::min(run, pt.second);
                pt.second = run;
            }
            for (std::size_t ai = 0; ai < G; ++ai) {
                double alpha = in.grid.value(ai);
                double best = vbar;
                for (int u = 0; u < 2; ++u) {
                    double budget = alpha - cost(tau, u, x);
                    auto it = std::upper_bound(
                        points.begin(), points.end(),
                        std::make_pair(budget + 1e-12,
                                       std::numeric_limits<double>::infinity()));
                    if (it == points.begin()) continue;
                    double tail = std::prev(it)->second;
                    if (tail < vbar) best = std::min(best, u + tail);
                }
                if (best < vbar) at(tau, x, ai) = best;
            }
        }
    return V;
}

bool check_grid_enumeration(double* elapsed) {
    auto t0 = clk::now();
    bool ok = true;
    for (std::uint64_t s = 0; s < 8; ++s) {
        int T = 2 + static_cast<int>(s % 3);
        std::size_t n = 2 + s % 2;
        GridInstance in = make_grid_instance(T, n, 44000 + s * 29);
        ValueTensor tensor =
            build_value(T, in.alpha_bar, in.grid, in.costs, in.model, in.risk);
        std::vector<double> ref = brute_grid_value(T, in);
        const std::size_t G = in.grid.size();
        for (int tau = 1; tau <= T; ++tau)
            for (std::size_t x = 0; x < n; ++x)
                for (std::size_t ai = 0; ai < G; ++ai) {
                    double v = tensor.V(tau, x, ai);
                    double r = ref[(static_cast<std::size_t>(tau - 1) * n + x) * G + ai];
                    ok = ok && close(v, r);
                    // nonincreasing in the budget coordinate
                    if (ai > 0) ok = ok && v <= tensor.V(tau, x, ai - 1) + 1e-12;
                }
        for (std::size_t x0 = 0; x0 < n; ++x0) {
            if (!tensor.feasible(x0)) continue;
            RolloutResult roll = rollout_tree(tensor, in.model, x0, in.alpha_bar);
            ok = ok && roll.expected_cost <= in.alpha_bar + in.grid.step + 1e-9;
        }
    }
    *elapsed = seconds_since(t0);
    return ok && *elapsed < 60.0;
}

// ---- criterion 6: pricing-event rule reduces to a mean-demand threshold,
// and capped replays never overspend the event budget

bool check_demand_threshold_identity() {
    bool ok = true;
    std::uint64_t ctr = 0;
    const std::uint64_t seed = 46000;
    int checked = 0;
    for (std::uint64_t s = 0; checked < 10000; ++s) {
        int T = 3 + static_cast<int>(s % 6);
        std::size_t n = 2 + s % 4;
        int M = std::min(T, 1 + static_cast<int>(s % 4));
        TransitionModel model = testsup::random_chain(n, seed + s);
        Eigen::VectorXd q(static_cast<Eigen::Index>(n));
        for (Eigen::Index i = 0; i < q.size(); ++i)
            q(i) = 50.0 + 100.0 * uniform_from(seed, ctr++);
        QuadCost quad = QuadCost::uniform(T, 0.01 + 0.05 * uniform_from(seed, ctr++),
                                          1.0 + 5.0 * uniform_from(seed, ctr++),
                                          10.0 * uniform_from(seed, ctr++));
        CppParams params = CppParams::uniform(T, M, 5.0 + 10.0 * uniform_from(seed, ctr++),
                                              10.0 + 190.0 * uniform_from(seed, ctr++));
        std::vector<double> g(static_cast<std::size_t>(T + 1) *
                              static_cast<std::size_t>(M + 1) * n);
        for (double& v : g) v = 500.0 * uniform_from(seed, ctr++);
        PolicyTableCpp table(T, params, quad, q, model.apply(q), g);
        for (int draw = 0; draw < 100; ++draw, ++checked) {
            int d = 1 + static_cast<int>(uniform_from(seed, ctr++) * T);
            int k = static_cast<int>(uniform_from(seed, ctr++) * (M + 1));
            auto x = static_cast<std::size_t>(uniform_from(seed, ctr++) * double(n));
            d = std::min(d, T);
            k = std::min(k, M);
            x = std::min(x, n - 1);
            if (k == 0) {
                ok = ok && decide_cpp(table, d, k, x) == 0;
                continue;
            }
            int day = T - d + 1;
            double fire = params.a(day) + table.g(d - 1, k - 1, x);
            double keep = table.g(d - 1, k, x);
            for (std::size_t xs = 0; xs < n; ++xs) {
                double p = model.matrix()(static_cast<Eigen::Index>(x),
                                          static_cast<Eigen::Index>(xs));
                double qs = q(static_cast<Eigen::Index>(xs));
                fire += p * power_cost(qs - params.y, quad, day);
                keep += p * power_cost(qs, quad, day);
            }
            if (std::abs(fire - keep) <= 1e-9 * std::max({1.0, fire, keep})) continue;
            ok = ok && decide_cpp(table, d, k, x) == (fire < keep ? 1 : 0);
        }
    }
    // capped replays on the bundled winter fixture stay within the budget
    CppFixture fx = make_cpp_fixture();
    PolicyTableCpp table = build_cpp(fx.horizon, fx.params, fx.quad, fx.demand, fx.space,
                                     fx.model);
    Eigen::VectorXd q = fx.demand.demand_vector(fx.space);
    CppPolicy policy = policy_from_cpp(table);
    for (auto& path : sample_years(fx.model, fx.x0, fx.horizon, 100, 46123)) {
        EpisodeResult ep = run_policy_cpp(path, fx.params, fx.quad, q, fx.model,
                                          fx.params.budget, policy);
        int total = 0;
        for (int u : ep.decisions) total += u;
        ok = ok && total <= fx.params.budget;
    }
    return ok;
}

// ---- criteria 7 and 9: fire-season fixture structure and performance

struct FixtureResults {
    bool structure_ok = false;
    bool perf_ok = false;
};

FixtureResults check_psps_fixture() {
    const std::uint64_t seed = 6;
    FixtureResults out;
    PspsFixture fx = make_psps_fixture();
    Eigen::VectorXd w = wrp_vector(fx.model, fx.risk);

    auto t0 = clk::now();
    PolicyTableS1 s1 = build_s1(122, fx.budget, fx.costs, fx.model, fx.risk);
    double build_elapsed = seconds_since(t0);
    PolicyTableS2 s2 = build_s2(122, fx.costs, fx.model, fx.risk);

    // train the baseline threshold on a disjoint block of seasons
    auto train = sample_years(fx.model, fx.x0, 122, 100, mix_seed(seed, 0x9e3779b9ull));
    std::vector<std::vector<double>> metrics;
    for (auto& path : train) {
        std::vector<double> year;
        for (int t = 1; t <= 122; ++t)
            year.push_back(w(static_cast<Eigen::Index>(path[static_cast<std::size_t>(t)])));
        metrics.push_back(std::move(year));
    }
    double hist_th = historical_threshold(metrics, fx.budget);

    std::vector<PolicySpec> specs{{"p1", policy_from_s1(s1), fx.budget},
                                  {"p2", policy_from_s2(s2), -1},
                                  {"historical", threshold_policy(w, hist_th), -1}};
    auto t1 = clk::now();
    auto sums = monte_carlo(fx.model, fx.risk, fx.costs, fx.x0, 122, 100, seed, specs);
    double mc_elapsed = seconds_since(t1);

    const PolicySummary& p1 = sums[0];
    const PolicySummary& p2 = sums[1];
    const PolicySummary& hist = sums[2];
    out.structure_ok = p1.mean_count >= 9.0 && p1.mean_count <= 10.0 &&
                       p1.std_count < 1.0 &&
                       p2.mean_expected_cost <= p1.mean_expected_cost &&
                       p1.mean_expected_cost < hist.mean_expected_cost;

    struct rusage usage{};
    getrusage(RUSAGE_SELF, &usage);
    double rss_gb = static_cast<double>(usage.ru_maxrss) / (1024.0 * 1024.0);
    out.perf_ok = build_elapsed < 5.0 && mc_elapsed < 5.0 && rss_gb < 1.0;
    std::printf("  [fixture] build %.2fs  monte carlo %.2fs  peak rss %.2f GB\n",
                build_elapsed, mc_elapsed, rss_gb);
    std::printf("  [fixture] p1 count %.3f (%.3f)  cost p2 %.4e <= p1 %.4e < hist %.4e\n",
                p1.mean_count, p1.std_count, p2.mean_expected_cost, p1.mean_expected_cost,
                hist.mean_expected_cost);
    return out;
}

// ---- criterion 8: pricing policy beats the trained baseline against
// hindsight on almost every season

bool check_cpp_fixture() {
    const std::uint64_t seed = 6;
    CppFixture fx = make_cpp_fixture();
    const int T = fx.horizon;
    PolicyTableCpp table = build_cpp(T, fx.params, fx.quad, fx.demand, fx.space, fx.model);
    Eigen::VectorXd q = fx.demand.demand_vector(fx.space);
    const Eigen::VectorXd& mq = table.mean_next_demand();

    auto train = sample_years(fx.model, fx.x0, T, 100, mix_seed(seed, 0x9e3779b9ull));
    std::vector<std::vector<double>> metrics;
    for (auto& path : train) {
        std::vector<double> year;
        for (int t = 1; t <= T; ++t)
            year.push_back(mq(static_cast<Eigen::Index>(path[static_cast<std::size_t>(t)])));
        metrics.push_back(std::move(year));
    }
    double th = historical_threshold(metrics, fx.params.budget);

    std::vector<int> none(static_cast<std::size_t>(T), 0);
    int wins = 0;
    for (auto& path : sample_years(fx.model, fx.x0, T, 100, seed)) {
        double c_none = cpp_path_cost(path, fx.params, fx.quad, q, fx.model, none);
        auto ep_p = run_policy_cpp(path, fx.params, fx.quad, q, fx.model,
                                   fx.params.budget, policy_from_cpp(table));
        auto ep_h = run_policy_cpp(path, fx.params, fx.quad, q, fx.model, -1,
                                   demand_threshold_policy(mq, th));
        double c_p = cpp_path_cost(path, fx.params, fx.quad, q, fx.model, ep_p.decisions);
        double c_h = cpp_path_cost(path, fx.params, fx.quad, q, fx.model, ep_h.decisions);
        std::vector<double> realized;
        for (int t = 1; t <= T; ++t)
            realized.push_back(q(static_cast<Eigen::Index>(path[static_cast<std::size_t>(t + 1)])));
        double c_star =
            cpp_path_cost(path, fx.params, fx.quad, q, fx.model,
                          hindsight_policy(realized, fx.params.budget));
        if (c_none - c_star <= 0.0) continue;  // degenerate season counts as a loss
        if (savings_vs_hindsight(c_none, c_p, c_star) >=
            savings_vs_hindsight(c_none, c_h, c_star))
            ++wins;
    }
    std::printf("  [fixture] pricing policy >= trained baseline on %d/100 seasons\n", wins);
    return wins >= 90;
}

}  // namespace

int main() {
    struct Line {
        int num;
        const char* what;
        bool ok;
    };
    std::vector<Line> lines;

    double t1 = 0.0, t5 = 0.0;
    lines.push_back({1, "budgeted shutoff policy attains the exhaustive optimum",
                     check_budgeted_optimum(&t1)});
    lines.push_back({2, "value recursions decompose into carried cost plus the tables",
                     check_value_decomposition()});
    lines.push_back({3, "event penalty is an exact relaxation of the hard budget",
                     check_penalty_relaxation()});
    lines.push_back({4, "adjusted unbudgeted policy matches the exhaustive argmin",
                     check_adjustment_argmin()});
    lines.push_back({5, "cost-budgeted values match grid-policy enumeration",
                     check_grid_enumeration(&t5)});
    lines.push_back({6, "pricing rule reduces to a mean-demand threshold and keeps the cap",
                     check_demand_threshold_identity()});
    FixtureResults fx = check_psps_fixture();
    lines.push_back({7, "fire-season fixture reproduces the count and cost ordering",
                     fx.structure_ok});
    lines.push_back({8, "pricing fixture beats the trained baseline vs hindsight",
                     check_cpp_fixture()});
    lines.push_back({9, "full-size build, simulation, and memory stay in budget",
                     fx.perf_ok});

    std::sort(lines.begin(), lines.end(),
              [](const Line& a, const Line& b) { return a.num < b.num; });
    int failures = 0;
    for (const Line& l : lines) {
        std::printf("criterion %d: %s - %s\n", l.num, l.ok ? "PASS" : "FAIL", l.what);
        if (!l.ok) ++failures;
    }
    std::printf("timing: criterion 1 %.2fs, criterion 5 %.2fs\n", t1, t5);
    return failures == 0 ? 0 : 1;
}
