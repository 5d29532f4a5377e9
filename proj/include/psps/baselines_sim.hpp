#pragma once

#include "psps/cpp_sched.hpp"
#include "psps/scenario1.hpp"
#include "psps/scenario2.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>

namespace psps {

/// One day's output of a shutoff policy: the decision and the threshold the
/// day's metric was compared against (+inf for hard-capped days).
struct PolicyDecision {
    int decision = 0;
    double threshold = 0.0;
};

/// Callable policy over the augmented episode state. k is the remaining
/// budget, or -1 when the scenario is unbudgeted.
using Policy = std::function<PolicyDecision(int t, int k, int u_prev, std::size_t x)>;

/// Replay of one season. Realized costs price the actually sampled next-day
/// risk; expected costs price the conditional risk given the current state.
/// Both accumulators include the day-(T+1) boundary terms (expected form).
struct EpisodeResult {
    std::vector<int> decisions;
    std::vector<double> realized_cost;
    std::vector<double> expected_cost;
    std::vector<double> metric;     // wrp (or expected next-day demand)
    std::vector<double> threshold;
    std::vector<int> budget_left;   // after the day's decision; -1 if uncapped
    int count = 0;
    double total_realized = 0.0;
    double total_expected = 0.0;
};

/// path must hold T+2 states: a lead-in state, the T decision-day states
/// path[1..T], and the day-(T+1) state. budget < 0 disables the cap; a
/// policy event at budget 0 under a capped run is a contract violation.
EpisodeResult run_policy(const std::vector<std::size_t>& path, const CostSchedule& costs,
                         const TransitionModel& model, const Eigen::VectorXd& risk,
                         int budget, const Policy& policy);

/// Adapters from the table policies to episode policies (t -> d = T - t + 1).
Policy policy_from_s1(const PolicyTableS1& table);
Policy policy_from_s2(const PolicyTableS2& table);
/// Constant-threshold policy on the wrp metric, no budget cap, ties fire.
Policy threshold_policy(const Eigen::VectorXd& wrp, double threshold);

/// Mean over training years of each year's N-th largest daily metric.
double historical_threshold(const std::vector<std::vector<double>>& yearly_metrics, int N);

/// u = 1 exactly on the M days with the largest realized values, ties going
/// to the earlier day.
std::vector<int> hindsight_policy(const std::vector<double>& realized, int M);

/// Deterministic per-year paths: year y uses seed mix_seed(seed, y).
std::vector<std::vector<std::size_t>> sample_years(const TransitionModel& model,
                                                   std::size_t x0, int T, int n_years,
                                                   std::uint64_t seed);

struct PolicySpec {
    std::string name;
    Policy policy;
    int budget = -1;  // -1: uncapped
};

struct PolicySummary {
    std::string name;
    double mean_count = 0.0;
    double std_count = 0.0;
    double mean_expected_cost = 0.0;
    double std_expected_cost = 0.0;
};

/// Seeded Monte-Carlo evaluation of several policies on the same simulated
/// years; reduction is in year order so results do not depend on scheduling.
std::vector<PolicySummary> monte_carlo(const TransitionModel& model,
                                       const Eigen::VectorXd& risk, const CostSchedule& costs,
                                       std::size_t x0, int T, int n_years, std::uint64_t seed,
                                       const std::vector<PolicySpec>& policies);

/// Per-day CSV trace (day, metric, threshold, decision, budget_left).
void write_trace(std::ostream& out, const EpisodeResult& episode);

// ---- critical-peak-pricing episodes ----

using CppPolicy = std::function<PolicyDecision(int t, int k, std::size_t x)>;

CppPolicy policy_from_cpp(const PolicyTableCpp& table);
/// Constant-threshold policy on expected next-day demand, no cap, strict >.
CppPolicy demand_threshold_policy(const Eigen::VectorXd& mean_next_demand, double threshold);

/// Realized supply cost of a fixed decision vector on one path, including
/// the expected day-(T+1) term.
double cpp_path_cost(const std::vector<std::size_t>& path, const CppParams& params,
                     const QuadCost& quad, const Eigen::VectorXd& demand,
                     const TransitionModel& model, const std::vector<int>& u);

/// Replay a causal CPP policy on one path; returns the decision vector.
EpisodeResult run_policy_cpp(const std::vector<std::size_t>& path, const CppParams& params,
                             const QuadCost& quad, const Eigen::VectorXd& demand,
                             const TransitionModel& model, int budget, const CppPolicy& policy);

/// (cost(no events) - cost(policy)) / (cost(no events) - cost(hindsight)).
double savings_vs_hindsight(double cost_none, double cost_policy, double cost_hindsight);

}  // namespace psps
