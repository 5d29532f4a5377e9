#include "psps/baselines_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace psps {

EpisodeResult run_policy(const std::vector<std::size_t>& path, const CostSchedule& costs,
                         const TransitionModel& model, const Eigen::VectorXd& risk,
                         int budget, const Policy& policy) {
    const int T = costs.horizon;
    if (path.size() != static_cast<std::size_t>(T) + 2)
        throw std::invalid_argument("run_policy: path must hold T+2 states");
    const Eigen::VectorXd w = model.apply(risk);

    EpisodeResult ep;
    ep.decisions.reserve(static_cast<std::size_t>(T));
    int k = budget;
    int u_prev = 0;
    for (int t = 1; t <= T; ++t) {
        std::size_t x = path[static_cast<std::size_t>(t)];
        if (x >= model.size()) throw std::out_of_range("run_policy: state out of range");
        PolicyDecision pd = policy(t, k, u_prev, x);
        if (pd.decision == 1 && budget >= 0 && k == 0)
            throw std::logic_error("run_policy: policy fired with an exhausted budget");
        double f_next = risk(static_cast<Eigen::Index>(path[static_cast<std::size_t>(t + 1)]));
        double sw = switching_cost(u_prev, pd.decision, costs.s1(t), costs.s2(t));
        double realized = costs.a(t) * pd.decision + costs.A(t) * f_next * (1 - pd.decision) + sw;
        double expected = costs.a(t) * pd.decision +
                          costs.A(t) * w(static_cast<Eigen::Index>(x)) * (1 - pd.decision) + sw;
        if (pd.decision == 1 && budget >= 0) --k;
        ep.decisions.push_back(pd.decision);
        ep.realized_cost.push_back(realized);
        ep.expected_cost.push_back(expected);
        ep.metric.push_back(w(static_cast<Eigen::Index>(x)));
        ep.threshold.push_back(pd.threshold);
        ep.budget_left.push_back(budget >= 0 ? k : -1);
        ep.count += pd.decision;
        ep.total_realized += realized;
        ep.total_expected += expected;
        u_prev = pd.decision;
    }
    std::size_t x_end = path[static_cast<std::size_t>(T + 1)];
    double boundary = u_prev * costs.s1(T + 1) +
                      costs.A(T + 1) * w(static_cast<Eigen::Index>(x_end));
    ep.total_realized += boundary;
    ep.total_expected += boundary;
    return ep;
}

Policy policy_from_s1(const PolicyTableS1& table) {
    return [&table](int t, int k, int u_prev, std::size_t x) {
        int d = table.horizon() - t + 1;
        PolicyDecision pd;
        pd.threshold = threshold_s1(table, d, k, u_prev, x);
        pd.decision = decide_s1(table, d, k, u_prev, x);
        return pd;
    };
}

Policy policy_from_s2(const PolicyTableS2& table) {
    return [&table](int t, int /*k*/, int u_prev, std::size_t x) {
        int d = table.horizon() - t + 1;
        PolicyDecision pd;
        pd.threshold = threshold_s2(table, d, u_prev, x);
        pd.decision = decide_s2(table, d, u_prev, x);
        return pd;
    };
}

Policy threshold_policy(const Eigen::VectorXd& wrp, double threshold) {
    return [&wrp, threshold](int /*t*/, int /*k*/, int /*u_prev*/, std::size_t x) {
        PolicyDecision pd;
        pd.threshold = threshold;
        pd.decision = wrp(static_cast<Eigen::Index>(x)) >= threshold ? 1 : 0;
        return pd;
    };
}

double historical_threshold(const std::vector<std::vector<double>>& yearly_metrics, int N) {
    if (yearly_metrics.empty())
        throw std::invalid_argument("historical_threshold: need at least one training year");
    if (N < 1) throw std::invalid_argument("historical_threshold: need N >= 1");
    double sum = 0.0;
    for (const auto& year : yearly_metrics) {
        if (year.size() < static_cast<std::size_t>(N))
            throw std::invalid_argument("historical_threshold: year shorter than N days");
        std::vector<double> sorted = year;
        std::nth_element(sorted.begin(), sorted.begin() + (N - 1), sorted.end(),
                         std::greater<double>());
        sum += sorted[static_cast<std::size_t>(N - 1)];
    }
    return sum / static_cast<double>(yearly_metrics.size());
}

std::vector<int> hindsight_policy(const std::vector<double>& realized, int M) {
    const std::size_t T = realized.size();
    if (M < 0 || static_cast<std::size_t>(M) > T)
        throw std::invalid_argument("hindsight_policy: need 0 <= M <= T");
    std::vector<std::size_t> order(T);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return realized[a] > realized[b];
    });
    std::vector<int> u(T, 0);
    for (int i = 0; i < M; ++i) u[order[static_cast<std::size_t>(i)]] = 1;
    return u;
}

std::vector<std::vector<std::size_t>> sample_years(const TransitionModel& model,
                                                   std::size_t x0, int T, int n_years,
                                                   std::uint64_t seed) {
    std::vector<std::vector<std::size_t>> years;
    years.reserve(static_cast<std::size_t>(n_years));
    for (int y = 0; y < n_years; ++y)
        years.push_back(sample_path(model, x0, static_cast<std::size_t>(T) + 1,
                                    mix_seed(seed, static_cast<std::uint64_t>(y))));
    return years;
}

namespace {

std::pair<double, double> mean_std(const std::vector<double>& v) {
    double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    if (v.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

}  // namespace

std::vector<PolicySummary> monte_carlo(const TransitionModel& model,
                                       const Eigen::VectorXd& risk, const CostSchedule& costs,
                                       std::size_t x0, int T, int n_years, std::uint64_t seed,
                                       const std::vector<PolicySpec>& policies) {
    if (n_years < 1) throw std::invalid_argument("monte_carlo: need n_years >= 1");
    if (T != costs.horizon) throw std::invalid_argument("monte_carlo: horizon mismatch");
    auto years = sample_years(model, x0, T, n_years, seed);
    std::vector<PolicySummary> out;
    out.reserve(policies.size());
    for (const auto& spec : policies) {
        std::vector<double> counts, values;
        counts.reserve(years.size());
        values.reserve(years.size());
        for (const auto& path : years) {
            EpisodeResult ep = run_policy(path, costs, model, risk, spec.budget, spec.policy);
            counts.push_back(static_cast<double>(ep.count));
            values.push_back(ep.total_expected);
        }
        PolicySummary s;
        s.name = spec.name;
        std::tie(s.mean_count, s.std_count) = mean_std(counts);
        std::tie(s.mean_expected_cost, s.std_expected_cost) = mean_std(values);
        out.push_back(std::move(s));
    }
    return out;
}

void write_trace(std::ostream& out, const EpisodeResult& episode) {
    out << "day,metric,threshold,decision,budget_left\n";
    for (std::size_t i = 0; i < episode.decisions.size(); ++i)
        out << (i + 1) << ',' << episode.metric[i] << ',' << episode.threshold[i] << ','
            << episode.decisions[i] << ',' << episode.budget_left[i] << '\n';
}

CppPolicy policy_from_cpp(const PolicyTableCpp& table) {
    return [&table](int t, int k, std::size_t x) {
        int d = table.horizon() - t + 1;
        PolicyDecision pd;
        pd.threshold = threshold_cpp(table, d, k, x);
        pd.decision = decide_cpp(table, d, k, x);
        return pd;
    };
}

CppPolicy demand_threshold_policy(const Eigen::VectorXd& mean_next_demand, double threshold) {
    return [&mean_next_demand, threshold](int /*t*/, int /*k*/, std::size_t x) {
        PolicyDecision pd;
        pd.threshold = threshold;
        pd.decision = mean_next_demand(static_cast<Eigen::Index>(x)) > threshold ? 1 : 0;
        return pd;
    };
}

double cpp_path_cost(const std::vector<std::size_t>& path, const CppParams& params,
                     const QuadCost& quad, const Eigen::VectorXd& demand,
                     const TransitionModel& model, const std::vector<int>& u) {
    const std::size_t T = u.size();
    if (path.size() != T + 2) throw std::invalid_argument("cpp_path_cost: path must hold T+2 states");
    double total = 0.0;
    for (std::size_t t = 1; t <= T; ++t) {
        int ut = u[t - 1];
        double q = demand(static_cast<Eigen::Index>(path[t + 1]));
        double z = q - params.y * ut;
        total += power_cost(z, quad, static_cast<int>(t)) + params.a(static_cast<int>(t)) * ut;
    }
    // expected day-(T+1) supply cost at the terminal state
    Eigen::ArrayXd zq = demand.array();
    Eigen::VectorXd cvec = (quad.B(static_cast<int>(T) + 1) * zq.square() +
                            quad.C(static_cast<int>(T) + 1) * zq + quad.D(static_cast<int>(T) + 1))
                               .matrix();
    total += model.apply(cvec)(static_cast<Eigen::Index>(path[T + 1]));
    return total;
}

EpisodeResult run_policy_cpp(const std::vector<std::size_t>& path, const CppParams& params,
                             const QuadCost& quad, const Eigen::VectorXd& demand,
                             const TransitionModel& model, int budget, const CppPolicy& policy) {
    const int T = static_cast<int>(path.size()) - 2;
    if (T < 1) throw std::invalid_argument("run_policy_cpp: path too short");
    const Eigen::VectorXd mq = model.apply(demand);

    EpisodeResult ep;
    int k = budget;
    std::vector<int> u;
    for (int t = 1; t <= T; ++t) {
        std::size_t x = path[static_cast<std::size_t>(t)];
        PolicyDecision pd = policy(t, k, x);
        if (pd.decision == 1 && budget >= 0 && k == 0)
            throw std::logic_error("run_policy_cpp: policy fired with an exhausted budget");
        if (pd.decision == 1 && budget >= 0) --k;
        ep.decisions.push_back(pd.decision);
        ep.metric.push_back(mq(static_cast<Eigen::Index>(x)));
        ep.threshold.push_back(pd.threshold);
        ep.budget_left.push_back(budget >= 0 ? k : -1);
        ep.count += pd.decision;
        u.push_back(pd.decision);
    }
    ep.total_realized = cpp_path_cost(path, params, quad, demand, model, u);
    ep.total_expected = ep.total_realized;
    return ep;
}

double savings_vs_hindsight(double cost_none, double cost_policy, double cost_hindsight) {
    double denom = cost_none - cost_hindsight;
    if (denom <= 0.0)
        throw std::invalid_argument("savings_vs_hindsight: hindsight does not improve on no events");
    return (cost_none - cost_policy) / denom;
}

}  // namespace psps
