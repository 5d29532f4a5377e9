#include "psps/oracles.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace psps {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void desk_guard(int T, std::size_t n) {
    if (T > 12 || n > 5)
        throw std::invalid_argument("oracle: instance too large (desk scale is T <= 12, |X| <= 5)");
}

// terminal value at the day-(T+1) state: the residual expected wildfire
// exposure; the forced switch back to u=0 is added per u_prev at the caller
Eigen::VectorXd terminal_exposure(const CostSchedule& costs, const Eigen::VectorXd& w) {
    return costs.A(costs.horizon + 1) * w;
}

}  // namespace

// ---------------------------------------------------------------- budget

std::size_t BudgetOracle::idx(int t, int k, int u, std::size_t x) const {
    return ((static_cast<std::size_t>(t - 1) * static_cast<std::size_t>(N_ + 1) +
             static_cast<std::size_t>(k)) *
                2 +
            static_cast<std::size_t>(u)) *
               n_ +
           x;
}

BudgetOracle::BudgetOracle(int T, int N, std::size_t n, std::vector<double> J,
                           std::vector<signed char> U, std::vector<double> count)
    : T_(T), N_(N), n_(n), J_(std::move(J)), U_(std::move(U)), count_(std::move(count)) {}

BudgetOracle oracle_budget(int T, int N, const CostSchedule& costs,
                           const TransitionModel& model, const Eigen::VectorXd& risk) {
    desk_guard(T, model.size());
    if (N < 0 || N > T) throw std::invalid_argument("oracle_budget: need 0 <= N <= T");
    const std::size_t n = model.size();
    const Eigen::VectorXd w = model.apply(risk);
    const Eigen::VectorXd term = terminal_exposure(costs, w);

    std::size_t states = static_cast<std::size_t>(T + 1) * static_cast<std::size_t>(N + 1) * 2 * n;
    std::vector<double> J(states, 0.0);
    std::vector<signed char> U(states, -1);
    std::vector<double> C(states, 0.0);
    auto at = [&](int t, int k, int u, std::size_t x) -> std::size_t {
        return ((static_cast<std::size_t>(t - 1) * static_cast<std::size_t>(N + 1) +
                 static_cast<std::size_t>(k)) *
                    2 +
                static_cast<std::size_t>(u)) *
                   n +
               x;
    };

    for (int k = 0; k <= N; ++k)
        for (int u = 0; u < 2; ++u)
            for (std::size_t x = 0; x < n; ++x)
                J[at(T + 1, k, u, x)] =
                    u * costs.s1(T + 1) + term(static_cast<Eigen::Index>(x));

    for (int t = T; t >= 1; --t)
        for (int k = 0; k <= N; ++k)
            for (int u = 0; u < 2; ++u)
                for (std::size_t x = 0; x < n; ++x) {
                    double best = kInf, best_count = 0.0;
                    int best_u = 0;
                    for (int up = 0; up < 2; ++up) {
                        if (up == 1 && k == 0) continue;
                        double stage =
                            costs.a(t) * up +
                            costs.A(t) * w(static_cast<Eigen::Index>(x)) * (1 - up) +
                            switching_cost(u, up, costs.s1(t), costs.s2(t));
                        double cont = 0.0, cnt = 0.0;
                        for (std::size_t xs = 0; xs < n; ++xs) {
                            double p = model.matrix()(static_cast<Eigen::Index>(x),
                                                      static_cast<Eigen::Index>(xs));
                            if (p == 0.0) continue;
                            cont += p * J[at(t + 1, k - up, up, xs)];
                            cnt += p * C[at(t + 1, k - up, up, xs)];
                        }
                        double total = stage + cont;
                        if (total < best - 1e-15 ||
                            (std::abs(total - best) <= 1e-15 && up == 1)) {
                            best = std::min(best, total);
                            best_u = up;
                            best_count = up + cnt;
                        }
                    }
                    J[at(t, k, u, x)] = best;
                    U[at(t, k, u, x)] = static_cast<signed char>(best_u);
                    C[at(t, k, u, x)] = best_count;
                }
    return BudgetOracle(T, N, n, std::move(J), std::move(U), std::move(C));
}

// ------------------------------------------------------------- penalized

std::size_t PenalizedOracle::idx(int t, int events, int u, std::size_t x) const {
    return ((static_cast<std::size_t>(t - 1) * static_cast<std::size_t>(T_ + 1) +
             static_cast<std::size_t>(events)) *
                2 +
            static_cast<std::size_t>(u)) *
               n_ +
           x;
}

PenalizedOracle::PenalizedOracle(int T, int N, double gamma, std::size_t n,
                                 std::vector<double> J, std::vector<signed char> U,
                                 std::vector<double> count)
    : T_(T), N_(N), gamma_(gamma), n_(n), J_(std::move(J)), U_(std::move(U)),
      count_(std::move(count)) {}

PenalizedOracle oracle_penalized(int T, int N, double gamma, const CostSchedule& costs,
                                 const TransitionModel& model, const Eigen::VectorXd& risk) {
    desk_guard(T, model.size());
    if (N < 0) throw std::invalid_argument("oracle_penalized: need N >= 0");
    const std::size_t n = model.size();
    const Eigen::VectorXd w = model.apply(risk);
    const Eigen::VectorXd term = terminal_exposure(costs, w);

    std::size_t states = static_cast<std::size_t>(T + 1) * static_cast<std::size_t>(T + 1) * 2 * n;
    std::vector<double> J(states, 0.0);
    std::vector<signed char> U(states, -1);
    std::vector<double> C(states, 0.0);
    auto at = [&](int t, int e, int u, std::size_t x) -> std::size_t {
        return ((static_cast<std::size_t>(t - 1) * static_cast<std::size_t>(T + 1) +
                 static_cast<std::size_t>(e)) *
                    2 +
                static_cast<std::size_t>(u)) *
                   n +
               x;
    };

    for (int e = 0; e <= T; ++e)
        for (int u = 0; u < 2; ++u)
            for (std::size_t x = 0; x < n; ++x)
                J[at(T + 1, e, u, x)] = u * costs.s1(T + 1) +
                                        term(static_cast<Eigen::Index>(x)) +
                                        gamma * std::max(0, e - N);

    for (int t = T; t >= 1; --t)
        for (int e = 0; e <= t - 1; ++e)
            for (int u = 0; u < 2; ++u)
                for (std::size_t x = 0; x < n; ++x) {
                    double best = kInf, best_count = 0.0;
                    int best_u = 0;
                    for (int up = 0; up < 2; ++up) {
                        double stage =
                            costs.a(t) * up +
                            costs.A(t) * w(static_cast<Eigen::Index>(x)) * (1 - up) +
                            switching_cost(u, up, costs.s1(t), costs.s2(t));
                        double cont = 0.0, cnt = 0.0;
                        for (std::size_t xs = 0; xs < n; ++xs) {
                            double p = model.matrix()(static_cast<Eigen::Index>(x),
                                                      static_cast<Eigen::Index>(xs));
                            if (p == 0.0) continue;
                            cont += p * J[at(t + 1, e + up, up, xs)];
                            cnt += p * C[at(t + 1, e + up, up, xs)];
                        }
                        double total = stage + cont;
                        if (total < best - 1e-15 ||
                            (std::abs(total - best) <= 1e-15 && up == 1)) {
                            best = std::min(best, total);
                            best_u = up;
                            best_count = up + cnt;
                        }
                    }
                    J[at(t, e, u, x)] = best;
                    U[at(t, e, u, x)] = static_cast<signed char>(best_u);
                    C[at(t, e, u, x)] = best_count;
                }
    return PenalizedOracle(T, N, gamma, n, std::move(J), std::move(U), std::move(C));
}

// ------------------------------------------------------------ adjustment

std::size_t AdjustOracle::idx(int t, int u, std::size_t x) const {
    return (static_cast<std::size_t>(t - 1) * 2 + static_cast<std::size_t>(u)) * n_ + x;
}

AdjustOracle::AdjustOracle(int T, std::size_t n, std::vector<double> J,
                           std::vector<signed char> U)
    : T_(T), n_(n), J_(std::move(J)), U_(std::move(U)) {}

AdjustOracle oracle_adjustment(int T, const CostSchedule& costs, const TransitionModel& model,
                               const Eigen::VectorXd& risk) {
    desk_guard(T, model.size());
    const std::size_t n = model.size();
    const Eigen::VectorXd w = model.apply(risk);
    const Eigen::VectorXd term = terminal_exposure(costs, w);

    std::size_t states = static_cast<std::size_t>(T + 1) * 2 * n;
    std::vector<double> J(states, 0.0);
    std::vector<signed char> U(states, -1);
    auto at = [&](int t, int u, std::size_t x) -> std::size_t {
        return (static_cast<std::size_t>(t - 1) * 2 + static_cast<std::size_t>(u)) * n + x;
    };

    for (int u = 0; u < 2; ++u)
        for (std::size_t x = 0; x < n; ++x)
            J[at(T + 1, u, x)] = u * costs.s1(T + 1) + term(static_cast<Eigen::Index>(x));

    for (int t = T; t >= 1; --t)
        for (int u = 0; u < 2; ++u)
            for (std::size_t x = 0; x < n; ++x) {
                double best = kInf;
                int best_u = 0;
                for (int up = 0; up < 2; ++up) {
                    double stage = (costs.a(t) + costs.lambda) * up +
                                   costs.A(t) * w(static_cast<Eigen::Index>(x)) * (1 - up) +
                                   switching_cost(u, up, costs.s1(t), costs.s2(t));
                    double cont = 0.0;
                    for (std::size_t xs = 0; xs < n; ++xs) {
                        double p = model.matrix()(static_cast<Eigen::Index>(x),
                                                  static_cast<Eigen::Index>(xs));
                        if (p > 0.0) cont += p * J[at(t + 1, up, xs)];
                    }
                    double total = stage + cont;
                    if (total < best - 1e-15 || (std::abs(total - best) <= 1e-15 && up == 1)) {
                        best = std::min(best, total);
                        best_u = up;
                    }
                }
                J[at(t, u, x)] = best;
                U[at(t, u, x)] = static_cast<signed char>(best_u);
            }
    return AdjustOracle(T, n, std::move(J), std::move(U));
}

// ------------------------------------------------------------------- cpp

std::size_t CppOracle::idx(int t, int k, std::size_t x) const {
    return (static_cast<std::size_t>(t - 1) * static_cast<std::size_t>(M_ + 1) +
            static_cast<std::size_t>(k)) *
               n_ +
           x;
}

CppOracle::CppOracle(int T, int M, std::size_t n, std::vector<double> J,
                     std::vector<signed char> U)
    : T_(T), M_(M), n_(n), J_(std::move(J)), U_(std::move(U)) {}

CppOracle oracle_cpp(int T, const CppParams& params, const QuadCost& quad,
                     const Eigen::VectorXd& demand, const TransitionModel& model) {
    desk_guard(T, model.size());
    params.validate(T);
    quad.validate(T);
    const int M = params.budget;
    if (M > T) throw std::invalid_argument("oracle_cpp: need M <= T");
    const std::size_t n = model.size();

    // expected next-day supply cost per state, with and without curtailment
    auto cost_vec = [&](int day, double shift) {
        Eigen::ArrayXd z = demand.array() - shift;
        Eigen::VectorXd c =
            (quad.B(day) * z.square() + quad.C(day) * z + quad.D(day)).matrix();
        return model.apply(c);
    };

    std::size_t states = static_cast<std::size_t>(T + 1) * static_cast<std::size_t>(M + 1) * n;
    std::vector<double> J(states, 0.0);
    std::vector<signed char> U(states, -1);
    auto at = [&](int t, int k, std::size_t x) -> std::size_t {
        return (static_cast<std::size_t>(t - 1) * static_cast<std::size_t>(M + 1) +
                static_cast<std::size_t>(k)) *
                   n +
               x;
    };

    Eigen::VectorXd term = cost_vec(T + 1, 0.0);
    for (int k = 0; k <= M; ++k)
        for (std::size_t x = 0; x < n; ++x)
            J[at(T + 1, k, x)] = term(static_cast<Eigen::Index>(x));

    for (int t = T; t >= 1; --t) {
        Eigen::VectorXd cq = cost_vec(t, 0.0);
        Eigen::VectorXd cqy = cost_vec(t, params.y);
        for (int k = 0; k <= M; ++k)
            for (std::size_t x = 0; x < n; ++x) {
                double best = kInf;
                int best_u = 0;
                for (int up = 0; up < 2; ++up) {
                    if (up == 1 && k == 0) continue;
                    double stage = up == 0 ? cq(static_cast<Eigen::Index>(x))
                                           : cqy(static_cast<Eigen::Index>(x)) + params.a(t);
                    double cont = 0.0;
                    for (std::size_t xs = 0; xs < n; ++xs) {
                        double p = model.matrix()(static_cast<Eigen::Index>(x),
                                                  static_cast<Eigen::Index>(xs));
                        if (p > 0.0) cont += p * J[at(t + 1, k - up, xs)];
                    }
                    double total = stage + cont;
                    if (total < best - 1e-15) {  // ties stay at 0
                        best = total;
                        best_u = up;
                    }
                }
                J[at(t, k, x)] = best;
                U[at(t, k, x)] = static_cast<signed char>(best_u);
            }
    }
    return CppOracle(T, M, n, std::move(J), std::move(U));
}

// ----------------------------------------------------- policy evaluators

PolicyEval eval_policy_budget(
    int T, int N, const CostSchedule& costs, const TransitionModel& model,
    const Eigen::VectorXd& risk,
    const std::function<int(int t, int k, int u_prev, std::size_t x)>& policy) {
    desk_guard(T, model.size());
    const std::size_t n = model.size();
    const Eigen::VectorXd w = model.apply(risk);
    const Eigen::VectorXd term = terminal_exposure(costs, w);

    std::size_t states = static_cast<std::size_t>(T + 1) * static_cast<std::size_t>(N + 1) * 2 * n;
    std::vector<double> J(states, 0.0), C(states, 0.0);
    auto at = [&](int t, int k, int u, std::size_t x) -> std::size_t {
        return ((static_cast<std::size_t>(t - 1) * static_cast<std::size_t>(N + 1) +
                 static_cast<std::size_t>(k)) *
                    2 +
                static_cast<std::size_t>(u)) *
                   n +
               x;
    };
    for (int k = 0; k <= N; ++k)
        for (int u = 0; u < 2; ++u)
            for (std::size_t x = 0; x < n; ++x)
                J[at(T + 1, k, u, x)] = u * costs.s1(T + 1) + term(static_cast<Eigen::Index>(x));

    for (int t = T; t >= 1; --t)
        for (int k = 0; k <= N; ++k)
            for (int u = 0; u < 2; ++u)
                for (std::size_t x = 0; x < n; ++x) {
                    int up = policy(t, k, u, x);
                    if (up == 1 && k == 0)
                        throw std::logic_error("eval_policy_budget: policy exceeded the budget");
                    double stage = costs.a(t) * up +
                                   costs.A(t) * w(static_cast<Eigen::Index>(x)) * (1 - up) +
                                   switching_cost(u, up, costs.s1(t), costs.s2(t));
                    double cont = 0.0, cnt = 0.0;
                    for (std::size_t xs = 0; xs < n; ++xs) {
                        double p = model.matrix()(static_cast<Eigen::Index>(x),
                                                  static_cast<Eigen::Index>(xs));
                        if (p == 0.0) continue;
                        cont += p * J[at(t + 1, k - up, up, xs)];
                        cnt += p * C[at(t + 1, k - up, up, xs)];
                    }
                    J[at(t, k, u, x)] = stage + cont;
                    C[at(t, k, u, x)] = up + cnt;
                }

    PolicyEval out;
    out.value.resize(static_cast<Eigen::Index>(n));
    out.count.resize(static_cast<Eigen::Index>(n));
    for (std::size_t x = 0; x < n; ++x) {
        out.value(static_cast<Eigen::Index>(x)) = J[at(1, N, 0, x)];
        out.count(static_cast<Eigen::Index>(x)) = C[at(1, N, 0, x)];
    }
    return out;
}

PolicyEval eval_policy_adjust(int T, const CostSchedule& costs, const TransitionModel& model,
                              const Eigen::VectorXd& risk,
                              const std::function<int(int t, int u_prev, std::size_t x)>& policy) {
    desk_guard(T, model.size());
    const std::size_t n = model.size();
    const Eigen::VectorXd w = model.apply(risk);
    const Eigen::VectorXd term = terminal_exposure(costs, w);

    std::size_t states = static_cast<std::size_t>(T + 1) * 2 * n;
    std::vector<double> J(states, 0.0), C(states, 0.0);
    auto at = [&](int t, int u, std::size_t x) -> std::size_t {
        return (static_cast<std::size_t>(t - 1) * 2 + static_cast<std::size_t>(u)) * n + x;
    };
    for (int u = 0; u < 2; ++u)
        for (std::size_t x = 0; x < n; ++x)
            J[at(T + 1, u, x)] = u * costs.s1(T + 1) + term(static_cast<Eigen::Index>(x));

    for (int t = T; t >= 1; --t)
        for (int u = 0; u < 2; ++u)
            for (std::size_t x = 0; x < n; ++x) {
                int up = policy(t, u, x);
                double stage = (costs.a(t) + costs.lambda) * up +
                               costs.A(t) * w(static_cast<Eigen::Index>(x)) * (1 - up) +
                               switching_cost(u, up, costs.s1(t), costs.s2(t));
                double cont = 0.0, cnt = 0.0;
                for (std::size_t xs = 0; xs < n; ++xs) {
                    double p = model.matrix()(static_cast<Eigen::Index>(x),
                                              static_cast<Eigen::Index>(xs));
                    if (p == 0.0) continue;
                    cont += p * J[at(t + 1, up, xs)];
                    cnt += p * C[at(t + 1, up, xs)];
                }
                J[at(t, u, x)] = stage + cont;
                C[at(t, u, x)] = up + cnt;
            }

    PolicyEval out;
    out.value.resize(static_cast<Eigen::Index>(n));
    out.count.resize(static_cast<Eigen::Index>(n));
    for (std::size_t x = 0; x < n; ++x) {
        out.value(static_cast<Eigen::Index>(x)) = J[at(1, 0, x)];
        out.count(static_cast<Eigen::Index>(x)) = C[at(1, 0, x)];
    }
    return out;
}

PolicyEval eval_policy_cpp(int T, const CppParams& params, const QuadCost& quad,
                           const Eigen::VectorXd& demand, const TransitionModel& model,
                           const std::function<int(int t, int k, std::size_t x)>& policy) {
    desk_guard(T, model.size());
    const int M = params.budget;
    const std::size_t n = model.size();
    auto cost_vec = [&](int day, double shift) {
        Eigen::ArrayXd z = demand.array() - shift;
        Eigen::VectorXd c =
            (quad.B(day) * z.square() + quad.C(day) * z + quad.D(day)).matrix();
        return model.apply(c);
    };

    std::size_t states = static_cast<std::size_t>(T + 1) * static_cast<std::size_t>(M + 1) * n;
    std::vector<double> J(states, 0.0), C(states, 0.0);
    auto at = [&](int t, int k, std::size_t x) -> std::size_t {
        return (static_cast<std::size_t>(t - 1) * static_cast<std::size_t>(M + 1) +
                static_cast<std::size_t>(k)) *
                   n +
               x;
    };
    Eigen::VectorXd term = cost_vec(T + 1, 0.0);
    for (int k = 0; k <= M; ++k)
        for (std::size_t x = 0; x < n; ++x) J[at(T + 1, k, x)] = term(static_cast<Eigen::Index>(x));

    for (int t = T; t >= 1; --t) {
        Eigen::VectorXd cq = cost_vec(t, 0.0);
        Eigen::VectorXd cqy = cost_vec(t, params.y);
        for (int k = 0; k <= M; ++k)
            for (std::size_t x = 0; x < n; ++x) {
                int up = policy(t, k, x);
                if (up == 1 && k == 0)
                    throw std::logic_error("eval_policy_cpp: policy exceeded the budget");
                double stage = up == 0 ? cq(static_cast<Eigen::Index>(x))
                                       : cqy(static_cast<Eigen::Index>(x)) + params.a(t);
                double cont = 0.0, cnt = 0.0;
                for (std::size_t xs = 0; xs < n; ++xs) {
                    double p = model.matrix()(static_cast<Eigen::Index>(x),
                                              static_cast<Eigen::Index>(xs));
                    if (p == 0.0) continue;
                    cont += p * J[at(t + 1, k - up, xs)];
                    cnt += p * C[at(t + 1, k - up, xs)];
                }
                J[at(t, k, x)] = stage + cont;
                C[at(t, k, x)] = up + cnt;
            }
    }

    PolicyEval out;
    out.value.resize(static_cast<Eigen::Index>(n));
    out.count.resize(static_cast<Eigen::Index>(n));
    for (std::size_t x = 0; x < n; ++x) {
        out.value(static_cast<Eigen::Index>(x)) = J[at(1, M, x)];
        out.count(static_cast<Eigen::Index>(x)) = C[at(1, M, x)];
    }
    return out;
}

// ------------------------------------------------------------- open loop

double open_loop_cost(int T, const CostSchedule& costs, const TransitionModel& model,
                      const Eigen::VectorXd& risk, std::size_t x0, const std::vector<int>& u) {
    if (u.size() != static_cast<std::size_t>(T))
        throw std::invalid_argument("open_loop_cost: need one decision per day");
    if (x0 >= model.size()) throw std::out_of_range("open_loop_cost: state out of range");
    const std::size_t n = model.size();
    const Eigen::VectorXd w = model.apply(risk);

    Eigen::RowVectorXd mu = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(n));
    mu(static_cast<Eigen::Index>(x0)) = 1.0;
    double total = 0.0;
    int prev = 0;
    for (int t = 1; t <= T; ++t) {
        int ut = u[static_cast<std::size_t>(t - 1)];
        double expected_wrp = mu.dot(w);
        total += costs.a(t) * ut + costs.A(t) * expected_wrp * (1 - ut) +
                 switching_cost(prev, ut, costs.s1(t), costs.s2(t));
        mu = mu * model.matrix();
        prev = ut;
    }
    total += prev * costs.s1(T + 1) + costs.A(T + 1) * mu.dot(w);
    return total;
}

double lemma1_alpha(int T, int N, const CostSchedule& costs, const TransitionModel& model,
                    const Eigen::VectorXd& risk, std::size_t x0) {
    desk_guard(T, model.size());
    if (N < 0 || N >= T) throw std::invalid_argument("lemma1_alpha: need 0 <= N < T");
    double best_capped = kInf, best_free = kInf;
    std::vector<int> u(static_cast<std::size_t>(T));
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << T); ++mask) {
        int count = 0;
        for (int t = 0; t < T; ++t) {
            u[static_cast<std::size_t>(t)] = static_cast<int>((mask >> t) & 1u);
            count += u[static_cast<std::size_t>(t)];
        }
        double cost = open_loop_cost(T, costs, model, risk, x0, u);
        best_free = std::min(best_free, cost);
        if (count <= N) best_capped = std::min(best_capped, cost);
    }
    return best_capped - best_free;
}

// --------------------------------------------------- literal recursions

double v_literal(int T, int N, const CostSchedule& costs, const TransitionModel& model,
                 const Eigen::VectorXd& wrp, int d, double w, int k, int u, std::size_t x) {
    if (d > 8) throw std::invalid_argument("v_literal: recursion depth capped at 8");
    int day = T - d + 1;
    if (d == 0)
        return w + u * costs.s1(day) +
               costs.A(day) * model.apply(wrp)(static_cast<Eigen::Index>(x));
    const std::size_t n = model.size();
    double total = 0.0;
    for (std::size_t xs = 0; xs < n; ++xs) {
        double p = model.matrix()(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(xs));
        if (p == 0.0) continue;
        double stay = v_literal(T, N, costs, model, wrp, d - 1,
                                w + costs.A(day) * wrp(static_cast<Eigen::Index>(xs)) +
                                    u * costs.s1(day),
                                k, 0, xs);
        double branch = stay;
        if (k >= 1) {
            double shut = v_literal(T, N, costs, model, wrp, d - 1,
                                    w + costs.a(day) + (1 - u) * costs.s2(day), k - 1, 1, xs);
            branch = std::min(stay, shut);
        }
        total += p * branch;
    }
    return total;
}

double z_literal(int T, const CostSchedule& costs, const TransitionModel& model,
                 const Eigen::VectorXd& wrp, int d, double w, int u, std::size_t x) {
    if (d > 8) throw std::invalid_argument("z_literal: recursion depth capped at 8");
    int day = T - d + 1;
    if (d == 0)
        return w + u * costs.s1(day) +
               costs.A(day) * model.apply(wrp)(static_cast<Eigen::Index>(x));
    const std::size_t n = model.size();
    double total = 0.0;
    for (std::size_t xs = 0; xs < n; ++xs) {
        double p = model.matrix()(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(xs));
        if (p == 0.0) continue;
        double stay = z_literal(T, costs, model, wrp, d - 1,
                                w + costs.A(day) * wrp(static_cast<Eigen::Index>(xs)) +
                                    u * costs.s1(day),
                                0, xs);
        double shut = z_literal(T, costs, model, wrp, d - 1,
                                w + costs.a(day) + costs.lambda + (1 - u) * costs.s2(day), 1,
                                xs);
        total += p * std::min(stay, shut);
    }
    return total;
}

}  // namespace psps
