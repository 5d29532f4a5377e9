#include "psps/scenario3.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace psps {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// stage tau is the decision at calendar day t = T - tau + 1 and prices that
// day's cost entries, matching the shutoff tables
int stage_day(int T, int tau) { return T - tau + 1; }

double stage_cost_of(const CostSchedule& costs, int T, int tau, int u, double wrp_x) {
    int day = stage_day(T, tau);
    return costs.a(day) * u + costs.A(day) * wrp_x * (1 - u);
}

// b_tau for every state: b[tau][x], tau = 0..T
std::vector<double> bounds_table(int T, const CostSchedule& costs,
                                 const TransitionModel& model, const Eigen::VectorXd& w) {
    const Eigen::Index n = w.size();
    std::vector<double> b(static_cast<std::size_t>(T + 1) * static_cast<std::size_t>(n), 0.0);
    // Without the event count the stages decouple, so the cheapest expected
    // cost satisfies the exact recursion b_tau = min_u c_day(u, .) + P b_{tau-1}.
    Eigen::VectorXd prev = Eigen::VectorXd::Zero(n);
    for (int tau = 1; tau <= T; ++tau) {
        int day = stage_day(T, tau);
        Eigen::VectorXd cur =
            (costs.A(day) * w).cwiseMin(costs.a(day)) + model.apply(prev);
        Eigen::Map<Eigen::VectorXd>(
            b.data() + static_cast<std::size_t>(tau) * static_cast<std::size_t>(n), n) = cur;
        prev = std::move(cur);
    }
    return b;
}

// grid points where V(tau, x', .) steps down to a new finite level
struct Breakpoint {
    std::size_t alpha_idx;
    double weight;  // p * alpha value
    double value;   // p * V
};

struct FrontierPoint {
    double weight;
    double value;
    std::vector<std::size_t> choice;  // per-successor alpha_idx, merge order
};

// Pareto merge of one breakpoint list per successor. `track_choice` keeps
// the per-successor selection for policy extraction.
std::vector<FrontierPoint> merge_frontier(const std::vector<std::vector<Breakpoint>>& lists,
                                          bool track_choice) {
    std::vector<FrontierPoint> frontier{{0.0, 0.0, {}}};
    for (const auto& list : lists) {
        std::vector<FrontierPoint> next;
        next.reserve(frontier.size() * list.size());
        for (const auto& fp : frontier)
            for (const auto& bp : list) {
                FrontierPoint np;
                np.weight = fp.weight + bp.weight;
                np.value = fp.value + bp.value;
                if (track_choice) {
                    np.choice = fp.choice;
                    np.choice.push_back(bp.alpha_idx);
                }
                next.push_back(std::move(np));
            }
        std::sort(next.begin(), next.end(), [](const FrontierPoint& a, const FrontierPoint& b) {
            if (a.weight != b.weight) return a.weight < b.weight;
            return a.value < b.value;
        });
        frontier.clear();
        double best = kInf;
        for (auto& np : next)
            if (np.value < best - 1e-15) {
                best = np.value;
                frontier.push_back(std::move(np));
            }
    }
    return frontier;
}

// least frontier value whose weight fits the budget; +inf when none does
double query_frontier(const std::vector<FrontierPoint>& frontier, double budget) {
    double best = kInf;
    for (const auto& fp : frontier) {
        if (fp.weight > budget + 1e-12) break;
        best = fp.value;  // values decrease along the frontier
    }
    return best;
}

std::vector<std::vector<Breakpoint>> successor_breakpoints(
    const ValueTensor* tensor, const std::vector<double>& V_prev, const AlphaGrid& grid,
    double vbar, const std::vector<std::pair<std::size_t, double>>& succ, int tau_prev) {
    std::vector<std::vector<Breakpoint>> lists;
    lists.reserve(succ.size());
    for (auto [xs, p] : succ) {
        std::vector<Breakpoint> list;
        double last = kInf;
        for (std::size_t ai = 0; ai < grid.size(); ++ai) {
            double v = tensor ? tensor->V(tau_prev, xs, ai)
                              : V_prev[xs * grid.size() + ai];
            if (v >= vbar) continue;
            if (v < last - 1e-12) {
                last = v;
                list.push_back({ai, p * grid.value(ai), p * v});
            }
        }
        lists.push_back(std::move(list));
    }
    return lists;
}

}  // namespace

void AlphaGrid::validate() const {
    if (!(step > 0.0)) throw std::invalid_argument("AlphaGrid: step must be > 0");
    if (!(lo < hi)) throw std::invalid_argument("AlphaGrid: need lo < hi");
    double count = (hi - lo) / step;
    if (std::abs(count - std::round(count)) > 1e-6)
        throw std::invalid_argument("AlphaGrid: (hi - lo) must be a multiple of step");
}

std::size_t AlphaGrid::size() const {
    return static_cast<std::size_t>(std::llround((hi - lo) / step)) + 1;
}

std::size_t AlphaGrid::floor_index(double alpha) const {
    if (alpha <= lo) return 0;
    double idx = std::floor((alpha - lo) / step + 1e-9);
    return std::min(static_cast<std::size_t>(idx), size() - 1);
}

ValueTensor::ValueTensor(int T, double alpha_bar, AlphaGrid grid, CostSchedule costs,
                         Eigen::VectorXd wrp, std::vector<double> values,
                         std::vector<double> bounds)
    : T_(T), alpha_bar_(alpha_bar), grid_(grid), n_(static_cast<std::size_t>(wrp.size())),
      costs_(std::move(costs)), wrp_(std::move(wrp)), V_(std::move(values)),
      b_(std::move(bounds)) {
    if (T_ < 1) throw std::invalid_argument("ValueTensor: need T >= 1");
    grid_.validate();
    if (V_.size() != static_cast<std::size_t>(T_) * n_ * grid_.size())
        throw std::invalid_argument("ValueTensor: value tensor has wrong size");
    if (b_.size() != static_cast<std::size_t>(T_ + 1) * n_)
        throw std::invalid_argument("ValueTensor: bound tensor has wrong size");
}

double ValueTensor::expected_stage_cost(int tau, int u, std::size_t x) const {
    return stage_cost_of(costs_, T_, tau, u, wrp_(static_cast<Eigen::Index>(x)));
}

double compute_b(int tau, std::size_t x, const CostSchedule& costs,
                 const TransitionModel& model, const Eigen::VectorXd& risk) {
    if (tau < 1) throw std::invalid_argument("compute_b: tau must be >= 1");
    if (tau > costs.horizon) throw std::invalid_argument("compute_b: tau exceeds the horizon");
    if (x >= model.size()) throw std::out_of_range("compute_b: state out of range");
    Eigen::VectorXd w = model.apply(risk);
    auto b = bounds_table(costs.horizon, costs, model, w);
    return b[static_cast<std::size_t>(tau) * model.size() + x];
}

ValueTensor build_value(int T, double alpha_bar, const AlphaGrid& grid,
                        const CostSchedule& costs, const TransitionModel& model,
                        const Eigen::VectorXd& risk) {
    if (T < 1) throw std::invalid_argument("build_value: T must be >= 1");
    if (costs.horizon != T)
        throw std::invalid_argument("build_value: cost schedule horizon mismatch");
    costs.validate();
    grid.validate();
    if (alpha_bar < grid.lo || alpha_bar > grid.hi)
        throw std::invalid_argument("build_value: alpha_bar outside the grid");
    const Eigen::Index n = static_cast<Eigen::Index>(model.size());
    if (risk.size() != n) throw std::invalid_argument("build_value: risk vector size mismatch");

    const Eigen::VectorXd w = model.apply(risk);
    const double vbar = static_cast<double>(T) + 1.0;
    const std::size_t G = grid.size();
    std::vector<double> b = bounds_table(T, costs, model, w);
    std::vector<double> V(static_cast<std::size_t>(T) * static_cast<std::size_t>(n) * G, vbar);
    auto cell = [&](int tau, std::size_t x, std::size_t ai) -> double& {
        return V[(static_cast<std::size_t>(tau - 1) * static_cast<std::size_t>(n) + x) * G + ai];
    };

    for (Eigen::Index x = 0; x < n; ++x) {
        double c0 = stage_cost_of(costs, T, 1, 0, w(x));
        double c1 = stage_cost_of(costs, T, 1, 1, w(x));
        for (std::size_t ai = 0; ai < G; ++ai) {
            double alpha = grid.value(ai);
            if (c0 <= alpha)
                cell(1, static_cast<std::size_t>(x), ai) = 0.0;
            else if (c1 <= alpha)
                cell(1, static_cast<std::size_t>(x), ai) = 1.0;
        }
    }

    for (int tau = 2; tau <= T; ++tau) {
        std::vector<double> prev(V.begin() + static_cast<std::ptrdiff_t>(
                                                 static_cast<std::size_t>(tau - 2) *
                                                 static_cast<std::size_t>(n) * G),
                                 V.begin() + static_cast<std::ptrdiff_t>(
                                                 static_cast<std::size_t>(tau - 1) *
                                                 static_cast<std::size_t>(n) * G));
        for (Eigen::Index x = 0; x < n; ++x) {
            std::vector<std::pair<std::size_t, double>> succ;
            for (Eigen::Index xs = 0; xs < n; ++xs) {
                double p = model.matrix()(x, xs);
                if (p > 0.0) succ.push_back({static_cast<std::size_t>(xs), p});
            }
            auto lists = successor_breakpoints(nullptr, prev, grid, vbar, succ, tau - 1);
            bool dead = false;
            for (const auto& list : lists)
                if (list.empty()) dead = true;
            std::vector<FrontierPoint> frontier;
            if (!dead) frontier = merge_frontier(lists, false);
            double bx = b[static_cast<std::size_t>(tau) * static_cast<std::size_t>(n) +
                          static_cast<std::size_t>(x)];
            double c0 = stage_cost_of(costs, T, tau, 0, w(x));
            double c1 = stage_cost_of(costs, T, tau, 1, w(x));
            for (std::size_t ai = 0; ai < G; ++ai) {
                double alpha = grid.value(ai);
                if (alpha < bx - 1e-12 || dead) continue;
                double best = std::min(query_frontier(frontier, alpha - c0),
                                       1.0 + query_frontier(frontier, alpha - c1));
                if (best < vbar) cell(tau, static_cast<std::size_t>(x), ai) = best;
            }
        }
    }
    return ValueTensor(T, alpha_bar, grid, costs, w, std::move(V), std::move(b));
}

PolicyStepS3 extract_policy(const ValueTensor& tensor, const TransitionModel& model,
                            int t, std::size_t x, double alpha) {
    const int T = tensor.horizon();
    if (t < 1 || t > T) throw std::out_of_range("extract_policy: t must be in 1..T");
    if (x >= tensor.n_states()) throw std::out_of_range("extract_policy: state out of range");
    const int tau = T - t + 1;
    const std::size_t n = tensor.n_states();
    double c0 = tensor.expected_stage_cost(tau, 0, x);
    double c1 = tensor.expected_stage_cost(tau, 1, x);

    if (tau == 1) {
        PolicyStepS3 step;
        if (c0 <= alpha)
            step.u = 0;
        else if (c1 <= alpha)
            step.u = 1;
        else
            throw std::runtime_error("extract_policy: no feasible decision at the last day");
        return step;
    }

    // feasibility screen with the stagewise bound of the successors
    double pb = 0.0;
    for (std::size_t xs = 0; xs < n; ++xs)
        pb += model.matrix()(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(xs)) *
              tensor.b(tau - 1, xs);
    int u = (c0 + pb > alpha && c1 + pb <= alpha) ? 1 : 0;

    std::vector<std::pair<std::size_t, double>> succ;
    for (std::size_t xs = 0; xs < n; ++xs) {
        double p = model.matrix()(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(xs));
        if (p > 0.0) succ.push_back({xs, p});
    }
    auto lists =
        successor_breakpoints(&tensor, {}, tensor.grid(), tensor.vbar(), succ, tau - 1);
    for (const auto& list : lists)
        if (list.empty()) throw std::runtime_error("extract_policy: successor has no feasible budget");
    auto frontier = merge_frontier(lists, true);

    double budget = alpha - (u == 0 ? c0 : c1);
    const FrontierPoint* pick = nullptr;
    for (const auto& fp : frontier) {
        if (fp.weight > budget + 1e-12) break;
        pick = &fp;
    }
    if (pick == nullptr) {
        // the screened decision cannot fund the successors; fall back to the
        // other branch before declaring infeasibility
        u = 1 - u;
        budget = alpha - (u == 0 ? c0 : c1);
        for (const auto& fp : frontier) {
            if (fp.weight > budget + 1e-12) break;
            pick = &fp;
        }
        if (pick == nullptr)
            throw std::runtime_error("extract_policy: budget infeasible at this state");
    }

    PolicyStepS3 step;
    step.u = u;
    step.next_alpha.assign(n, 0.0);
    // zero-probability successors are never visited; hand them the smallest
    // grid budget at or above their bound
    const AlphaGrid& grid = tensor.grid();
    for (std::size_t xs = 0; xs < n; ++xs) {
        std::size_t ai = grid.floor_index(std::max(tensor.b(tau - 1, xs), grid.lo));
        if (grid.value(ai) < tensor.b(tau - 1, xs) - 1e-12 && ai + 1 < grid.size()) ++ai;
        step.next_alpha[xs] = grid.value(ai);
    }
    for (std::size_t i = 0; i < succ.size(); ++i)
        step.next_alpha[succ[i].first] = grid.value(pick->choice[i]);
    return step;
}

namespace {

void rollout_rec(const ValueTensor& tensor, const TransitionModel& model, int t,
                 std::size_t x, double alpha, double prob, RolloutResult& acc) {
    const int T = tensor.horizon();
    PolicyStepS3 step = extract_policy(tensor, model, t, x, alpha);
    int tau = T - t + 1;
    acc.expected_count += prob * step.u;
    acc.expected_cost += prob * tensor.expected_stage_cost(tau, step.u, x);
    if (t == T) return;
    for (std::size_t xs = 0; xs < tensor.n_states(); ++xs) {
        double p = model.matrix()(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(xs));
        if (p > 0.0)
            rollout_rec(tensor, model, t + 1, xs, step.next_alpha[xs], prob * p, acc);
    }
}

}  // namespace

RolloutResult rollout_tree(const ValueTensor& tensor, const TransitionModel& model,
                           std::size_t x0, double alpha_bar) {
    double paths = std::pow(static_cast<double>(model.size()), tensor.horizon());
    if (paths > 2e6)
        throw std::invalid_argument("rollout_tree: instance too large for exact enumeration");
    if (!tensor.feasible(x0))
        throw std::runtime_error("rollout_tree: infeasible start state");
    RolloutResult acc;
    rollout_rec(tensor, model, 1, x0, alpha_bar, 1.0, acc);
    return acc;
}

}  // namespace psps
