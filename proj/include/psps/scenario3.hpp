#pragma once

#include "psps/risk_cost.hpp"

namespace psps {

/// Uniform discretization of the cost-budget coordinate alpha.
struct AlphaGrid {
    double lo = 0.0;
    double hi = 0.0;
    double step = 0.0;

    void validate() const;
    std::size_t size() const;
    double value(std::size_t i) const { return lo + static_cast<double>(i) * step; }
    /// Largest grid index whose value is <= alpha; alpha below lo maps to 0.
    std::size_t floor_index(double alpha) const;
};

/// Expected-event-count value function V_tau(x, alpha) on the alpha grid,
/// with the per-state feasibility bounds b_tau(x). Cells carry the sentinel
/// vbar = T + 1 where no policy meets the budget. Stage tau is the decision
/// at calendar day t = T - tau + 1 and prices that day's cost entries;
/// switching costs are not modeled here.
class ValueTensor {
  public:
    ValueTensor(int T, double alpha_bar, AlphaGrid grid, CostSchedule costs,
                Eigen::VectorXd wrp, std::vector<double> values, std::vector<double> bounds);

    int horizon() const { return T_; }
    double alpha_bar() const { return alpha_bar_; }
    const AlphaGrid& grid() const { return grid_; }
    double vbar() const { return static_cast<double>(T_) + 1.0; }
    std::size_t n_states() const { return n_; }
    const CostSchedule& costs() const { return costs_; }
    const Eigen::VectorXd& wrp() const { return wrp_; }

    /// tau in 1..T, alpha by grid index.
    double V(int tau, std::size_t x, std::size_t alpha_idx) const {
        return V_[(static_cast<std::size_t>(tau - 1) * n_ + x) * grid_.size() + alpha_idx];
    }
    /// V at the floor grid point of a real alpha (conservative for
    /// off-grid budgets since V is nonincreasing in alpha).
    double value_at(int tau, std::size_t x, double alpha) const {
        return V(tau, x, grid_.floor_index(alpha));
    }
    /// tau in 0..T; b_0 = 0.
    double b(int tau, std::size_t x) const {
        return b_[static_cast<std::size_t>(tau) * n_ + x];
    }
    /// Expected operating cost of stage tau's day given state x and decision
    /// u: a u + A wrp(x) (1 - u).
    double expected_stage_cost(int tau, int u, std::size_t x) const;

    bool feasible(std::size_t x) const { return value_at(T_, x, alpha_bar_) < vbar(); }

  private:
    int T_;
    double alpha_bar_;
    AlphaGrid grid_;
    std::size_t n_;
    CostSchedule costs_;
    Eigen::VectorXd wrp_;
    std::vector<double> V_;  // [tau-1][x][alpha]
    std::vector<double> b_;  // [tau][x]
};

/// Cheapest achievable expected cost over the last tau days when the event
/// count is ignored; the stages decouple, so this is exact and every cell
/// with a budget below it is infeasible.
double compute_b(int tau, std::size_t x, const CostSchedule& costs,
                 const TransitionModel& model, const Eigen::VectorXd& risk);

/// Value iteration over tau = 1..T. The inner choice of one budget value per
/// successor state is solved exactly by merging per-successor (budget, value)
/// breakpoints into a Pareto frontier; cells below b_tau(x) or without any
/// feasible allocation get the sentinel.
ValueTensor build_value(int T, double alpha_bar, const AlphaGrid& grid,
                        const CostSchedule& costs, const TransitionModel& model,
                        const Eigen::VectorXd& risk);

/// One decision of the extracted policy: u for today and the budget handed
/// to each possible successor state.
struct PolicyStepS3 {
    int u = 0;
    std::vector<double> next_alpha;  // empty at t = T
};

/// Decision at calendar day t (1..T) in state x with remaining budget alpha.
/// u = 1 only when staying energized cannot meet the budget and shutting off
/// can; the successor budgets minimize the expected future event count among
/// grid allocations that keep the budget satisfied. Throws when neither
/// decision is feasible.
PolicyStepS3 extract_policy(const ValueTensor& tensor, const TransitionModel& model,
                            int t, std::size_t x, double alpha);

struct RolloutResult {
    double expected_count = 0.0;
    double expected_cost = 0.0;
};

/// Exact expectation of the extracted policy over the full probability tree.
/// Guarded to small instances (|X|^T state paths).
RolloutResult rollout_tree(const ValueTensor& tensor, const TransitionModel& model,
                           std::size_t x0, double alpha_bar);

}  // namespace psps
