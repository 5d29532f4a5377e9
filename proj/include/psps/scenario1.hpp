#pragma once

#include "psps/risk_cost.hpp"

namespace psps {

/// Backward-induction table g_d(k | u, x) for the budgeted shutoff problem.
///
/// d = 0..T counts the days remaining, k = 0..N the remaining event budget,
/// u the previous day's decision. Layer d of the recursion prices the day
/// with cost-schedule index T - d + 1; the d = 0 boundary uses day T + 1.
/// Immutable once built; safe for concurrent reads.
class PolicyTableS1 {
  public:
    PolicyTableS1(int T, int N, CostSchedule costs, Eigen::VectorXd wrp,
                  std::vector<double> values);

    int horizon() const { return T_; }
    int budget() const { return N_; }
    std::size_t n_states() const { return n_; }
    const CostSchedule& costs() const { return costs_; }
    const Eigen::VectorXd& wrp() const { return wrp_; }
    const std::vector<double>& values() const { return g_; }

    double g(int d, int k, int u, std::size_t x) const {
        return g_[idx(d, k, u, x)];
    }

  private:
    int T_, N_;
    std::size_t n_;
    CostSchedule costs_;
    Eigen::VectorXd wrp_;
    std::vector<double> g_;  // [d][k][u][x] row-major

    std::size_t idx(int d, int k, int u, std::size_t x) const;
};

/// Fills the boundaries g_0(k|u,x) and g_d(0|u,x) and then the
/// min-of-two-branches recursion for d >= 1, k >= 1. O(T N |X|^2).
PolicyTableS1 build_s1(int T, int N, const CostSchedule& costs,
                       const TransitionModel& model, const Eigen::VectorXd& risk);

/// Decision threshold against which wrp(x) is compared at (d, k). k = 0
/// returns +infinity: a depleted budget never allows a shutoff.
double threshold_s1(const PolicyTableS1& table, int d, int k, int u_prev, std::size_t x);

/// 1 iff k >= 1 and wrp(x) >= threshold_s1 (ties shut off).
int decide_s1(const PolicyTableS1& table, int d, int k, int u_prev, std::size_t x);

}  // namespace psps
