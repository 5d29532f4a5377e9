#pragma once

#include "psps/risk_cost.hpp"

namespace psps {

/// Backward-induction table h_d(u, x) for the unbudgeted cost-adjustment
/// problem. Same day indexing as PolicyTableS1; the per-event adjustment
/// lambda is read from the cost schedule.
class PolicyTableS2 {
  public:
    PolicyTableS2(int T, CostSchedule costs, Eigen::VectorXd wrp,
                  std::vector<double> values);

    int horizon() const { return T_; }
    std::size_t n_states() const { return n_; }
    const CostSchedule& costs() const { return costs_; }
    double lambda() const { return costs_.lambda; }
    const Eigen::VectorXd& wrp() const { return wrp_; }
    const std::vector<double>& values() const { return h_; }

    double h(int d, int u, std::size_t x) const {
        return h_[(static_cast<std::size_t>(d) * 2 + static_cast<std::size_t>(u)) * n_ + x];
    }

  private:
    int T_;
    std::size_t n_;
    CostSchedule costs_;
    Eigen::VectorXd wrp_;
    std::vector<double> h_;  // [d][u][x]
};

PolicyTableS2 build_s2(int T, const CostSchedule& costs, const TransitionModel& model,
                       const Eigen::VectorXd& risk);

double threshold_s2(const PolicyTableS2& table, int d, int u_prev, std::size_t x);

/// 1 iff wrp(x) >= threshold_s2; no budget argument, the scenario is
/// unbudgeted and may fire more or fewer than N times.
int decide_s2(const PolicyTableS2& table, int d, int u_prev, std::size_t x);

}  // namespace psps
