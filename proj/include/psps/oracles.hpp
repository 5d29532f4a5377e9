#pragma once

#include "psps/cpp_sched.hpp"
#include "psps/risk_cost.hpp"

#include <functional>

namespace psps {

/// Brute-force references for the policy tables. Everything here is written
/// forward in calendar time over explicitly enumerated augmented states and
/// shares no code with the table builders. All builders are guarded to desk
/// scale (T <= 12, |X| <= 5).

/// Exact solution of the hard-budget problem on (t, k, u_prev, x).
class BudgetOracle {
  public:
    BudgetOracle(int T, int N, std::size_t n, std::vector<double> J,
                 std::vector<signed char> U, std::vector<double> count);

    int horizon() const { return T_; }
    int budget() const { return N_; }
    std::size_t n_states() const { return n_; }

    /// Expected cost-to-go at decision day t (1..T+1; T+1 is terminal).
    double J(int t, int k, int u_prev, std::size_t x) const { return J_[idx(t, k, u_prev, x)]; }
    /// Optimal decision; ties resolve to 1.
    int decision(int t, int k, int u_prev, std::size_t x) const {
        return U_[idx(t, k, u_prev, x)];
    }
    /// Expected number of events from this state under the optimal policy.
    double count(int t, int k, int u_prev, std::size_t x) const {
        return count_[idx(t, k, u_prev, x)];
    }
    double value(std::size_t x0) const { return J(1, N_, 0, x0); }

  private:
    int T_, N_;
    std::size_t n_;
    std::vector<double> J_;
    std::vector<signed char> U_;
    std::vector<double> count_;

    std::size_t idx(int t, int k, int u, std::size_t x) const;
};

BudgetOracle oracle_budget(int T, int N, const CostSchedule& costs,
                           const TransitionModel& model, const Eigen::VectorXd& risk);

/// Exact solution of the soft-budget problem with the per-extra-event
/// penalty gamma, on (t, events_so_far, u_prev, x).
class PenalizedOracle {
  public:
    PenalizedOracle(int T, int N, double gamma, std::size_t n, std::vector<double> J,
                    std::vector<signed char> U, std::vector<double> count);

    int horizon() const { return T_; }
    int budget() const { return N_; }
    double gamma() const { return gamma_; }
    std::size_t n_states() const { return n_; }

    double J(int t, int events, int u_prev, std::size_t x) const {
        return J_[idx(t, events, u_prev, x)];
    }
    int decision(int t, int events, int u_prev, std::size_t x) const {
        return U_[idx(t, events, u_prev, x)];
    }
    double count(int t, int events, int u_prev, std::size_t x) const {
        return count_[idx(t, events, u_prev, x)];
    }
    double value(std::size_t x0) const { return J(1, 0, 0, x0); }
    double expected_count(std::size_t x0) const { return count(1, 0, 0, x0); }

  private:
    int T_, N_;
    double gamma_;
    std::size_t n_;
    std::vector<double> J_;
    std::vector<signed char> U_;
    std::vector<double> count_;

    std::size_t idx(int t, int events, int u, std::size_t x) const;
};

PenalizedOracle oracle_penalized(int T, int N, double gamma, const CostSchedule& costs,
                                 const TransitionModel& model, const Eigen::VectorXd& risk);

/// Exact solution of the unbudgeted problem with the per-event adjustment
/// lambda (read from the cost schedule), on (t, u_prev, x).
class AdjustOracle {
  public:
    AdjustOracle(int T, std::size_t n, std::vector<double> J, std::vector<signed char> U);

    int horizon() const { return T_; }
    std::size_t n_states() const { return n_; }
    double J(int t, int u_prev, std::size_t x) const { return J_[idx(t, u_prev, x)]; }
    int decision(int t, int u_prev, std::size_t x) const { return U_[idx(t, u_prev, x)]; }
    double value(std::size_t x0) const { return J(1, 0, x0); }

  private:
    int T_;
    std::size_t n_;
    std::vector<double> J_;
    std::vector<signed char> U_;

    std::size_t idx(int t, int u, std::size_t x) const;
};

AdjustOracle oracle_adjustment(int T, const CostSchedule& costs, const TransitionModel& model,
                               const Eigen::VectorXd& risk);

/// Exact solution of the event-budgeted supply-cost problem on (t, k, x);
/// ties resolve to 0 like decide_cpp's strict inequality.
class CppOracle {
  public:
    CppOracle(int T, int M, std::size_t n, std::vector<double> J, std::vector<signed char> U);

    int horizon() const { return T_; }
    int budget() const { return M_; }
    std::size_t n_states() const { return n_; }
    double J(int t, int k, std::size_t x) const { return J_[idx(t, k, x)]; }
    int decision(int t, int k, std::size_t x) const { return U_[idx(t, k, x)]; }
    double value(std::size_t x0) const { return J(1, M_, x0); }

  private:
    int T_, M_;
    std::size_t n_;
    std::vector<double> J_;
    std::vector<signed char> U_;

    std::size_t idx(int t, int k, std::size_t x) const;
};

CppOracle oracle_cpp(int T, const CppParams& params, const QuadCost& quad,
                     const Eigen::VectorXd& demand, const TransitionModel& model);

/// Expected cost and event count of an arbitrary budget-aware policy,
/// evaluated exactly over the oracle's augmented state space.
struct PolicyEval {
    Eigen::VectorXd value;  // per start state
    Eigen::VectorXd count;
};

PolicyEval eval_policy_budget(int T, int N, const CostSchedule& costs,
                              const TransitionModel& model, const Eigen::VectorXd& risk,
                              const std::function<int(int t, int k, int u_prev, std::size_t x)>& policy);

PolicyEval eval_policy_adjust(int T, const CostSchedule& costs, const TransitionModel& model,
                              const Eigen::VectorXd& risk,
                              const std::function<int(int t, int u_prev, std::size_t x)>& policy);

PolicyEval eval_policy_cpp(int T, const CppParams& params, const QuadCost& quad,
                           const Eigen::VectorXd& demand, const TransitionModel& model,
                           const std::function<int(int t, int k, std::size_t x)>& policy);

/// Expected total cost of a fixed decision sequence u[0..T-1] from x0,
/// including the day-(T+1) boundary terms.
double open_loop_cost(int T, const CostSchedule& costs, const TransitionModel& model,
                      const Eigen::VectorXd& risk, std::size_t x0, const std::vector<int>& u);

/// Gap between the best open-loop sequence with at most N events and the
/// unconstrained best, by full 2^T enumeration.
double lemma1_alpha(int T, int N, const CostSchedule& costs, const TransitionModel& model,
                    const Eigen::VectorXd& risk, std::size_t x0);

/// Literal value recursions carrying the accumulated cost w, used to check
/// the decomposition identities v = w + g and z = w + h. Exponential in d.
double v_literal(int T, int N, const CostSchedule& costs, const TransitionModel& model,
                 const Eigen::VectorXd& wrp, int d, double w, int k, int u, std::size_t x);

double z_literal(int T, const CostSchedule& costs, const TransitionModel& model,
                 const Eigen::VectorXd& wrp, int d, double w, int u, std::size_t x);

}  // namespace psps
