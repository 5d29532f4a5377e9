#pragma once

#include "psps/risk_cost.hpp"

namespace psps {

/// Quadratic supply-cost coefficients, T+1 entries for days 1..T+1.
struct QuadCost {
    std::vector<double> b2;  // currency / MW^2
    std::vector<double> c1;  // currency / MW
    std::vector<double> d0;  // currency

    static QuadCost uniform(int T, double B, double C, double D);
    void validate(int T) const;

    double B(int day) const { return b2.at(static_cast<std::size_t>(day - 1)); }
    double C(int day) const { return c1.at(static_cast<std::size_t>(day - 1)); }
    double D(int day) const { return d0.at(static_cast<std::size_t>(day - 1)); }
};

/// Event budget, curtailment depth, and per-day revenue loss of a called
/// event. abar carries T+1 entries like every other day-indexed series.
struct CppParams {
    int budget = 0;   // M
    double y = 0.0;   // MW shed per event
    std::vector<double> abar;

    static CppParams uniform(int T, int M, double y, double abar_value);
    void validate(int T) const;

    double a(int day) const { return abar.at(static_cast<std::size_t>(day - 1)); }
};

/// Linear peak-demand predictor over state features: intercept, one slope
/// per phenomenon bin representative, and day-type dummies (first day type
/// is the reference level). Output in MW, deterministic per state.
struct DemandModel {
    Eigen::VectorXd coef;

    double predict(const StateSpace& space, std::size_t state) const;
    Eigen::VectorXd demand_vector(const StateSpace& space) const;
};

/// Feature vector [1, rep_0, ..., rep_{p-1}, 1{day_type=1}, ...] for one state.
Eigen::VectorXd demand_features(const StateSpace& space, std::size_t state);

double power_cost(double z, const QuadCost& quad, int day);

/// Backward-induction table g_d(k | x) for critical-peak-pricing event
/// scheduling. Same layer-to-day mapping as the shutoff tables; no previous
/// decision index because the model carries no switching costs.
class PolicyTableCpp {
  public:
    PolicyTableCpp(int T, CppParams params, QuadCost quad, Eigen::VectorXd demand,
                   Eigen::VectorXd mean_next_demand, std::vector<double> values);

    int horizon() const { return T_; }
    int budget() const { return params_.budget; }
    std::size_t n_states() const { return n_; }
    const CppParams& params() const { return params_; }
    const QuadCost& quad() const { return quad_; }
    const Eigen::VectorXd& demand() const { return demand_; }
    /// E[q(X_next) | X = x], the left side of the event test.
    const Eigen::VectorXd& mean_next_demand() const { return mq_; }
    const std::vector<double>& values() const { return g_; }

    double g(int d, int k, std::size_t x) const {
        return g_[(static_cast<std::size_t>(d) * static_cast<std::size_t>(params_.budget + 1) +
                   static_cast<std::size_t>(k)) *
                      n_ +
                  x];
    }

  private:
    int T_;
    std::size_t n_;
    CppParams params_;
    QuadCost quad_;
    Eigen::VectorXd demand_;
    Eigen::VectorXd mq_;
    std::vector<double> g_;  // [d][k][x]
};

PolicyTableCpp build_cpp(int T, const CppParams& params, const QuadCost& quad,
                         const Eigen::VectorXd& demand, const TransitionModel& model);

PolicyTableCpp build_cpp(int T, const CppParams& params, const QuadCost& quad,
                         const DemandModel& demand, const StateSpace& space,
                         const TransitionModel& model);

/// Demand level above which an event is called at (d, k); requires B > 0
/// and y > 0 on the priced day.
double threshold_cpp(const PolicyTableCpp& table, int d, int k, std::size_t x);

/// 1 iff k >= 1 and E[q | x] is strictly above threshold_cpp (ties do not
/// fire, unlike the shutoff policies).
int decide_cpp(const PolicyTableCpp& table, int d, int k, std::size_t x);

}  // namespace psps
