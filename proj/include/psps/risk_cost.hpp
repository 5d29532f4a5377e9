#pragma once

#include "psps/markov_model.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace psps {

/// Per-phenomenon part of the binary risk indicator.
enum class RiskDirection { AtLeast, AtMost, PassThrough };

/// Conjunction of per-phenomenon threshold conditions, evaluated on bin
/// representative values. A phenomenon marked PassThrough never blocks.
struct RiskRule {
    struct Term {
        RiskDirection direction = RiskDirection::PassThrough;
        double threshold = 0.0;
    };
    std::vector<Term> terms;  // one per phenomenon, declaration order
};

/// Time-indexed cost parameters shared by every scenario. Arrays carry T+1
/// entries for days 1..T+1; the trailing entry backs the boundary terms of
/// the recursions and defaults to day T's values.
struct CostSchedule {
    int horizon = 0;  // T
    std::string currency = "USD";
    std::vector<double> wildfire;      // A_t, cost of an energized high-risk day
    std::vector<double> revenue_loss;  // a_t, cost of a de-energized day
    std::vector<double> deenergize;    // s1_t
    std::vector<double> reenergize;    // s2_t
    double gamma = 0.0;                // penalty per event past the budget
    double lambda = 0.0;               // linear per-event adjustment
    double initial_investment = 0.0;   // C_I, reported only
    double remaining_budget = 0.0;     // C_I(N) after planning N events, reported only

    /// Constant-in-time schedule; the day T+1 entry repeats day T.
    static CostSchedule uniform(int T, double A, double a, double s1, double s2,
                                double gamma = 0.0, double lambda = 0.0);

    /// Throws unless all cost entries are positive and array sizes match T+1.
    void validate() const;

    // day in 1..T+1
    double A(int day) const { return wildfire.at(static_cast<std::size_t>(day - 1)); }
    double a(int day) const { return revenue_loss.at(static_cast<std::size_t>(day - 1)); }
    double s1(int day) const { return deenergize.at(static_cast<std::size_t>(day - 1)); }
    double s2(int day) const { return reenergize.at(static_cast<std::size_t>(day - 1)); }
};

void to_json(nlohmann::ordered_json& j, const CostSchedule& c);
void from_json(const nlohmann::json& j, CostSchedule& c);

/// Indicator f(x) for one joint state, evaluated on bin representatives.
bool risk_indicator(const StateSpace& space, const RiskRule& rule, std::size_t state);

/// f over the whole state space, as a 0/1 vector.
Eigen::VectorXd risk_vector(const StateSpace& space, const RiskRule& rule);

/// Wildfire risk probability for every state: wrp = P f, i.e. the
/// conditional probability that tomorrow's observations trigger the rule.
Eigen::VectorXd wrp_vector(const TransitionModel& model, const Eigen::VectorXd& risk);

double wrp(const TransitionModel& model, const Eigen::VectorXd& risk, std::size_t x);

/// max{s1 (u_prev - u), s2 (u - u_prev)}: s1 on a 1->0 change, s2 on 0->1,
/// zero when the decision does not change.
double switching_cost(int u_prev, int u, double s1, double s2);

/// Operating cost of day `day` (1..T+1): a u + A f (1-u) + switching.
double stage_cost(const CostSchedule& costs, int day, int u_prev, int u,
                  double realized_risk_next);

}  // namespace psps
