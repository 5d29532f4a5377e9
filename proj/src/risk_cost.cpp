#include "psps/risk_cost.hpp"

#include <stdexcept>

namespace psps {

CostSchedule CostSchedule::uniform(int T, double A, double a, double s1, double s2,
                                   double gamma, double lambda) {
    CostSchedule c;
    c.horizon = T;
    std::size_t n = static_cast<std::size_t>(T) + 1;
    c.wildfire.assign(n, A);
    c.revenue_loss.assign(n, a);
    c.deenergize.assign(n, s1);
    c.reenergize.assign(n, s2);
    c.gamma = gamma;
    c.lambda = lambda;
    c.validate();
    return c;
}

void CostSchedule::validate() const {
    if (horizon < 1) throw std::invalid_argument("CostSchedule: horizon must be >= 1");
    std::size_t n = static_cast<std::size_t>(horizon) + 1;
    auto check = [&](const std::vector<double>& v, const char* name) {
        if (v.size() != n)
            throw std::invalid_argument(std::string("CostSchedule: ") + name +
                                        " must have T+1 entries");
        for (double x : v)
            if (!(x > 0.0))
                throw std::invalid_argument(std::string("CostSchedule: ") + name +
                                            " entries must be positive");
    };
    check(wildfire, "wildfire");
    check(revenue_loss, "revenue_loss");
    check(deenergize, "deenergize");
    check(reenergize, "reenergize");
    if (gamma < 0.0 || lambda < 0.0)
        throw std::invalid_argument("CostSchedule: gamma and lambda must be >= 0");
}

namespace {

// scalar entries in the JSON broadcast to all T+1 days
std::vector<double> read_series(const nlohmann::json& j, const char* key, int T) {
    const auto& v = j.at(key);
    std::size_t n = static_cast<std::size_t>(T) + 1;
    if (v.is_number()) return std::vector<double>(n, v.get<double>());
    auto out = v.get<std::vector<double>>();
    if (out.size() == static_cast<std::size_t>(T)) out.push_back(out.back());
    return out;
}

}  // namespace

void to_json(nlohmann::ordered_json& j, const CostSchedule& c) {
    j = nlohmann::ordered_json{{"format_version", 1},
                               {"horizon", c.horizon},
                               {"currency", c.currency},
                               {"wildfire", c.wildfire},
                               {"revenue_loss", c.revenue_loss},
                               {"deenergize", c.deenergize},
                               {"reenergize", c.reenergize},
                               {"gamma", c.gamma},
                               {"lambda", c.lambda},
                               {"initial_investment", c.initial_investment},
                               {"remaining_budget", c.remaining_budget}};
}

void from_json(const nlohmann::json& j, CostSchedule& c) {
    c.horizon = j.at("horizon").get<int>();
    c.currency = j.value("currency", std::string("USD"));
    c.wildfire = read_series(j, "wildfire", c.horizon);
    c.revenue_loss = read_series(j, "revenue_loss", c.horizon);
    c.deenergize = read_series(j, "deenergize", c.horizon);
    c.reenergize = read_series(j, "reenergize", c.horizon);
    c.gamma = j.value("gamma", 0.0);
    c.lambda = j.value("lambda", 0.0);
    c.initial_investment = j.value("initial_investment", 0.0);
    c.remaining_budget = j.value("remaining_budget", 0.0);
    c.validate();
}

bool risk_indicator(const StateSpace& space, const RiskRule& rule, std::size_t state) {
    if (rule.terms.size() != space.phenomena().size())
        throw std::invalid_argument("risk_indicator: rule must carry one term per phenomenon");
    auto factors = space.factors_of(state);
    for (std::size_t i = 0; i < rule.terms.size(); ++i) {
        const auto& term = rule.terms[i];
        if (term.direction == RiskDirection::PassThrough) continue;
        double value = space.representative(i, factors[i]);
        bool ok = term.direction == RiskDirection::AtLeast ? value >= term.threshold
                                                           : value <= term.threshold;
        if (!ok) return false;
    }
    return true;
}

Eigen::VectorXd risk_vector(const StateSpace& space, const RiskRule& rule) {
    Eigen::VectorXd f(static_cast<Eigen::Index>(space.cardinality()));
    for (std::size_t x = 0; x < space.cardinality(); ++x)
        f(static_cast<Eigen::Index>(x)) = risk_indicator(space, rule, x) ? 1.0 : 0.0;
    return f;
}

Eigen::VectorXd wrp_vector(const TransitionModel& model, const Eigen::VectorXd& risk) {
    if (static_cast<std::size_t>(risk.size()) != model.size())
        throw std::invalid_argument("wrp_vector: risk vector size mismatch");
    return model.apply(risk);
}

double wrp(const TransitionModel& model, const Eigen::VectorXd& risk, std::size_t x) {
    if (x >= model.size()) throw std::out_of_range("wrp: state out of range");
    return model.matrix().row(static_cast<Eigen::Index>(x)).dot(risk);
}

double switching_cost(int u_prev, int u, double s1, double s2) {
    return std::max(s1 * (u_prev - u), s2 * (u - u_prev));
}

double stage_cost(const CostSchedule& costs, int day, int u_prev, int u,
                  double realized_risk_next) {
    return costs.a(day) * u + costs.A(day) * realized_risk_next * (1 - u) +
           switching_cost(u_prev, u, costs.s1(day), costs.s2(day));
}

}  // namespace psps
