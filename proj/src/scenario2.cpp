#include "psps/scenario2.hpp"

#include <stdexcept>

namespace psps {

PolicyTableS2::PolicyTableS2(int T, CostSchedule costs, Eigen::VectorXd wrp,
                             std::vector<double> values)
    : T_(T), n_(static_cast<std::size_t>(wrp.size())), costs_(std::move(costs)),
      wrp_(std::move(wrp)), h_(std::move(values)) {
    if (T_ < 1) throw std::invalid_argument("PolicyTableS2: need T >= 1");
    std::size_t expect = static_cast<std::size_t>(T_ + 1) * 2 * n_;
    if (h_.size() != expect)
        throw std::invalid_argument("PolicyTableS2: value tensor has wrong size");
}

PolicyTableS2 build_s2(int T, const CostSchedule& costs, const TransitionModel& model,
                       const Eigen::VectorXd& risk) {
    if (T < 1) throw std::invalid_argument("build_s2: T must be >= 1");
    if (costs.horizon != T) throw std::invalid_argument("build_s2: cost schedule horizon mismatch");
    costs.validate();
    const Eigen::Index n = static_cast<Eigen::Index>(model.size());
    if (risk.size() != n) throw std::invalid_argument("build_s2: risk vector size mismatch");

    const Eigen::VectorXd w = model.apply(risk);
    std::vector<double> h(static_cast<std::size_t>(T + 1) * 2 * static_cast<std::size_t>(n));
    auto layer = [&](int d, int u) -> double* {
        return h.data() + (static_cast<std::size_t>(d) * 2 + static_cast<std::size_t>(u)) *
                              static_cast<std::size_t>(n);
    };
    auto day = [&](int d) { return T - d + 1; };

    Eigen::VectorXd pw = model.apply(w);  // P^2 f
    for (int u = 0; u < 2; ++u) {
        Eigen::Map<Eigen::VectorXd> out(layer(0, u), n);
        out = (costs.A(day(0)) * pw.array() + u * costs.s1(day(0))).matrix();
    }

    Eigen::MatrixXd branches(n, 2);
    for (int d = 1; d <= T; ++d) {
        const double A = costs.A(day(d));
        const double a = costs.a(day(d));
        const double s1 = costs.s1(day(d));
        const double s2 = costs.s2(day(d));
        Eigen::Map<const Eigen::VectorXd> stay(layer(d - 1, 0), n);
        Eigen::Map<const Eigen::VectorXd> shut(layer(d - 1, 1), n);
        Eigen::VectorXd base0 = stay + A * w;
        Eigen::VectorXd base1 = (shut.array() + a + costs.lambda).matrix();
        branches.col(0) = base0.array().min(base1.array() + s2).matrix();    // u = 0
        branches.col(1) = (base0.array() + s1).min(base1.array()).matrix();  // u = 1
        Eigen::MatrixXd averaged = model.apply(branches);
        Eigen::Map<Eigen::VectorXd>(layer(d, 0), n) = averaged.col(0);
        Eigen::Map<Eigen::VectorXd>(layer(d, 1), n) = averaged.col(1);
    }
    return PolicyTableS2(T, costs, w, std::move(h));
}

double threshold_s2(const PolicyTableS2& table, int d, int u_prev, std::size_t x) {
    if (d < 1 || d > table.horizon())
        throw std::out_of_range("threshold_s2: d must be in 1..T");
    if (x >= table.n_states()) throw std::out_of_range("threshold_s2: state out of range");
    const CostSchedule& c = table.costs();
    int day = table.horizon() - d + 1;
    double diff = table.h(d - 1, 1, x) - table.h(d - 1, 0, x);
    return (diff + c.a(day) + c.lambda + (1 - u_prev) * c.s2(day) - u_prev * c.s1(day)) /
           c.A(day);
}

int decide_s2(const PolicyTableS2& table, int d, int u_prev, std::size_t x) {
    return table.wrp()(static_cast<Eigen::Index>(x)) >= threshold_s2(table, d, u_prev, x)
               ? 1
               : 0;
}

}  // namespace psps
