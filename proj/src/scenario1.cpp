#include "psps/scenario1.hpp"

#include <limits>
#include <stdexcept>

namespace psps {

PolicyTableS1::PolicyTableS1(int T, int N, CostSchedule costs, Eigen::VectorXd wrp,
                             std::vector<double> values)
    : T_(T), N_(N), n_(static_cast<std::size_t>(wrp.size())), costs_(std::move(costs)),
      wrp_(std::move(wrp)), g_(std::move(values)) {
    if (T_ < 1 || N_ < 0 || N_ > T_)
        throw std::invalid_argument("PolicyTableS1: need T >= 1 and 0 <= N <= T");
    std::size_t expect = static_cast<std::size_t>(T_ + 1) *
                         static_cast<std::size_t>(N_ + 1) * 2 * n_;
    if (g_.size() != expect)
        throw std::invalid_argument("PolicyTableS1: value tensor has wrong size");
}

std::size_t PolicyTableS1::idx(int d, int k, int u, std::size_t x) const {
    return ((static_cast<std::size_t>(d) * static_cast<std::size_t>(N_ + 1) +
             static_cast<std::size_t>(k)) *
                2 +
            static_cast<std::size_t>(u)) *
               n_ +
           x;
}

PolicyTableS1 build_s1(int T, int N, const CostSchedule& costs,
                       const TransitionModel& model, const Eigen::VectorXd& risk) {
    if (T < 1) throw std::invalid_argument("build_s1: T must be >= 1");
    if (N < 0 || N > T) throw std::invalid_argument("build_s1: need 0 <= N <= T");
    if (costs.horizon != T) throw std::invalid_argument("build_s1: cost schedule horizon mismatch");
    costs.validate();
    const Eigen::Index n = static_cast<Eigen::Index>(model.size());
    if (risk.size() != n) throw std::invalid_argument("build_s1: risk vector size mismatch");

    const Eigen::VectorXd w = model.apply(risk);  // wrp per state
    std::vector<double> g(static_cast<std::size_t>(T + 1) *
                          static_cast<std::size_t>(N + 1) * 2 *
                          static_cast<std::size_t>(n));
    auto layer = [&](int d, int k, int u) -> double* {
        return g.data() + ((static_cast<std::size_t>(d) * static_cast<std::size_t>(N + 1) +
                            static_cast<std::size_t>(k)) *
                               2 +
                           static_cast<std::size_t>(u)) *
                              static_cast<std::size_t>(n);
    };
    // cost-schedule day priced by recursion layer d (1..T+1); d = 0 -> T+1
    auto day = [&](int d) { return T - d + 1; };

    // k = 0 boundary: no budget left, the chain stays energized for the rest
    // of the horizon. bz_d = P (bz_{d-1} + A_{day(d)} w), bz_0 = A P w.
    std::vector<Eigen::VectorXd> boundary_zero(static_cast<std::size_t>(T) + 1);
    boundary_zero[0] = costs.A(day(0)) * model.apply(w);
    for (int d = 1; d <= T; ++d)
        boundary_zero[static_cast<std::size_t>(d)] = model.apply(
            (boundary_zero[static_cast<std::size_t>(d - 1)] + costs.A(day(d)) * w).eval());
    for (int d = 0; d <= T; ++d) {
        for (int u = 0; u < 2; ++u) {
            double s1_term = u * costs.s1(day(d));
            Eigen::Map<Eigen::VectorXd> out(layer(d, 0, u), n);
            out = (boundary_zero[static_cast<std::size_t>(d)].array() + s1_term).matrix();
        }
    }
    // d = 0 boundary for k >= 1 coincides with the k = 0 row
    for (int k = 1; k <= N; ++k)
        for (int u = 0; u < 2; ++u)
            std::copy(layer(0, 0, u), layer(0, 0, u) + n, layer(0, k, u));

    // main recursion
    Eigen::MatrixXd branches(n, 2 * N);
    for (int d = 1; d <= T; ++d) {
        const double A = costs.A(day(d));
        const double a = costs.a(day(d));
        const double s1 = costs.s1(day(d));
        const double s2 = costs.s2(day(d));
        for (int k = 1; k <= N; ++k) {
            Eigen::Map<const Eigen::VectorXd> stay(layer(d - 1, k, 0), n);
            Eigen::Map<const Eigen::VectorXd> shut(layer(d - 1, k - 1, 1), n);
            Eigen::VectorXd base0 = stay + A * w;
            Eigen::VectorXd base1 = (shut.array() + a).matrix();
            branches.col(2 * (k - 1)) =
                base0.array().min(base1.array() + s2).matrix();  // u = 0
            branches.col(2 * (k - 1) + 1) =
                (base0.array() + s1).min(base1.array()).matrix();  // u = 1
        }
        Eigen::MatrixXd averaged = model.apply(branches);
        for (int k = 1; k <= N; ++k) {
            Eigen::Map<Eigen::VectorXd>(layer(d, k, 0), n) = averaged.col(2 * (k - 1));
            Eigen::Map<Eigen::VectorXd>(layer(d, k, 1), n) = averaged.col(2 * (k - 1) + 1);
        }
    }
    return PolicyTableS1(T, N, costs, w, std::move(g));
}

double threshold_s1(const PolicyTableS1& table, int d, int k, int u_prev, std::size_t x) {
    if (d < 1 || d > table.horizon())
        throw std::out_of_range("threshold_s1: d must be in 1..T");
    if (k < 0 || k > table.budget())
        throw std::out_of_range("threshold_s1: k out of range");
    if (x >= table.n_states()) throw std::out_of_range("threshold_s1: state out of range");
    if (k == 0) return std::numeric_limits<double>::infinity();
    const CostSchedule& c = table.costs();
    int day = table.horizon() - d + 1;
    double diff = table.g(d - 1, k - 1, 1, x) - table.g(d - 1, k, 0, x);
    return (diff + c.a(day) + (1 - u_prev) * c.s2(day) - u_prev * c.s1(day)) / c.A(day);
}

int decide_s1(const PolicyTableS1& table, int d, int k, int u_prev, std::size_t x) {
    if (k == 0) return 0;
    return table.wrp()(static_cast<Eigen::Index>(x)) >= threshold_s1(table, d, k, u_prev, x)
               ? 1
               : 0;
}

}  // namespace psps
