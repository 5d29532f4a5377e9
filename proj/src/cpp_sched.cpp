#include "psps/cpp_sched.hpp"

#include <limits>
#include <stdexcept>

namespace psps {

QuadCost QuadCost::uniform(int T, double B, double C, double D) {
    QuadCost q;
    std::size_t n = static_cast<std::size_t>(T) + 1;
    q.b2.assign(n, B);
    q.c1.assign(n, C);
    q.d0.assign(n, D);
    q.validate(T);
    return q;
}

void QuadCost::validate(int T) const {
    std::size_t n = static_cast<std::size_t>(T) + 1;
    if (b2.size() != n || c1.size() != n || d0.size() != n)
        throw std::invalid_argument("QuadCost: coefficient series must have T+1 entries");
    for (std::size_t i = 0; i < n; ++i)
        if (b2[i] < 0.0 || c1[i] < 0.0 || d0[i] < 0.0)
            throw std::invalid_argument("QuadCost: coefficients must be >= 0");
}

CppParams CppParams::uniform(int T, int M, double y, double abar_value) {
    CppParams p;
    p.budget = M;
    p.y = y;
    p.abar.assign(static_cast<std::size_t>(T) + 1, abar_value);
    p.validate(T);
    return p;
}

void CppParams::validate(int T) const {
    if (budget < 0) throw std::invalid_argument("CppParams: budget must be >= 0");
    if (!(y > 0.0)) throw std::invalid_argument("CppParams: y must be > 0");
    if (abar.size() != static_cast<std::size_t>(T) + 1)
        throw std::invalid_argument("CppParams: abar must have T+1 entries");
}

Eigen::VectorXd demand_features(const StateSpace& space, std::size_t state) {
    auto factors = space.factors_of(state);
    std::size_t p = space.phenomena().size();
    int dt = space.day_type_count();
    Eigen::VectorXd f(static_cast<Eigen::Index>(1 + p + static_cast<std::size_t>(dt - 1)));
    f(0) = 1.0;
    for (std::size_t i = 0; i < p; ++i)
        f(static_cast<Eigen::Index>(1 + i)) = space.representative(i, factors[i]);
    for (int t = 1; t < dt; ++t)
        f(static_cast<Eigen::Index>(1 + p) + t - 1) =
            (dt > 1 && factors[p] == t) ? 1.0 : 0.0;
    return f;
}

double DemandModel::predict(const StateSpace& space, std::size_t state) const {
    Eigen::VectorXd f = demand_features(space, state);
    if (f.size() != coef.size())
        throw std::invalid_argument("DemandModel: coefficient count does not match state space");
    return coef.dot(f);
}

Eigen::VectorXd DemandModel::demand_vector(const StateSpace& space) const {
    Eigen::VectorXd q(static_cast<Eigen::Index>(space.cardinality()));
    for (std::size_t x = 0; x < space.cardinality(); ++x)
        q(static_cast<Eigen::Index>(x)) = predict(space, x);
    return q;
}

double power_cost(double z, const QuadCost& quad, int day) {
    return quad.B(day) * z * z + quad.C(day) * z + quad.D(day);
}

PolicyTableCpp::PolicyTableCpp(int T, CppParams params, QuadCost quad,
                               Eigen::VectorXd demand, Eigen::VectorXd mean_next_demand,
                               std::vector<double> values)
    : T_(T), n_(static_cast<std::size_t>(demand.size())), params_(std::move(params)),
      quad_(std::move(quad)), demand_(std::move(demand)), mq_(std::move(mean_next_demand)),
      g_(std::move(values)) {
    if (T_ < 1) throw std::invalid_argument("PolicyTableCpp: need T >= 1");
    std::size_t expect = static_cast<std::size_t>(T_ + 1) *
                         static_cast<std::size_t>(params_.budget + 1) * n_;
    if (g_.size() != expect)
        throw std::invalid_argument("PolicyTableCpp: value tensor has wrong size");
}

PolicyTableCpp build_cpp(int T, const CppParams& params, const QuadCost& quad,
                         const Eigen::VectorXd& demand, const TransitionModel& model) {
    if (T < 1) throw std::invalid_argument("build_cpp: T must be >= 1");
    params.validate(T);
    quad.validate(T);
    if (params.budget > T) throw std::invalid_argument("build_cpp: need M <= T");
    const int M = params.budget;
    const Eigen::Index n = static_cast<Eigen::Index>(model.size());
    if (demand.size() != n) throw std::invalid_argument("build_cpp: demand vector size mismatch");

    std::vector<double> g(static_cast<std::size_t>(T + 1) * static_cast<std::size_t>(M + 1) *
                          static_cast<std::size_t>(n));
    auto layer = [&](int d, int k) -> double* {
        return g.data() + (static_cast<std::size_t>(d) * static_cast<std::size_t>(M + 1) +
                           static_cast<std::size_t>(k)) *
                              static_cast<std::size_t>(n);
    };
    auto day = [&](int d) { return T - d + 1; };
    // conditional expected supply cost of the day priced by layer d, with and
    // without the y MW curtailment
    auto cost_vec = [&](int d, double shift) {
        int t = day(d);
        Eigen::ArrayXd z = demand.array() - shift;
        Eigen::VectorXd c = (quad.B(t) * z.square() + quad.C(t) * z + quad.D(t)).matrix();
        return model.apply(c);
    };

    // no-event-left boundary: bz_d = P (bz_{d-1} + cq_{day(d)}), bz_0 = P cq
    std::vector<Eigen::VectorXd> boundary_zero(static_cast<std::size_t>(T) + 1);
    boundary_zero[0] = model.apply(cost_vec(0, 0.0));
    for (int d = 1; d <= T; ++d)
        boundary_zero[static_cast<std::size_t>(d)] = model.apply(
            (boundary_zero[static_cast<std::size_t>(d - 1)] + cost_vec(d, 0.0)).eval());
    for (int d = 0; d <= T; ++d)
        for (int k = 0; k <= M; ++k)
            if (k == 0 || d == 0) {
                Eigen::Map<Eigen::VectorXd> out(layer(d, k), n);
                out = boundary_zero[static_cast<std::size_t>(d)];
            }

    Eigen::MatrixXd branches(n, M);
    for (int d = 1; d <= T; ++d) {
        Eigen::VectorXd cq = cost_vec(d, 0.0);
        Eigen::VectorXd cqy = cost_vec(d, params.y);
        const double abar = params.a(day(d));
        for (int k = 1; k <= M; ++k) {
            Eigen::Map<const Eigen::VectorXd> keep(layer(d - 1, k), n);
            Eigen::Map<const Eigen::VectorXd> fire(layer(d - 1, k - 1), n);
            branches.col(k - 1) =
                (keep + cq).cwiseMin(((fire + cqy).array() + abar).matrix());
        }
        if (M > 0) {
            Eigen::MatrixXd averaged = model.apply(branches);
            for (int k = 1; k <= M; ++k)
                Eigen::Map<Eigen::VectorXd>(layer(d, k), n) = averaged.col(k - 1);
        }
    }
    return PolicyTableCpp(T, params, quad, demand, model.apply(demand), std::move(g));
}

PolicyTableCpp build_cpp(int T, const CppParams& params, const QuadCost& quad,
                         const DemandModel& demand, const StateSpace& space,
                         const TransitionModel& model) {
    if (space.cardinality() != model.size())
        throw std::invalid_argument("build_cpp: state space and transition model disagree");
    return build_cpp(T, params, quad, demand.demand_vector(space), model);
}

double threshold_cpp(const PolicyTableCpp& table, int d, int k, std::size_t x) {
    if (d < 1 || d > table.horizon())
        throw std::out_of_range("threshold_cpp: d must be in 1..T");
    if (k < 0 || k > table.budget()) throw std::out_of_range("threshold_cpp: k out of range");
    if (x >= table.n_states()) throw std::out_of_range("threshold_cpp: state out of range");
    if (k == 0) return std::numeric_limits<double>::infinity();
    int day = table.horizon() - d + 1;
    const double B = table.quad().B(day);
    const double C = table.quad().C(day);
    const double y = table.params().y;
    if (!(B > 0.0)) throw std::invalid_argument("threshold_cpp: B must be > 0 on the priced day");
    if (!(y > 0.0)) throw std::invalid_argument("threshold_cpp: y must be > 0");
    double diff = table.g(d - 1, k - 1, x) - table.g(d - 1, k, x);
    return (diff + table.params().a(day) - C * y + B * y * y) / (2.0 * y * B);
}

int decide_cpp(const PolicyTableCpp& table, int d, int k, std::size_t x) {
    if (k == 0) return 0;
    return table.mean_next_demand()(static_cast<Eigen::Index>(x)) >
                   threshold_cpp(table, d, k, x)
               ? 1
               : 0;
}

}  // namespace psps
