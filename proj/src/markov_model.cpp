#include "psps/markov_model.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <stdexcept>

namespace psps {

namespace {

constexpr double kRowSumTol = 1e-12;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t counter) {
    return splitmix64(splitmix64(seed) ^ counter);
}

double uniform_from(std::uint64_t seed, std::uint64_t counter) {
    // top 53 bits -> [0,1)
    return static_cast<double>(mix_seed(seed, counter) >> 11) * 0x1.0p-53;
}

StateSpace::StateSpace(std::vector<Phenomenon> phenomena, int day_type_count)
    : phenomena_(std::move(phenomena)), day_type_count_(day_type_count) {
    if (day_type_count_ < 1)
        throw std::invalid_argument("StateSpace: day_type_count must be >= 1");
    cardinality_ = static_cast<std::size_t>(day_type_count_);
    for (const auto& p : phenomena_) {
        for (std::size_t i = 1; i < p.bin_edges.size(); ++i)
            if (!(p.bin_edges[i - 1] < p.bin_edges[i]))
                throw std::invalid_argument("StateSpace: bin edges of '" + p.name +
                                            "' must be strictly ascending");
        cardinality_ *= p.bin_edges.size() + 1;
    }
    if (cardinality_ == 0 || phenomena_.empty())
        throw std::invalid_argument("StateSpace: at least one phenomenon required");
}

int StateSpace::bin_of(std::size_t phenomenon, double value) const {
    const auto& p = phenomena_.at(phenomenon);
    if (std::isnan(value))
        throw std::invalid_argument("StateSpace: NaN observation for '" + p.name + "'");
    const auto& e = p.bin_edges;
    return static_cast<int>(std::upper_bound(e.begin(), e.end(), value) - e.begin());
}

std::size_t StateSpace::discretize(std::span<const double> raw, int day_type) const {
    if (raw.size() != phenomena_.size())
        throw std::invalid_argument("StateSpace: expected one value per phenomenon");
    if (day_type < 0 || day_type >= day_type_count_)
        throw std::invalid_argument("StateSpace: day type out of range");
    std::size_t idx = 0;
    for (std::size_t i = 0; i < phenomena_.size(); ++i) {
        idx = idx * (phenomena_[i].bin_edges.size() + 1) +
              static_cast<std::size_t>(bin_of(i, raw[i]));
    }
    return idx * static_cast<std::size_t>(day_type_count_) +
           static_cast<std::size_t>(day_type);
}

std::vector<int> StateSpace::factors_of(std::size_t state) const {
    if (state >= cardinality_)
        throw std::out_of_range("StateSpace: state index out of range");
    std::vector<int> factors(phenomena_.size() + (day_type_count_ > 1 ? 1 : 0));
    if (day_type_count_ > 1) {
        factors.back() = static_cast<int>(state % day_type_count_);
    }
    state /= static_cast<std::size_t>(day_type_count_);
    for (std::size_t i = phenomena_.size(); i-- > 0;) {
        std::size_t radix = phenomena_[i].bin_edges.size() + 1;
        factors[i] = static_cast<int>(state % radix);
        state /= radix;
    }
    return factors;
}

double StateSpace::representative(std::size_t phenomenon, int bin) const {
    const auto& e = phenomena_.at(phenomenon).bin_edges;
    if (e.empty()) return 0.0;
    // the open-ended outer bins get a point half an average bin width
    // outside, which discretize maps back to the same bin
    double span = e.size() > 1
                      ? (e.back() - e.front()) / static_cast<double>(e.size() - 1)
                      : 1.0;
    if (bin <= 0) return e.front() - 0.5 * span;
    if (bin >= static_cast<int>(e.size())) return e.back() + 0.5 * span;
    return 0.5 * (e[static_cast<std::size_t>(bin) - 1] + e[static_cast<std::size_t>(bin)]);
}

TransitionModel::TransitionModel(Eigen::MatrixXd P, double smoothing)
    : P_(std::move(P)), smoothing_(smoothing) {
    if (P_.rows() != P_.cols() || P_.rows() == 0)
        throw std::invalid_argument("TransitionModel: matrix must be square and nonempty");
    for (Eigen::Index i = 0; i < P_.rows(); ++i) {
        double sum = 0.0;
        for (Eigen::Index j = 0; j < P_.cols(); ++j) {
            double v = P_(i, j);
            if (v < 0.0 || v > 1.0 || std::isnan(v))
                throw std::invalid_argument("TransitionModel: entries must lie in [0,1]");
            sum += v;
        }
        if (std::abs(sum - 1.0) > kRowSumTol)
            throw std::invalid_argument("TransitionModel: row " + std::to_string(i) +
                                        " does not sum to 1");
    }
    compile();
}

void TransitionModel::compile() {
    const Eigen::Index n = P_.rows();
    const double uniform = 1.0 / static_cast<double>(n);
    std::size_t nnz = 0;
    std::size_t n_uniform = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        double lo = P_.row(i).minCoeff(), hi = P_.row(i).maxCoeff();
        if (hi - lo <= 1e-15 && std::abs(hi - uniform) <= 1e-15) {
            ++n_uniform;
        } else {
            for (Eigen::Index j = 0; j < n; ++j)
                if (P_(i, j) != 0.0) ++nnz;
        }
    }
    // only worth the indirection when most of the matrix collapses
    use_structured_ = n >= 64 && (nnz + n_uniform) * 8 < static_cast<std::size_t>(n) *
                                                             static_cast<std::size_t>(n);
    if (!use_structured_) return;
    for (Eigen::Index i = 0; i < n; ++i) {
        double lo = P_.row(i).minCoeff(), hi = P_.row(i).maxCoeff();
        if (hi - lo <= 1e-15 && std::abs(hi - uniform) <= 1e-15) {
            uniform_rows_.push_back(i);
        } else {
            SparseRow row{i, {}};
            for (Eigen::Index j = 0; j < n; ++j)
                if (P_(i, j) != 0.0) row.entries.emplace_back(j, P_(i, j));
            sparse_rows_.push_back(std::move(row));
        }
    }
}

Eigen::VectorXd TransitionModel::apply(const Eigen::VectorXd& v) const {
    if (!use_structured_) return P_ * v;
    Eigen::VectorXd out(v.size());
    const double mean = v.mean();
    for (Eigen::Index i : uniform_rows_) out(i) = mean;
    for (const auto& row : sparse_rows_) {
        double acc = 0.0;
        for (const auto& [j, p] : row.entries) acc += p * v(j);
        out(row.row) = acc;
    }
    return out;
}

Eigen::MatrixXd TransitionModel::apply(const Eigen::MatrixXd& m) const {
    if (!use_structured_) return P_ * m;
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        out.col(c) = apply(Eigen::VectorXd(m.col(c)));
    return out;
}

TransitionModel estimate_transitions(const std::vector<std::vector<std::size_t>>& paths,
                                     std::size_t n_states, double smoothing) {
    if (paths.empty())
        throw std::invalid_argument("estimate_transitions: no paths given");
    if (smoothing < 0.0)
        throw std::invalid_argument("estimate_transitions: smoothing must be >= 0");
    const Eigen::Index n = static_cast<Eigen::Index>(n_states);
    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(n, n);
    std::size_t transitions = 0;
    for (const auto& path : paths) {
        for (std::size_t t = 0; t + 1 < path.size(); ++t) {
            if (path[t] >= n_states || path[t + 1] >= n_states)
                throw std::out_of_range("estimate_transitions: state index out of range");
            counts(static_cast<Eigen::Index>(path[t]),
                   static_cast<Eigen::Index>(path[t + 1])) += 1.0;
            ++transitions;
        }
    }
    if (transitions == 0 && smoothing == 0.0)
        throw std::invalid_argument(
            "estimate_transitions: no transitions observed and smoothing is zero");
    Eigen::MatrixXd P(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double row_total = counts.row(i).sum() + smoothing * static_cast<double>(n);
        if (row_total == 0.0) {
            P.row(i).setConstant(1.0 / static_cast<double>(n));
        } else {
            for (Eigen::Index j = 0; j < n; ++j)
                P(i, j) = (counts(i, j) + smoothing) / row_total;
        }
    }
    return TransitionModel(std::move(P), smoothing);
}

Eigen::MatrixXd n_step(const TransitionModel& model, unsigned n) {
    const Eigen::Index dim = static_cast<Eigen::Index>(model.size());
    Eigen::MatrixXd result = Eigen::MatrixXd::Identity(dim, dim);
    Eigen::MatrixXd base = model.matrix();
    while (n > 0) {
        if (n & 1u) result = result * base;
        base = base * base;
        n >>= 1u;
    }
    return result;
}

namespace {

// support-graph reachability from state 0, forward or transposed
std::vector<bool> reachable(const Eigen::MatrixXd& P, bool transpose) {
    const Eigen::Index n = P.rows();
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::deque<Eigen::Index> queue{0};
    seen[0] = true;
    while (!queue.empty()) {
        Eigen::Index u = queue.front();
        queue.pop_front();
        for (Eigen::Index v = 0; v < n; ++v) {
            double w = transpose ? P(v, u) : P(u, v);
            if (w > 0.0 && !seen[static_cast<std::size_t>(v)]) {
                seen[static_cast<std::size_t>(v)] = true;
                queue.push_back(v);
            }
        }
    }
    return seen;
}

}  // namespace

bool is_ergodic(const TransitionModel& model) {
    const Eigen::MatrixXd& P = model.matrix();
    const Eigen::Index n = P.rows();
    auto fwd = reachable(P, false);
    auto bwd = reachable(P, true);
    for (Eigen::Index i = 0; i < n; ++i)
        if (!fwd[static_cast<std::size_t>(i)] || !bwd[static_cast<std::size_t>(i)])
            return false;
    // period = gcd over edges (u,v) of level[u] + 1 - level[v] on a BFS tree
    std::vector<long> level(static_cast<std::size_t>(n), -1);
    std::deque<Eigen::Index> queue{0};
    level[0] = 0;
    long g = 0;
    while (!queue.empty()) {
        Eigen::Index u = queue.front();
        queue.pop_front();
        for (Eigen::Index v = 0; v < n; ++v) {
            if (P(u, v) <= 0.0) continue;
            if (level[static_cast<std::size_t>(v)] < 0) {
                level[static_cast<std::size_t>(v)] = level[static_cast<std::size_t>(u)] + 1;
                queue.push_back(v);
            } else {
                long diff = level[static_cast<std::size_t>(u)] + 1 -
                            level[static_cast<std::size_t>(v)];
                g = std::gcd(g, std::abs(diff));
            }
        }
    }
    return g == 1;
}

Eigen::VectorXd stationary(const TransitionModel& model, double tol) {
    if (!is_ergodic(model))
        throw std::runtime_error("stationary: chain is not ergodic");
    const Eigen::MatrixXd& P = model.matrix();
    const Eigen::Index n = P.rows();
    Eigen::VectorXd s;
    if (n <= 512) {
        // balance equations with the normalization appended
        Eigen::MatrixXd A(n + 1, n);
        A.topRows(n) = P.transpose() - Eigen::MatrixXd::Identity(n, n);
        A.bottomRows(1).setOnes();
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
        rhs(n) = 1.0;
        s = A.colPivHouseholderQr().solve(rhs);
    } else {
        s = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
        for (int it = 0; it < 200000; ++it) {
            Eigen::VectorXd next = P.transpose() * s;
            if ((next - s).lpNorm<Eigen::Infinity>() <= tol) {
                s = next;
                break;
            }
            s = next;
        }
    }
    s = s.cwiseMax(0.0);
    s /= s.sum();
    double resid = (P.transpose() * s - s).lpNorm<Eigen::Infinity>();
    if (resid > std::max(tol, 1e-9))
        throw std::runtime_error("stationary: did not converge to requested tolerance");
    return s;
}

std::vector<std::size_t> sample_path(const TransitionModel& model, std::size_t x0,
                                     std::size_t steps, std::uint64_t seed) {
    if (x0 >= model.size())
        throw std::out_of_range("sample_path: start state out of range");
    const Eigen::MatrixXd& P = model.matrix();
    std::vector<std::size_t> path;
    path.reserve(steps + 1);
    path.push_back(x0);
    std::size_t x = x0;
    for (std::size_t t = 0; t < steps; ++t) {
        double u = uniform_from(seed, t);
        double acc = 0.0;
        std::size_t next = model.size() - 1;
        for (Eigen::Index j = 0; j < P.cols(); ++j) {
            acc += P(static_cast<Eigen::Index>(x), j);
            if (u < acc) {
                next = static_cast<std::size_t>(j);
                break;
            }
        }
        x = next;
        path.push_back(x);
    }
    return path;
}

}  // namespace psps
