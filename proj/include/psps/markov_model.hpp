#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace psps {

/// One discretized observation channel (temperature, wind, ...).
/// `bin_edges` must be strictly ascending; a channel with e edges has e+1
/// bins and the outer bins are open-ended, so every finite real maps to a bin.
struct Phenomenon {
    std::string name;
    std::string unit;
    std::vector<double> bin_edges;
};

/// Joint state space: the product of independently binned phenomena plus an
/// optional categorical day-type factor (encoded last in the mixed radix).
class StateSpace {
  public:
    StateSpace(std::vector<Phenomenon> phenomena, int day_type_count = 1);

    const std::vector<Phenomenon>& phenomena() const { return phenomena_; }
    int day_type_count() const { return day_type_count_; }
    std::size_t cardinality() const { return cardinality_; }

    /// Bin index of `value` within one phenomenon. Total on finite reals;
    /// NaN is rejected with a diagnostic naming the phenomenon.
    int bin_of(std::size_t phenomenon, double value) const;

    /// Joint index by mixed-radix encoding: phenomena in declaration order,
    /// day-type last.
    std::size_t discretize(std::span<const double> raw, int day_type = 0) const;

    /// Per-factor bin indices of a joint state (day-type last if present).
    std::vector<int> factors_of(std::size_t state) const;

    /// Representative value of a bin: midpoint of its edges; the open-ended
    /// outer bins use a point half an average bin width past their finite
    /// edge, so discretizing a representative recovers its bin.
    double representative(std::size_t phenomenon, int bin) const;

  private:
    std::vector<Phenomenon> phenomena_;
    int day_type_count_;
    std::size_t cardinality_;
};

/// Row-stochastic transition matrix over a StateSpace.
///
/// The matrix is validated on construction (entries in [0,1], rows summing
/// to one within 1e-12) and immutable afterwards. Rows are compiled into a
/// sparse/uniform classification so that products with count-estimated
/// matrices, whose unvisited rows are uniform, cost O(nnz) instead of O(n^2).
class TransitionModel {
  public:
    explicit TransitionModel(Eigen::MatrixXd P, double smoothing = 0.0);

    const Eigen::MatrixXd& matrix() const { return P_; }
    std::size_t size() const { return static_cast<std::size_t>(P_.rows()); }
    double smoothing() const { return smoothing_; }

    /// y = P * v.
    Eigen::VectorXd apply(const Eigen::VectorXd& v) const;
    /// Y = P * M, column by column.
    Eigen::MatrixXd apply(const Eigen::MatrixXd& m) const;

  private:
    Eigen::MatrixXd P_;
    double smoothing_;

    // compiled row structure
    struct SparseRow {
        Eigen::Index row;
        std::vector<std::pair<Eigen::Index, double>> entries;
    };
    bool use_structured_ = false;
    std::vector<SparseRow> sparse_rows_;
    std::vector<Eigen::Index> uniform_rows_;

    void compile();
};

/// Frequency/pseudo-count estimator over observed state sequences.
/// P[i][j] = (count(i->j) + smoothing) / (count(i->.) + smoothing * n).
/// Rows with zero count and zero smoothing become uniform rows.
TransitionModel estimate_transitions(const std::vector<std::vector<std::size_t>>& paths,
                                     std::size_t n_states, double smoothing);

/// n-step transition matrix by repeated squaring; n = 0 gives the identity.
Eigen::MatrixXd n_step(const TransitionModel& model, unsigned n);

/// True when the support graph is strongly connected and aperiodic.
bool is_ergodic(const TransitionModel& model);

/// Stationary distribution s with ||sP - s||_inf <= tol. Throws for
/// non-ergodic chains rather than returning a spurious fixed point.
Eigen::VectorXd stationary(const TransitionModel& model, double tol = 1e-12);

/// Deterministic path sampler: inverse-CDF over each row in state-index
/// order, with one counter-hashed uniform per step so results do not depend
/// on caller threading. Returns T+1 states starting at x0.
std::vector<std::size_t> sample_path(const TransitionModel& model, std::size_t x0,
                                     std::size_t steps, std::uint64_t seed);

/// splitmix64 output for (seed, counter); used everywhere randomness must be
/// reproducible across platforms.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t counter);

/// Uniform draw in [0,1) from a mixed seed.
double uniform_from(std::uint64_t seed, std::uint64_t counter);

}  // namespace psps
