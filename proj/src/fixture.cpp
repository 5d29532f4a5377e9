#include "psps/fixture.hpp"

#include "psps/risk_cost.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace psps {

namespace {

// birth-death chain: up[i] = P(i -> i+1), down[i] = P(i -> i-1), remainder
// stays put; boundary rows fold the missing move into staying.
Eigen::MatrixXd birth_death(const std::vector<double>& up, const std::vector<double>& down) {
    const Eigen::Index n = static_cast<Eigen::Index>(up.size());
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double u = (i + 1 < n) ? up[static_cast<std::size_t>(i)] : 0.0;
        double d = (i > 0) ? down[static_cast<std::size_t>(i)] : 0.0;
        if (i + 1 < n) P(i, i + 1) = u;
        if (i > 0) P(i, i - 1) = d;
        P(i, i) = 1.0 - u - d;
    }
    return P;
}

struct Channel {
    Phenomenon phenomenon;
    Eigen::MatrixXd chain;
    int start_bin;
};

// local birth-death moves blended with a daily chance of resampling from a
// regional weather-pattern distribution; the jump part keeps seasons from
// getting stuck in one regime while the local part keeps spells persistent
Eigen::MatrixXd pattern_chain(const std::vector<double>& up, const std::vector<double>& down,
                              double jump, const std::vector<double>& pattern) {
    Eigen::MatrixXd local = birth_death(up, down);
    const Eigen::Index n = local.rows();
    Eigen::VectorXd pi(n);
    for (Eigen::Index i = 0; i < n; ++i) pi(i) = pattern[static_cast<std::size_t>(i)];
    pi /= pi.sum();
    return (1.0 - jump) * local + jump * Eigen::VectorXd::Ones(n) * pi.transpose();
}

std::vector<Channel> psps_channels() {
    std::vector<Channel> ch;
    ch.push_back({{"temp", "c", {14, 18, 22, 26, 30, 34, 38}},
                  birth_death(std::vector<double>(8, 0.25), std::vector<double>(8, 0.25)),
                  3});
    // humidity is driven by which air mass sits over the region, so most of
    // the day-to-day motion is regime resampling rather than local drift
    ch.push_back({{"rh", "pct", {10, 20, 30, 40, 55, 70, 85}},
                  pattern_chain(std::vector<double>(8, 0.02), std::vector<double>(8, 0.02),
                                0.55, {0.80, 0.80, 0.80, 1.12, 1.12, 1.12, 1.12, 1.12}),
                  5});
    ch.push_back({{"wind", "kmh", {5, 10, 15, 20, 26, 33, 41}},
                  birth_death(std::vector<double>(8, 0.30), std::vector<double>(8, 0.30)),
                  2});
    // gust regimes mirror that: strong-gust episodes arrive abruptly and
    // last a day or two
    ch.push_back({{"gust", "kmh", {20, 30, 40, 50, 60, 72, 85}},
                  pattern_chain(std::vector<double>(8, 0.02), std::vector<double>(8, 0.02),
                                0.51, {1.36, 1.36, 1.36, 1.36, 1.36, 0.40, 0.40, 0.40}),
                  1});
    return ch;
}

StateSpace joint_space(const std::vector<Channel>& channels) {
    std::vector<Phenomenon> phenomena;
    for (const auto& c : channels) phenomena.push_back(c.phenomenon);
    return StateSpace(std::move(phenomena), 1);
}

// product chain of independent channels; rows are renormalized to absorb
// the accumulated floating-point slack of the 4096-term products
TransitionModel joint_chain(const StateSpace& space, const std::vector<Channel>& channels) {
    const std::size_t n = space.cardinality();
    std::vector<std::vector<int>> factors(n);
    for (std::size_t x = 0; x < n; ++x) factors[x] = space.factors_of(x);
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                              static_cast<Eigen::Index>(n));
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            double p = 1.0;
            for (std::size_t c = 0; c < channels.size(); ++c) {
                p *= channels[c].chain(factors[x][c], factors[y][c]);
                if (p == 0.0) break;
            }
            if (p != 0.0) P(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) = p;
        }
        P.row(static_cast<Eigen::Index>(x)) /= P.row(static_cast<Eigen::Index>(x)).sum();
    }
    return TransitionModel(std::move(P));
}

std::size_t start_state(const StateSpace& space, const std::vector<Channel>& channels) {
    std::vector<double> raw;
    for (std::size_t c = 0; c < channels.size(); ++c)
        raw.push_back(space.representative(c, channels[c].start_bin));
    return space.discretize(raw);
}

Channel cpp_channel() {
    // winter temperature: mostly mild with short, sharp cold snaps whenever
    // an arctic air mass moves in; the uneven edges resolve the -10..0 range
    // where the duty-cycle decision is most sensitive
    return {{"temp", "c", {-24, -19, -14, -9, -7, 0, 7}},
            pattern_chain(std::vector<double>(8, 0.10), std::vector<double>(8, 0.10),
                          0.50, {0.3, 0.3, 0.4, 1.0, 2.0, 1.6, 1.5, 0.9}),
            5};
}

int days_in_month(int year, int month) {
    static const int lengths[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2) {
        bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
        return leap ? 29 : 28;
    }
    return lengths[month - 1];
}

std::string format_date(int y, int m, int d) {
    std::ostringstream out;
    out << std::setfill('0') << std::setw(4) << y << '-' << std::setw(2) << m << '-'
        << std::setw(2) << d;
    return out.str();
}

// jittered reading inside bin b; the open-ended outer bins extend by one
// average bin width, truncated at the physical floor of the quantity
double in_bin_value(const Phenomenon& p, int bin, double u,
                    double floor = -std::numeric_limits<double>::infinity()) {
    const auto& e = p.bin_edges;
    double span = (e.back() - e.front()) / static_cast<double>(e.size() - 1);
    double lo = (bin == 0) ? e.front() - span : e[static_cast<std::size_t>(bin) - 1];
    double hi = (bin == static_cast<int>(e.size())) ? e.back() + span
                                                    : e[static_cast<std::size_t>(bin)];
    lo = std::max(lo, floor);
    return lo + u * (hi - lo);
}

}  // namespace

PspsFixture make_psps_fixture() {
    auto channels = psps_channels();
    StateSpace space = joint_space(channels);
    TransitionModel model = joint_chain(space, channels);

    RiskRule rule;
    rule.terms = {{RiskDirection::PassThrough, 0.0},
                  {RiskDirection::AtMost, 30.0},   // dry air
                  {RiskDirection::PassThrough, 0.0},
                  {RiskDirection::AtLeast, 60.0}}; // strong gusts
    Eigen::VectorXd risk = risk_vector(space, rule);
    CostSchedule costs = CostSchedule::uniform(122, 1e9, 2e5, 2e6, 2e6, 0.0, 40.5e6);
    std::size_t x0 = start_state(space, channels);
    return PspsFixture{std::move(space), std::move(model), std::move(rule),
                       std::move(risk), std::move(costs), 10, x0};
}

CppFixture make_cpp_fixture() {
    Channel ch = cpp_channel();
    StateSpace space({ch.phenomenon}, 1);
    TransitionModel model{Eigen::MatrixXd(ch.chain)};
    DemandModel demand;
    demand.coef = Eigen::Vector2d(36000.0, -800.0);  // MW, MW per degree
    QuadCost quad = QuadCost::uniform(120, 0.00245, 45.5, 8e5);
    CppParams params = CppParams::uniform(120, 25, 100.0, 26300.0);
    std::size_t x0 = space.discretize(std::vector<double>{space.representative(0, ch.start_bin)});
    return CppFixture{std::move(space), std::move(model), std::move(demand),
                      std::move(quad),  std::move(params), 120, x0};
}

void write_psps_csv(const std::string& path, int n_years, std::uint64_t seed) {
    if (n_years < 1) throw std::invalid_argument("write_psps_csv: need n_years >= 1");
    auto channels = psps_channels();
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "date,temp_c,rh_pct,wind_kmh,gust_kmh\n";
    out << std::setprecision(10);
    for (int y = 0; y < n_years; ++y) {
        int year = 2001 + y;
        std::vector<std::vector<std::size_t>> bins;
        for (std::size_t c = 0; c < channels.size(); ++c)
            bins.push_back(sample_path(
                TransitionModel(channels[c].chain),
                static_cast<std::size_t>(channels[c].start_bin), 121,
                mix_seed(seed, static_cast<std::uint64_t>(y) * 8 + c)));
        std::size_t t = 0;
        for (int month = 6; month <= 9; ++month) {
            for (int day = 1; day <= days_in_month(year, month); ++day, ++t) {
                out << format_date(year, month, day);
                for (std::size_t c = 0; c < channels.size(); ++c) {
                    double u = uniform_from(
                        mix_seed(seed, 1000003 + static_cast<std::uint64_t>(y) * 8 + c),
                        t);
                    // humidity, wind, and gusts cannot go negative
                    double floor = c == 0 ? -std::numeric_limits<double>::infinity() : 0.0;
                    out << ',' << in_bin_value(channels[c].phenomenon,
                                               static_cast<int>(bins[c][t]), u, floor);
                }
                out << '\n';
            }
        }
    }
    if (!out) throw std::runtime_error("short write to " + path);
}

void write_cpp_csv(const std::string& path, int n_years, std::uint64_t seed) {
    if (n_years < 1) throw std::invalid_argument("write_cpp_csv: need n_years >= 1");
    CppFixture fx = make_cpp_fixture();
    const Phenomenon& temp = fx.space.phenomena()[0];
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "date,temp_c,demand_mw\n";
    out << std::setprecision(10);
    for (int y = 0; y < n_years; ++y) {
        int start_year = 2001 + y;
        std::vector<std::size_t> bins =
            sample_path(fx.model, fx.x0, 125, mix_seed(seed, static_cast<std::uint64_t>(y)));
        std::size_t t = 0;
        // winter spans the year boundary: Dec of start_year, Jan-Mar after
        for (auto [year, month, last_day] :
             {std::tuple{start_year, 12, 31}, {start_year + 1, 1, 31},
              {start_year + 1, 2, days_in_month(start_year + 1, 2)},
              {start_year + 1, 3, 30}}) {
            for (int day = 1; day <= last_day; ++day, ++t) {
                double u = uniform_from(mix_seed(seed, 2000003 + static_cast<std::uint64_t>(y)),
                                        2 * t);
                double un = uniform_from(
                    mix_seed(seed, 2000003 + static_cast<std::uint64_t>(y)), 2 * t + 1);
                double reading = in_bin_value(temp, static_cast<int>(bins[t]), u);
                double q = fx.demand.predict(fx.space, bins[t]) + (un - 0.5) * 600.0;
                out << format_date(year, month, day) << ',' << reading << ',' << q << '\n';
            }
        }
    }
    if (!out) throw std::runtime_error("short write to " + path);
}

}  // namespace psps
