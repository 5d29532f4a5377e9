#include "psps/ingest.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace psps {

namespace {

std::runtime_error row_error(const std::string& path, std::size_t line, const std::string& what) {
    return std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

bool parse_date(const std::string& s, int& y, int& m, int& d) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
    try {
        y = std::stoi(s.substr(0, 4));
        m = std::stoi(s.substr(5, 2));
        d = std::stoi(s.substr(8, 2));
    } catch (const std::exception&) {
        return false;
    }
    return m >= 1 && m <= 12 && d >= 1 && d <= 31;
}

}  // namespace

bool SeasonWindow::contains(int month, int day) const {
    int v = month * 100 + day;
    int lo = start_month * 100 + start_day;
    int hi = end_month * 100 + end_day;
    if (lo <= hi) return v >= lo && v <= hi;
    return v >= lo || v <= hi;  // window wrapping the year end
}

long days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    long era = (y >= 0 ? y : y - 399) / 400;
    unsigned yoe = static_cast<unsigned>(y - era * 400);
    unsigned doy = static_cast<unsigned>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1);
    unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long>(doe) - 719468;
}

int weekday_of(int y, int m, int d) {
    long z = days_from_civil(y, m, d);  // 1970-01-01 was a Thursday
    return static_cast<int>(((z % 7) + 7 + 3) % 7);
}

WeatherFrame load_csv(const std::string& path, const std::vector<std::string>& expected_columns,
                      const SeasonWindow& season, bool carry_forward) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_csv: cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("load_csv: empty file " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto header = split_csv_line(line);
    if (header.empty() || header[0] != "date")
        throw row_error(path, 1, "first column must be 'date'");
    bool has_demand = !header.empty() && header.back() == "demand_mw";
    std::size_t n_cols = header.size() - 1 - (has_demand ? 1 : 0);
    if (n_cols != expected_columns.size())
        throw row_error(path, 1, "expected " + std::to_string(expected_columns.size()) +
                                     " reading columns, found " + std::to_string(n_cols));
    for (std::size_t i = 0; i < n_cols; ++i)
        if (header[i + 1] != expected_columns[i])
            throw row_error(path, 1, "column '" + header[i + 1] + "' does not match declared '" +
                                         expected_columns[i] + "' (name and unit must agree)");

    WeatherFrame frame;
    frame.columns = expected_columns;
    frame.has_demand = has_demand;

    long prev_serial = 0;
    bool have_prev = false;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw row_error(path, line_no, "expected " + std::to_string(header.size()) +
                                               " fields, found " + std::to_string(fields.size()));
        int y, m, d;
        if (!parse_date(fields[0], y, m, d))
            throw row_error(path, line_no, "unparsable date '" + fields[0] + "'");
        if (!season.contains(m, d)) continue;

        long serial = days_from_civil(y, m, d);
        if (have_prev) {
            if (serial == prev_serial)
                throw row_error(path, line_no, "duplicate date " + fields[0]);
            if (serial < prev_serial)
                throw row_error(path, line_no, "dates out of order at " + fields[0]);
            long gap = serial - prev_serial;
            bool same_season_run = gap < 90;  // larger jumps are season boundaries
            if (same_season_run && gap > 1) {
                if (!carry_forward || gap > 2)
                    throw row_error(path, line_no,
                                    "gap of " + std::to_string(gap - 1) + " day(s) before " +
                                        fields[0]);
                // duplicate the previous row onto the missing day
                std::size_t last = frame.rows() - 1;
                int yy = frame.year[last], mm = frame.month[last], dd = frame.day[last];
                static const int mdays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
                int leap = (yy % 4 == 0 && (yy % 100 != 0 || yy % 400 == 0)) ? 1 : 0;
                int lim = mdays[mm - 1] + (mm == 2 ? leap : 0);
                if (++dd > lim) {
                    dd = 1;
                    if (++mm > 12) {
                        mm = 1;
                        ++yy;
                    }
                }
                frame.year.push_back(yy);
                frame.month.push_back(mm);
                frame.day.push_back(dd);
                frame.weekday.push_back(weekday_of(yy, mm, dd));
                frame.readings.push_back(frame.readings[last]);
                if (has_demand) frame.demand.push_back(frame.demand[last]);
            }
        }
        prev_serial = serial;
        have_prev = true;

        std::vector<double> row(n_cols);
        for (std::size_t i = 0; i < n_cols; ++i) {
            try {
                std::size_t pos = 0;
                row[i] = std::stod(fields[i + 1], &pos);
                if (pos != fields[i + 1].size()) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                throw row_error(path, line_no, "unparsable value '" + fields[i + 1] +
                                                   "' in column " + expected_columns[i]);
            }
        }
        frame.year.push_back(y);
        frame.month.push_back(m);
        frame.day.push_back(d);
        frame.weekday.push_back(weekday_of(y, m, d));
        frame.readings.push_back(std::move(row));
        if (has_demand) {
            try {
                frame.demand.push_back(std::stod(fields.back()));
            } catch (const std::exception&) {
                throw row_error(path, line_no, "unparsable demand '" + fields.back() + "'");
            }
        }
    }
    return frame;
}

StateSpace fit_bins(const WeatherFrame& frame, const std::vector<int>& counts,
                    int day_type_count) {
    if (counts.size() != frame.columns.size())
        throw std::invalid_argument("fit_bins: need one bin count per column");
    if (frame.rows() == 0) throw std::invalid_argument("fit_bins: empty frame");
    std::vector<Phenomenon> phenomena;
    for (std::size_t c = 0; c < counts.size(); ++c) {
        int k = counts[c];
        if (k < 2) throw std::invalid_argument("fit_bins: bin counts must be >= 2");
        std::vector<double> values;
        values.reserve(frame.rows());
        for (const auto& row : frame.readings) values.push_back(row[c]);
        std::sort(values.begin(), values.end());
        std::vector<double> edges;
        for (int i = 1; i < k; ++i) {
            // type-7 empirical quantile at i/k
            double h = static_cast<double>(i) / k * (static_cast<double>(values.size()) - 1.0);
            std::size_t lo = static_cast<std::size_t>(std::floor(h));
            double frac = h - static_cast<double>(lo);
            double q = values[lo];
            if (lo + 1 < values.size()) q += frac * (values[lo + 1] - values[lo]);
            edges.push_back(q);
        }
        bool degenerate = values.front() == values.back();
        for (std::size_t i = 1; i < edges.size(); ++i)
            if (!(edges[i - 1] < edges[i])) degenerate = true;
        if (degenerate)
            throw std::invalid_argument("fit_bins: column " + frame.columns[c] +
                                        " has too few distinct values for " +
                                        std::to_string(k) + " bins");
        std::string name = frame.columns[c], unit;
        auto pos = name.rfind('_');
        if (pos != std::string::npos) {
            unit = name.substr(pos + 1);
            name = name.substr(0, pos);
        }
        phenomena.push_back(Phenomenon{name, unit, std::move(edges)});
    }
    return StateSpace(std::move(phenomena), day_type_count);
}

std::vector<std::size_t> discretize_frame(const WeatherFrame& frame, const StateSpace& space) {
    if (space.phenomena().size() != frame.columns.size())
        throw std::invalid_argument("discretize_frame: column count mismatch");
    std::vector<std::size_t> states;
    states.reserve(frame.rows());
    for (std::size_t r = 0; r < frame.rows(); ++r) {
        int day_type = 0;
        if (space.day_type_count() == 2) day_type = frame.weekday[r] >= 5 ? 1 : 0;
        states.push_back(space.discretize(frame.readings[r], day_type));
    }
    return states;
}

std::vector<int> distinct_years(const WeatherFrame& frame) {
    std::set<int> years(frame.year.begin(), frame.year.end());
    return {years.begin(), years.end()};
}

WeatherFrame filter_years(const WeatherFrame& frame, const std::vector<int>& years) {
    std::set<int> keep(years.begin(), years.end());
    WeatherFrame out;
    out.columns = frame.columns;
    out.has_demand = frame.has_demand;
    for (std::size_t r = 0; r < frame.rows(); ++r) {
        if (!keep.count(frame.year[r])) continue;
        out.year.push_back(frame.year[r]);
        out.month.push_back(frame.month[r]);
        out.day.push_back(frame.day[r]);
        out.weekday.push_back(frame.weekday[r]);
        out.readings.push_back(frame.readings[r]);
        if (frame.has_demand) out.demand.push_back(frame.demand[r]);
    }
    return out;
}

std::vector<WeatherFrame> by_year(const WeatherFrame& frame) {
    std::vector<WeatherFrame> out;
    for (int y : distinct_years(frame)) out.push_back(filter_years(frame, {y}));
    return out;
}

DemandModel fit_demand(const WeatherFrame& frame, const StateSpace& space) {
    if (!frame.has_demand) throw std::invalid_argument("fit_demand: frame has no demand column");
    auto states = discretize_frame(frame, space);
    Eigen::Index p = demand_features(space, 0).size();
    if (static_cast<Eigen::Index>(frame.rows()) < p)
        throw std::invalid_argument("fit_demand: fewer rows than features");
    Eigen::MatrixXd X(static_cast<Eigen::Index>(frame.rows()), p);
    Eigen::VectorXd yv(static_cast<Eigen::Index>(frame.rows()));
    for (std::size_t r = 0; r < frame.rows(); ++r) {
        X.row(static_cast<Eigen::Index>(r)) = demand_features(space, states[r]).transpose();
        yv(static_cast<Eigen::Index>(r)) = frame.demand[r];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    if (qr.rank() < p)
        throw std::invalid_argument(
            "fit_demand: rank-deficient design matrix; reduce the number of bins");
    DemandModel model;
    model.coef = qr.solve(yv);
    return model;
}

double demand_rmse(const WeatherFrame& frame, const StateSpace& space, const DemandModel& model) {
    if (!frame.has_demand) throw std::invalid_argument("demand_rmse: frame has no demand column");
    auto states = discretize_frame(frame, space);
    double ss = 0.0;
    for (std::size_t r = 0; r < frame.rows(); ++r) {
        double e = frame.demand[r] - model.predict(space, states[r]);
        ss += e * e;
    }
    return std::sqrt(ss / static_cast<double>(frame.rows()));
}

namespace {

WeatherFrame take_rows(const WeatherFrame& frame, const std::vector<std::size_t>& rows) {
    WeatherFrame out;
    out.columns = frame.columns;
    out.has_demand = frame.has_demand;
    for (std::size_t r : rows) {
        out.year.push_back(frame.year[r]);
        out.month.push_back(frame.month[r]);
        out.day.push_back(frame.day[r]);
        out.weekday.push_back(frame.weekday[r]);
        out.readings.push_back(frame.readings[r]);
        if (frame.has_demand) out.demand.push_back(frame.demand[r]);
    }
    return out;
}

}  // namespace

double cv_rmse(const WeatherFrame& frame, const std::vector<int>& counts, int day_type_count,
               int k) {
    std::size_t n = frame.rows();
    if (n < 2) throw std::invalid_argument("cv_rmse: need at least two rows");
    std::size_t folds = k <= 0 ? n : static_cast<std::size_t>(k);
    folds = std::min(folds, n);
    double ss = 0.0;
    std::size_t count = 0;
    for (std::size_t f = 0; f < folds; ++f) {
        std::vector<std::size_t> train, test;
        for (std::size_t r = 0; r < n; ++r)
            (r % folds == f ? test : train).push_back(r);
        if (train.empty() || test.empty()) continue;
        WeatherFrame train_frame = take_rows(frame, train);
        StateSpace space = fit_bins(train_frame, counts, day_type_count);
        DemandModel model = fit_demand(train_frame, space);
        WeatherFrame test_frame = take_rows(frame, test);
        auto states = discretize_frame(test_frame, space);
        for (std::size_t r = 0; r < test_frame.rows(); ++r) {
            double e = test_frame.demand[r] - model.predict(space, states[r]);
            ss += e * e;
            ++count;
        }
    }
    return std::sqrt(ss / static_cast<double>(count));
}

}  // namespace psps
