#pragma once

#include "psps/cpp_sched.hpp"

#include <string>
#include <vector>

namespace psps {

/// Inclusive month/day season window, e.g. {6,1,9,30} for June-September.
struct SeasonWindow {
    int start_month = 1;
    int start_day = 1;
    int end_month = 12;
    int end_day = 31;

    bool contains(int month, int day) const;
};

/// Daily rows of dated readings, one column per phenomenon, with an
/// optional demand column. Column names carry their unit suffix
/// (temp_c, wind_kmh, ...), which is how unit declarations are checked.
struct WeatherFrame {
    std::vector<std::string> columns;
    std::vector<int> year, month, day;
    std::vector<int> weekday;  // 0 = Monday .. 6 = Sunday
    std::vector<std::vector<double>> readings;  // [row][column]
    std::vector<double> demand;                 // empty when absent
    bool has_demand = false;

    std::size_t rows() const { return year.size(); }
};

/// Serial day number of a proleptic-Gregorian civil date (days since
/// 1970-01-01).
long days_from_civil(int y, int m, int d);
/// 0 = Monday .. 6 = Sunday.
int weekday_of(int y, int m, int d);

/// Parse `date,<columns...>[,demand_mw]`. The header must list exactly the
/// expected columns (same names, same order); dates must be strictly
/// increasing and contiguous inside each year's season window. A single-day
/// gap is filled by carrying the previous row forward when allowed,
/// otherwise any gap or duplicate is an error naming the offending row.
WeatherFrame load_csv(const std::string& path, const std::vector<std::string>& expected_columns,
                      const SeasonWindow& season, bool carry_forward = false);

/// Quantile bin edges per phenomenon (counts[i] bins for column i) plus an
/// optional weekday/weekend day-type factor.
StateSpace fit_bins(const WeatherFrame& frame, const std::vector<int>& counts,
                    int day_type_count = 1);

/// Joint state per row; a two-level day type maps weekdays to 0, weekends
/// to 1.
std::vector<std::size_t> discretize_frame(const WeatherFrame& frame, const StateSpace& space);

std::vector<int> distinct_years(const WeatherFrame& frame);
WeatherFrame filter_years(const WeatherFrame& frame, const std::vector<int>& years);
/// Rows grouped per calendar year, in ascending year order.
std::vector<WeatherFrame> by_year(const WeatherFrame& frame);

/// Ordinary least squares of demand on the state features.
DemandModel fit_demand(const WeatherFrame& frame, const StateSpace& space);

/// Root-mean-square prediction error on the frame.
double demand_rmse(const WeatherFrame& frame, const StateSpace& space, const DemandModel& model);

/// k-fold cross-validated RMSE for a candidate discretization; folds are
/// row-index mod k. k <= 0 selects leave-one-out.
double cv_rmse(const WeatherFrame& frame, const std::vector<int>& counts, int day_type_count,
               int k);

}  // namespace psps
