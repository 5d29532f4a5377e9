#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "psps/ingest.hpp"
#include "test_support.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace psps;

namespace {

struct TempCsv {
    std::filesystem::path path;
    explicit TempCsv(const std::string& text) {
        static int counter = 0;
        path = std::filesystem::temp_directory_path() /
               ("ingest_test_" + std::to_string(counter++) + ".csv");
        std::ofstream out(path);
        out << text;
    }
    ~TempCsv() { std::filesystem::remove(path); }
};

const SeasonWindow kSummer{6, 1, 9, 30};

}  // namespace

TEST_CASE("civil day arithmetic") {
    CHECK(days_from_civil(1970, 1, 1) == 0);
    CHECK(days_from_civil(1970, 1, 2) == 1);
    CHECK(days_from_civil(1969, 12, 31) == -1);
    CHECK(days_from_civil(2000, 3, 1) - days_from_civil(2000, 2, 28) == 2);  // leap year
    CHECK(days_from_civil(1900, 3, 1) - days_from_civil(1900, 2, 28) == 1);  // century rule
    CHECK(weekday_of(1970, 1, 1) == 3);   // Thursday
    CHECK(weekday_of(2024, 1, 1) == 0);   // Monday
    CHECK(weekday_of(2024, 1, 7) == 6);   // Sunday
}

TEST_CASE("season window with and without a year wrap") {
    CHECK(kSummer.contains(6, 1));
    CHECK(kSummer.contains(9, 30));
    CHECK_FALSE(kSummer.contains(5, 31));
    CHECK_FALSE(kSummer.contains(10, 1));
    SeasonWindow winter{12, 1, 3, 30};
    CHECK(winter.contains(12, 15));
    CHECK(winter.contains(1, 10));
    CHECK(winter.contains(3, 30));
    CHECK_FALSE(winter.contains(3, 31));
    CHECK_FALSE(winter.contains(7, 1));
}

TEST_CASE("csv loading keeps only season rows and parses demand") {
    TempCsv csv(
        "date,temp_c,wind_kmh,demand_mw\n"
        "2020-05-31,10,20,900\n"
        "2020-06-01,11,21,901\n"
        "2020-06-02,12,22,902\n"
        "2020-10-01,13,23,903\n");
    WeatherFrame f = load_csv(csv.path.string(), {"temp_c", "wind_kmh"}, kSummer);
    REQUIRE(f.rows() == 2);
    CHECK(f.has_demand);
    CHECK(f.columns == std::vector<std::string>{"temp_c", "wind_kmh"});
    CHECK(f.readings[0] == std::vector<double>{11.0, 21.0});
    CHECK(f.demand == std::vector<double>{901.0, 902.0});
    CHECK(f.weekday[0] == weekday_of(2020, 6, 1));
}

TEST_CASE("csv header and row validation") {
    TempCsv wrong_first("day,temp_c\n");
    CHECK_THROWS_WITH_AS(load_csv(wrong_first.path.string(), {"temp_c"}, kSummer),
                         doctest::Contains("first column must be 'date'"), std::runtime_error);
    TempCsv wrong_unit("date,temp_f\n2020-06-01,50\n");
    CHECK_THROWS_WITH_AS(load_csv(wrong_unit.path.string(), {"temp_c"}, kSummer),
                         doctest::Contains("name and unit must agree"), std::runtime_error);
    TempCsv bad_value("date,temp_c\n2020-06-01,warm\n");
    CHECK_THROWS_WITH_AS(load_csv(bad_value.path.string(), {"temp_c"}, kSummer),
                         doctest::Contains(":2:"), std::runtime_error);
    TempCsv bad_date("date,temp_c\n2020-13-01,5\n");
    CHECK_THROWS(load_csv(bad_date.path.string(), {"temp_c"}, kSummer));
    TempCsv short_row("date,temp_c,wind_kmh\n2020-06-01,5\n");
    CHECK_THROWS(load_csv(short_row.path.string(), {"temp_c", "wind_kmh"}, kSummer));
    CHECK_THROWS(load_csv("/nonexistent/file.csv", {"temp_c"}, kSummer));
}

TEST_CASE("date ordering and gap handling") {
    TempCsv dup("date,temp_c\n2020-06-01,5\n2020-06-01,6\n");
    CHECK_THROWS_WITH_AS(load_csv(dup.path.string(), {"temp_c"}, kSummer),
                         doctest::Contains("duplicate date"), std::runtime_error);
    TempCsv reorder("date,temp_c\n2020-06-02,5\n2020-06-01,6\n");
    CHECK_THROWS_WITH_AS(load_csv(reorder.path.string(), {"temp_c"}, kSummer),
                         doctest::Contains("out of order"), std::runtime_error);
    TempCsv gap("date,temp_c\n2020-06-01,5\n2020-06-03,6\n");
    CHECK_THROWS_WITH_AS(load_csv(gap.path.string(), {"temp_c"}, kSummer),
                         doctest::Contains("gap of 1 day(s)"), std::runtime_error);

    WeatherFrame filled = load_csv(gap.path.string(), {"temp_c"}, kSummer, true);
    REQUIRE(filled.rows() == 3);  // missing day carried forward
    CHECK(filled.day == std::vector<int>{1, 2, 3});
    CHECK(filled.readings[1] == std::vector<double>{5.0});

    TempCsv wide_gap("date,temp_c\n2020-06-01,5\n2020-06-04,6\n");
    CHECK_THROWS(load_csv(wide_gap.path.string(), {"temp_c"}, kSummer, true));

    // a jump to the next season is not a gap
    TempCsv seasons("date,temp_c\n2020-09-30,5\n2021-06-01,6\n");
    CHECK(load_csv(seasons.path.string(), {"temp_c"}, kSummer).rows() == 2);
}

TEST_CASE("quantile bins split the sample evenly") {
    TempCsv csv(
        "date,temp_c\n"
        "2020-06-01,1\n2020-06-02,2\n2020-06-03,3\n2020-06-04,4\n2020-06-05,5\n");
    WeatherFrame f = load_csv(csv.path.string(), {"temp_c"}, kSummer);
    StateSpace space = fit_bins(f, {2});
    REQUIRE(space.phenomena().size() == 1);
    CHECK(space.phenomena()[0].name == "temp");
    CHECK(space.phenomena()[0].unit == "c");
    REQUIRE(space.phenomena()[0].bin_edges.size() == 1);
    CHECK(space.phenomena()[0].bin_edges[0] == doctest::Approx(3.0));  // median

    CHECK_THROWS(fit_bins(f, {2, 2}));
    CHECK_THROWS(fit_bins(f, {1}));
    TempCsv flat("date,temp_c\n2020-06-01,7\n2020-06-02,7\n2020-06-03,7\n");
    WeatherFrame ff = load_csv(flat.path.string(), {"temp_c"}, kSummer);
    CHECK_THROWS_WITH_AS(fit_bins(ff, {2}), doctest::Contains("too few distinct values"),
                         std::invalid_argument);
}

TEST_CASE("frame discretization includes the day type") {
    // 2020-06-05 Fri, 06 Sat, 07 Sun, 08 Mon
    TempCsv csv(
        "date,temp_c\n"
        "2020-06-05,1\n2020-06-06,9\n2020-06-07,1\n2020-06-08,9\n");
    WeatherFrame f = load_csv(csv.path.string(), {"temp_c"}, kSummer);
    StateSpace space({{"temp", "c", {5.0}}}, 2);
    auto states = discretize_frame(f, space);
    std::vector<double> lo{1.0}, hi{9.0};
    std::vector<std::size_t> expect = {space.discretize(lo, 0), space.discretize(hi, 1),
                                       space.discretize(lo, 1), space.discretize(hi, 0)};
    CHECK(states == expect);
    StateSpace wrong({{"temp", "c", {5.0}}, {"wind", "kmh", {1.0}}}, 1);
    CHECK_THROWS(discretize_frame(f, wrong));
}

TEST_CASE("year bookkeeping") {
    TempCsv csv(
        "date,temp_c\n"
        "2019-06-01,1\n2019-06-02,2\n2021-06-01,3\n2020-06-01,4\n");
    // years arrive out of order across season boundaries: rejected
    CHECK_THROWS(load_csv(csv.path.string(), {"temp_c"}, kSummer));
    TempCsv ordered(
        "date,temp_c\n"
        "2019-06-01,1\n2019-06-02,2\n2020-06-01,3\n2021-06-01,4\n");
    WeatherFrame f = load_csv(ordered.path.string(), {"temp_c"}, kSummer);
    CHECK(distinct_years(f) == std::vector<int>{2019, 2020, 2021});
    WeatherFrame sub = filter_years(f, {2019, 2021});
    CHECK(sub.rows() == 3);
    auto split = by_year(f);
    REQUIRE(split.size() == 3);
    CHECK(split[0].rows() == 2);
    CHECK(split[2].readings[0] == std::vector<double>{4.0});
}

TEST_CASE("demand regression recovers a linear rule exactly") {
    // demand = 500 - 3 * temp + 40 * weekend, evaluated at bin representatives
    StateSpace space({{"temp", "c", {10.0, 20.0}}}, 2);
    std::ostringstream text;
    text << "date,temp_c,demand_mw\n";
    // Jun 2020: day 1 is a Monday; two weeks cover all bins on both day types
    std::vector<double> temps = {5, 15, 25, 5, 15, 25, 5, 15, 25, 5, 15, 25, 5, 15};
    for (std::size_t i = 0; i < temps.size(); ++i) {
        int day = static_cast<int>(i) + 1;
        int wd = weekday_of(2020, 6, day);
        int bin = space.bin_of(0, temps[i]);
        double rep = space.representative(0, bin);
        double demand = 500.0 - 3.0 * rep + 40.0 * (wd >= 5 ? 1 : 0);
        char buf[16];
        std::snprintf(buf, sizeof buf, "%02d", day);
        text << "2020-06-" << buf << ',' << temps[i] << ',' << demand << '\n';
    }
    TempCsv csv(text.str());
    WeatherFrame f = load_csv(csv.path.string(), {"temp_c"}, kSummer);
    DemandModel model = fit_demand(f, space);
    REQUIRE(model.coef.size() == 3);
    CHECK(model.coef(0) == doctest::Approx(500.0));
    CHECK(model.coef(1) == doctest::Approx(-3.0));
    CHECK(model.coef(2) == doctest::Approx(40.0));
    CHECK(demand_rmse(f, space, model) < 1e-9);

    double cv = cv_rmse(f, {2}, 2, 2);
    CHECK(std::isfinite(cv));

    WeatherFrame no_demand = load_csv(csv.path.string(), {"temp_c"}, kSummer);
    no_demand.has_demand = false;
    CHECK_THROWS(fit_demand(no_demand, space));
}
