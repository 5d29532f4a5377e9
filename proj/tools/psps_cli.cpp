// Command-line front end: fit artifacts from CSVs, solve policy tables,
// evaluate single-day advice, and run simulation reports.

#include "psps/baselines_sim.hpp"
#include "psps/fixture.hpp"
#include "psps/ingest.hpp"
#include "psps/oracles.hpp"
#include "psps/scenario3.hpp"
#include "psps/table_io.hpp"

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitInfeasible = 4;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

std::vector<int> split_ints(const std::string& s) {
    std::vector<int> out;
    for (const auto& item : split_list(s)) out.push_back(std::stoi(item));
    return out;
}

std::vector<double> split_doubles(const std::string& s) {
    std::vector<double> out;
    for (const auto& item : split_list(s)) out.push_back(std::stod(item));
    return out;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw std::runtime_error(path + ": malformed JSON");
    return j;
}

void write_json_file(const std::string& path, const ordered_json& j) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << j.dump(2) << '\n';
}

psps::SeasonWindow parse_season(const std::string& s) {
    auto parts = split_ints(s);
    if (parts.size() != 4)
        throw UsageError("--season expects start_month,start_day,end_month,end_day");
    return psps::SeasonWindow{parts[0], parts[1], parts[2], parts[3]};
}

/// Rule JSON: {"column_name": {"at_least": v} | {"at_most": v}, ...};
/// columns absent from the object pass through.
psps::RiskRule parse_rule(const json& j, const psps::StateSpace& space) {
    psps::RiskRule rule;
    std::size_t matched = 0;
    for (const auto& p : space.phenomena()) {
        std::string column = p.unit.empty() ? p.name : p.name + "_" + p.unit;
        psps::RiskRule::Term term;
        if (j.contains(column)) {
            const json& t = j.at(column);
            if (t.contains("at_least")) {
                term = {psps::RiskDirection::AtLeast, t.at("at_least").get<double>()};
            } else if (t.contains("at_most")) {
                term = {psps::RiskDirection::AtMost, t.at("at_most").get<double>()};
            } else {
                throw std::runtime_error("risk rule for " + column +
                                         " needs at_least or at_most");
            }
            ++matched;
        }
        rule.terms.push_back(term);
    }
    for (const auto& [key, value] : j.items()) {
        (void)value;
        bool known = false;
        for (const auto& p : space.phenomena())
            if (key == (p.unit.empty() ? p.name : p.name + "_" + p.unit)) known = true;
        if (!known) throw std::runtime_error("risk rule names unknown column " + key);
    }
    if (matched == 0) throw std::runtime_error("risk rule matches no column");
    return rule;
}

struct FitArgs {
    std::string data, columns, bins, out, season = "6,1,9,30", train_years;
    int day_types = 1;
    double smoothing = 0.0;
    bool carry_forward = false;
    bool with_demand = false;
    int cv_folds = 0;  // 0: skip CV reporting
};

int cmd_fit(const FitArgs& args) {
    auto columns = split_list(args.columns);
    auto counts = split_ints(args.bins);
    if (columns.empty() || counts.size() != columns.size())
        throw UsageError("--bins must list one bin count per column");
    psps::SeasonWindow season = parse_season(args.season);
    psps::WeatherFrame frame =
        psps::load_csv(args.data, columns, season, args.carry_forward);
    if (!args.train_years.empty())
        frame = psps::filter_years(frame, split_ints(args.train_years));
    if (frame.rows() == 0) throw std::runtime_error("no rows left after the year filter");

    psps::StateSpace space = psps::fit_bins(frame, counts, args.day_types);
    std::vector<std::size_t> states = psps::discretize_frame(frame, space);
    std::vector<std::vector<std::size_t>> paths;
    for (const auto& year : psps::by_year(frame))
        paths.push_back(psps::discretize_frame(year, space));
    psps::TransitionModel model =
        psps::estimate_transitions(paths, space.cardinality(), args.smoothing);

    fs::create_directories(args.out);
    write_json_file((fs::path(args.out) / "state_space.json").string(),
                    psps::state_space_to_json(space));
    psps::save_transitions((fs::path(args.out) / "transitions.bin").string(), model);

    ordered_json summary;
    summary["rows"] = frame.rows();
    summary["years"] = psps::distinct_years(frame);
    summary["states"] = space.cardinality();
    if (args.with_demand) {
        if (!frame.has_demand) throw std::runtime_error(args.data + ": no demand_mw column");
        psps::DemandModel demand = psps::fit_demand(frame, space);
        ordered_json dj;
        dj["coef"] = std::vector<double>(demand.coef.data(),
                                         demand.coef.data() + demand.coef.size());
        dj["rmse"] = psps::demand_rmse(frame, space, demand);
        write_json_file((fs::path(args.out) / "demand_model.json").string(), dj);
        summary["demand_rmse"] = dj["rmse"];
        if (args.cv_folds != 0)
            summary["cv_rmse"] =
                psps::cv_rmse(frame, counts, args.day_types, args.cv_folds);
    }
    write_json_file((fs::path(args.out) / "fit_summary.json").string(), summary);
    std::cout << summary.dump(2) << '\n';
    return 0;
}

psps::StateSpace load_space(const std::string& model_dir) {
    return psps::state_space_from_json(
        load_json_file((fs::path(model_dir) / "state_space.json").string()));
}

psps::DemandModel load_demand(const std::string& model_dir) {
    json j = load_json_file((fs::path(model_dir) / "demand_model.json").string());
    auto coef = j.at("coef").get<std::vector<double>>();
    psps::DemandModel demand;
    demand.coef = Eigen::Map<const Eigen::VectorXd>(coef.data(),
                                                    static_cast<Eigen::Index>(coef.size()));
    return demand;
}

struct SolveArgs {
    std::string scenario, model, costs, rule, out;
    int horizon = 0;
    int budget = -1;
    double alpha_bar = -1.0;
    double alpha_step = 0.0;
    std::string cpp_config;
};

ordered_json threshold_summary(const psps::PolicyTableS1& table) {
    ordered_json days = ordered_json::array();
    for (int d = table.horizon(); d >= 1; --d) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (std::size_t x = 0; x < table.n_states(); ++x) {
            double th = psps::threshold_s1(table, d, table.budget(), 0, x);
            lo = std::min(lo, th);
            hi = std::max(hi, th);
        }
        days.push_back({{"day", table.horizon() - d + 1}, {"min", lo}, {"max", hi}});
    }
    return days;
}

int cmd_solve(const SolveArgs& args) {
    if (args.horizon < 1) throw UsageError("--horizon must be >= 1");
    fs::create_directories(args.out);
    psps::StateSpace space = load_space(args.model);
    psps::TransitionModel model =
        psps::load_transitions((fs::path(args.model) / "transitions.bin").string());
    if (model.size() != space.cardinality())
        throw std::runtime_error("state space and transition artifacts disagree on size");

    ordered_json summary;
    summary["scenario"] = args.scenario;
    summary["horizon"] = args.horizon;
    summary["states"] = space.cardinality();

    if (args.scenario == "cpp") {
        if (args.cpp_config.empty()) throw UsageError("cpp needs --cpp-config");
        json cfg = load_json_file(args.cpp_config);
        psps::QuadCost quad = psps::QuadCost::uniform(args.horizon, cfg.at("B").get<double>(),
                                                      cfg.at("C").get<double>(),
                                                      cfg.at("D").get<double>());
        psps::CppParams params = psps::CppParams::uniform(
            args.horizon, cfg.at("budget").get<int>(), cfg.at("y").get<double>(),
            cfg.at("abar").get<double>());
        psps::DemandModel demand = load_demand(args.model);
        psps::PolicyTableCpp table =
            psps::build_cpp(args.horizon, params, quad, demand, space, model);
        psps::save_table((fs::path(args.out) / "table_cpp.bin").string(), table);
        summary["budget"] = params.budget;
        summary["dims"] = {args.horizon + 1, params.budget + 1, space.cardinality()};
        write_json_file((fs::path(args.out) / "solve_summary.json").string(), summary);
        std::cout << summary.dump(2) << '\n';
        return 0;
    }

    if (args.costs.empty()) throw UsageError(args.scenario + " needs --costs");
    if (args.rule.empty()) throw UsageError(args.scenario + " needs --rule");
    psps::CostSchedule costs = load_json_file(args.costs).get<psps::CostSchedule>();
    if (costs.horizon != args.horizon)
        throw std::runtime_error("cost schedule horizon differs from --horizon");
    psps::RiskRule rule = parse_rule(load_json_file(args.rule), space);
    Eigen::VectorXd risk = psps::risk_vector(space, rule);

    if (args.scenario == "s1") {
        if (args.budget < 0) throw UsageError("s1 needs --budget");
        psps::PolicyTableS1 table = psps::build_s1(args.horizon, args.budget, costs, model, risk);
        psps::save_table((fs::path(args.out) / "table_s1.bin").string(), table);
        summary["budget"] = args.budget;
        summary["dims"] = {args.horizon + 1, args.budget + 1, 2, space.cardinality()};
        summary["thresholds"] = threshold_summary(table);
    } else if (args.scenario == "s2") {
        psps::PolicyTableS2 table = psps::build_s2(args.horizon, costs, model, risk);
        psps::save_table((fs::path(args.out) / "table_s2.bin").string(), table);
        summary["lambda"] = costs.lambda;
        summary["dims"] = {args.horizon + 1, 2, space.cardinality()};
    } else if (args.scenario == "s3") {
        if (args.alpha_bar < 0.0) throw UsageError("s3 needs --alpha-bar");
        double step = args.alpha_step > 0.0 ? args.alpha_step : args.alpha_bar / 200.0;
        psps::AlphaGrid grid{0.0, args.alpha_bar, step};
        psps::ValueTensor tensor =
            psps::build_value(args.horizon, args.alpha_bar, grid, costs, model, risk);
        ordered_json per_state = ordered_json::array();
        bool any_feasible = false;
        for (std::size_t x = 0; x < space.cardinality(); ++x) {
            bool ok = tensor.feasible(x);
            any_feasible = any_feasible || ok;
            per_state.push_back({{"state", x},
                                 {"feasible", ok},
                                 {"expected_events",
                                  ok ? json(tensor.value_at(args.horizon, x, args.alpha_bar))
                                     : json()},
                                 {"min_budget", tensor.b(args.horizon, x)}});
        }
        summary["alpha_bar"] = args.alpha_bar;
        summary["grid_step"] = step;
        summary["states_detail"] = std::move(per_state);
        if (!any_feasible) {
            write_json_file((fs::path(args.out) / "solve_summary.json").string(), summary);
            throw InfeasibleError("no state can meet the cost budget " +
                                  std::to_string(args.alpha_bar));
        }
    } else {
        throw UsageError("unknown scenario " + args.scenario);
    }
    write_json_file((fs::path(args.out) / "solve_summary.json").string(), summary);
    std::cout << summary.dump(2) << '\n';
    return 0;
}

struct AdviseArgs {
    std::string table, model, obs;
    int day = 0, prev_u = 0, budget_left = -1, day_type = 0;
};

int cmd_advise(const AdviseArgs& args) {
    psps::StateSpace space = load_space(args.model);
    auto raw = split_doubles(args.obs);
    std::size_t x = space.discretize(raw, args.day_type);
    std::string kind = psps::artifact_kind(args.table);
    ordered_json out;
    out["day"] = args.day;
    out["state"] = x;

    if (kind == "s1") {
        psps::PolicyTableS1 table = psps::load_table_s1(args.table);
        if (args.day < 1 || args.day > table.horizon()) throw UsageError("--day out of range");
        if (args.budget_left < 0 || args.budget_left > table.budget())
            throw UsageError("--budget-left out of range");
        int d = table.horizon() - args.day + 1;
        out["wrp"] = table.wrp()(static_cast<Eigen::Index>(x));
        out["threshold"] = psps::threshold_s1(table, d, args.budget_left, args.prev_u, x);
        out["decision"] = psps::decide_s1(table, d, args.budget_left, args.prev_u, x);
        if (args.budget_left == 0) out["reason"] = "budget depleted";
    } else if (kind == "s2") {
        psps::PolicyTableS2 table = psps::load_table_s2(args.table);
        if (args.day < 1 || args.day > table.horizon()) throw UsageError("--day out of range");
        int d = table.horizon() - args.day + 1;
        out["wrp"] = table.wrp()(static_cast<Eigen::Index>(x));
        out["threshold"] = psps::threshold_s2(table, d, args.prev_u, x);
        out["decision"] = psps::decide_s2(table, d, args.prev_u, x);
    } else if (kind == "cpp") {
        psps::PolicyTableCpp table = psps::load_table_cpp(args.table);
        if (args.day < 1 || args.day > table.horizon()) throw UsageError("--day out of range");
        if (args.budget_left < 0 || args.budget_left > table.budget())
            throw UsageError("--budget-left out of range");
        int d = table.horizon() - args.day + 1;
        out["expected_demand"] = table.mean_next_demand()(static_cast<Eigen::Index>(x));
        out["threshold"] = psps::threshold_cpp(table, d, args.budget_left, x);
        out["decision"] = psps::decide_cpp(table, d, args.budget_left, x);
        if (args.budget_left == 0) out["reason"] = "budget depleted";
    } else {
        throw std::runtime_error(args.table + ": not a policy table artifact");
    }
    std::cout << out.dump(2) << '\n';
    return 0;
}

struct SimulateArgs {
    std::string model, table_s1, table_s2, rule, out, obs;
    int years = 100, day_type = 0;
    std::uint64_t seed = 7;
    int historical_n = 0;  // 0: use the s1 table's budget
};

int cmd_simulate(const SimulateArgs& args) {
    psps::StateSpace space = load_space(args.model);
    psps::TransitionModel model =
        psps::load_transitions((fs::path(args.model) / "transitions.bin").string());
    psps::PolicyTableS1 s1 = psps::load_table_s1(args.table_s1);
    Eigen::VectorXd risk = psps::risk_vector(space, parse_rule(load_json_file(args.rule), space));
    Eigen::VectorXd wrp = psps::wrp_vector(model, risk);
    std::size_t x0 = space.discretize(split_doubles(args.obs), args.day_type);
    const int T = s1.horizon();
    const int N = args.historical_n > 0 ? args.historical_n : s1.budget();

    // historical threshold from an independent block of training years
    auto train = psps::sample_years(model, x0, T, args.years,
                                    psps::mix_seed(args.seed, 0x9e3779b9ULL));
    std::vector<std::vector<double>> metrics;
    for (const auto& path : train) {
        std::vector<double> year;
        for (int t = 1; t <= T; ++t)
            year.push_back(wrp(static_cast<Eigen::Index>(path[static_cast<std::size_t>(t)])));
        metrics.push_back(std::move(year));
    }
    double hist = psps::historical_threshold(metrics, N);

    std::optional<psps::PolicyTableS2> s2;
    if (!args.table_s2.empty()) s2 = psps::load_table_s2(args.table_s2);
    std::vector<psps::PolicySpec> specs;
    specs.push_back({"p1", psps::policy_from_s1(s1), s1.budget()});
    if (s2) specs.push_back({"p2", psps::policy_from_s2(*s2), -1});
    specs.push_back({"historical", psps::threshold_policy(wrp, hist), -1});

    auto summaries =
        psps::monte_carlo(model, risk, s1.costs(), x0, T, args.years, args.seed, specs);

    fs::create_directories(args.out);
    ordered_json out;
    out["years"] = args.years;
    out["seed"] = args.seed;
    out["historical_threshold"] = hist;
    out["policies"] = ordered_json::array();
    for (const auto& s : summaries)
        out["policies"].push_back({{"name", s.name},
                                   {"mean_count", s.mean_count},
                                   {"std_count", s.std_count},
                                   {"mean_expected_cost", s.mean_expected_cost},
                                   {"std_expected_cost", s.std_expected_cost}});
    write_json_file((fs::path(args.out) / "summary.json").string(), out);

    // per-day trace of the first simulated year under the table policy
    auto first = psps::sample_years(model, x0, T, 1, args.seed).front();
    psps::EpisodeResult ep =
        psps::run_policy(first, s1.costs(), model, risk, s1.budget(), psps::policy_from_s1(s1));
    std::ofstream trace((fs::path(args.out) / "trace_p1.csv").string(), std::ios::trunc);
    psps::write_trace(trace, ep);
    std::cout << out.dump(2) << '\n';
    return 0;
}

struct ReportArgs {
    std::string model, table_s1, table_s2, rule, data, columns, out;
    std::string season = "6,1,9,30", test_years, train_years;
    bool carry_forward = false;
};

int cmd_report(const ReportArgs& args) {
    psps::StateSpace space = load_space(args.model);
    psps::TransitionModel model =
        psps::load_transitions((fs::path(args.model) / "transitions.bin").string());
    psps::PolicyTableS1 s1 = psps::load_table_s1(args.table_s1);
    Eigen::VectorXd risk = psps::risk_vector(space, parse_rule(load_json_file(args.rule), space));
    Eigen::VectorXd wrp = psps::wrp_vector(model, risk);

    psps::WeatherFrame frame = psps::load_csv(args.data, split_list(args.columns),
                                              parse_season(args.season), args.carry_forward);
    if (args.test_years.empty()) throw UsageError("report needs --test-years");
    auto test = psps::filter_years(frame, split_ints(args.test_years));
    if (test.rows() == 0) throw std::runtime_error("no rows in the requested test years");

    double hist = 0.0;
    {
        psps::WeatherFrame train = args.train_years.empty()
                                       ? frame
                                       : psps::filter_years(frame, split_ints(args.train_years));
        std::vector<std::vector<double>> metrics;
        for (const auto& year : psps::by_year(train)) {
            std::vector<double> m;
            for (std::size_t x : psps::discretize_frame(year, space))
                m.push_back(wrp(static_cast<Eigen::Index>(x)));
            metrics.push_back(std::move(m));
        }
        hist = psps::historical_threshold(metrics, s1.budget());
    }

    std::optional<psps::PolicyTableS2> s2;
    if (!args.table_s2.empty()) s2 = psps::load_table_s2(args.table_s2);

    ordered_json rows = ordered_json::array();
    for (const auto& year : psps::by_year(test)) {
        auto states = psps::discretize_frame(year, space);
        if (states.size() < 3) continue;
        const int T = static_cast<int>(states.size()) - 2;
        psps::CostSchedule costs = psps::CostSchedule::uniform(
            T, s1.costs().A(1), s1.costs().a(1), s1.costs().s1(1), s1.costs().s2(1),
            s1.costs().gamma, s1.costs().lambda);
        // align the season end: day t of this year uses the table layer with
        // the same number of days remaining, clamped to the table's horizon
        auto adapt_s1 = [&](int t, int k, int u_prev, std::size_t x) {
            int d = std::min(T - t + 1, s1.horizon());
            return psps::PolicyDecision{psps::decide_s1(s1, d, k, u_prev, x),
                                        psps::threshold_s1(s1, d, k, u_prev, x)};
        };
        auto adapt_s2 = [&](int t, int, int u_prev, std::size_t x) {
            int d = std::min(T - t + 1, s2->horizon());
            return psps::PolicyDecision{psps::decide_s2(*s2, d, u_prev, x),
                                        psps::threshold_s2(*s2, d, u_prev, x)};
        };
        std::vector<std::pair<std::string, psps::PolicySpec>> entries;
        entries.emplace_back("p1", psps::PolicySpec{"p1", adapt_s1, s1.budget()});
        if (s2) entries.emplace_back("p2", psps::PolicySpec{"p2", adapt_s2, -1});
        entries.emplace_back("historical",
                             psps::PolicySpec{"historical", psps::threshold_policy(wrp, hist), -1});
        for (const auto& [name, spec] : entries) {
            psps::EpisodeResult ep =
                psps::run_policy(states, costs, model, risk, spec.budget, spec.policy);
            rows.push_back({{"year", year.year.front()},
                            {"policy", name},
                            {"events", ep.count},
                            {"expected_cost", ep.total_expected},
                            {"realized_cost", ep.total_realized}});
        }
    }
    ordered_json out;
    out["historical_threshold"] = hist;
    out["rows"] = std::move(rows);
    fs::create_directories(args.out);
    write_json_file((fs::path(args.out) / "report.json").string(), out);
    std::cout << out.dump(2) << '\n';
    return 0;
}

struct FixtureArgs {
    std::string out;
    int years = 20;
    std::uint64_t seed = 1;
};

int cmd_make_fixture(const FixtureArgs& args) {
    fs::create_directories(args.out);
    psps::write_psps_csv((fs::path(args.out) / "psps_weather.csv").string(), args.years,
                         args.seed);
    psps::write_cpp_csv((fs::path(args.out) / "cpp_demand.csv").string(), args.years,
                        args.seed);
    std::cout << "wrote " << args.out << "/psps_weather.csv and " << args.out
              << "/cpp_demand.csv\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"day-ahead shutoff and peak-pricing scheduling"};
    app.require_subcommand(1);

    FitArgs fit;
    auto* cfit = app.add_subcommand("fit", "fit discretization and transition artifacts");
    cfit->add_option("--data", fit.data, "daily CSV")->required();
    cfit->add_option("--columns", fit.columns, "comma-separated column names")->required();
    cfit->add_option("--bins", fit.bins, "comma-separated bin counts")->required();
    cfit->add_option("--out", fit.out, "output directory")->required();
    cfit->add_option("--season", fit.season, "start_month,start_day,end_month,end_day");
    cfit->add_option("--train-years", fit.train_years, "comma-separated years");
    cfit->add_option("--day-types", fit.day_types, "1 or 2 (weekday/weekend)");
    cfit->add_option("--smoothing", fit.smoothing, "transition pseudo-count");
    cfit->add_flag("--carry-forward", fit.carry_forward, "fill single-day gaps");
    cfit->add_flag("--demand", fit.with_demand, "fit the demand model too");
    cfit->add_option("--cv-folds", fit.cv_folds, "report k-fold demand CV RMSE (-1: LOO)");

    SolveArgs solve;
    auto* csolve = app.add_subcommand("solve", "build a policy table");
    csolve->add_option("--scenario", solve.scenario, "s1|s2|s3|cpp")->required();
    csolve->add_option("--model", solve.model, "fit output directory")->required();
    csolve->add_option("--out", solve.out, "output directory")->required();
    csolve->add_option("--horizon", solve.horizon, "days in the season")->required();
    csolve->add_option("--costs", solve.costs, "cost schedule JSON");
    csolve->add_option("--rule", solve.rule, "risk rule JSON");
    csolve->add_option("--budget", solve.budget, "event budget N");
    csolve->add_option("--alpha-bar", solve.alpha_bar, "expected-cost budget (s3)");
    csolve->add_option("--alpha-step", solve.alpha_step, "budget grid step (s3)");
    csolve->add_option("--cpp-config", solve.cpp_config, "B,C,D,budget,y,abar JSON");

    AdviseArgs advise;
    auto* cadvise = app.add_subcommand("advise", "single-day decision from a table");
    cadvise->add_option("--table", advise.table, "policy table artifact")->required();
    cadvise->add_option("--model", advise.model, "fit output directory")->required();
    cadvise->add_option("--day", advise.day, "calendar day 1..T")->required();
    cadvise->add_option("--obs", advise.obs, "comma-separated raw observations")->required();
    cadvise->add_option("--prev-u", advise.prev_u, "yesterday's decision");
    cadvise->add_option("--budget-left", advise.budget_left, "remaining events");
    cadvise->add_option("--day-type", advise.day_type, "day type index");

    SimulateArgs sim;
    auto* csim = app.add_subcommand("simulate", "seeded Monte-Carlo policy comparison");
    csim->add_option("--model", sim.model, "fit output directory")->required();
    csim->add_option("--table-s1", sim.table_s1, "budgeted policy table")->required();
    csim->add_option("--table-s2", sim.table_s2, "adjustment policy table");
    csim->add_option("--rule", sim.rule, "risk rule JSON")->required();
    csim->add_option("--obs", sim.obs, "start-state raw observations")->required();
    csim->add_option("--out", sim.out, "output directory")->required();
    csim->add_option("--years", sim.years, "simulated seasons");
    csim->add_option("--seed", sim.seed, "RNG seed");
    csim->add_option("--day-type", sim.day_type, "start day type");
    csim->add_option("--historical-n", sim.historical_n, "events/yr for the baseline");

    ReportArgs rep;
    auto* crep = app.add_subcommand("report", "per-year replay on held-out data");
    crep->add_option("--model", rep.model, "fit output directory")->required();
    crep->add_option("--table-s1", rep.table_s1, "budgeted policy table")->required();
    crep->add_option("--table-s2", rep.table_s2, "adjustment policy table");
    crep->add_option("--rule", rep.rule, "risk rule JSON")->required();
    crep->add_option("--data", rep.data, "daily CSV")->required();
    crep->add_option("--columns", rep.columns, "comma-separated column names")->required();
    crep->add_option("--test-years", rep.test_years, "held-out years")->required();
    crep->add_option("--train-years", rep.train_years, "baseline-threshold years");
    crep->add_option("--season", rep.season, "season window");
    crep->add_option("--out", rep.out, "output directory")->required();
    crep->add_flag("--carry-forward", rep.carry_forward, "fill single-day gaps");

    FixtureArgs fx;
    auto* cfx = app.add_subcommand("make-fixture", "write the synthetic example CSVs");
    cfx->add_option("--out", fx.out, "output directory")->required();
    cfx->add_option("--years", fx.years, "seasons per file");
    cfx->add_option("--seed", fx.seed, "RNG seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (cfit->parsed()) return cmd_fit(fit);
        if (csolve->parsed()) return cmd_solve(solve);
        if (cadvise->parsed()) return cmd_advise(advise);
        if (csim->parsed()) return cmd_simulate(sim);
        if (crep->parsed()) return cmd_report(rep);
        if (cfx->parsed()) return cmd_make_fixture(fx);
        std::cerr << "no subcommand given\n";
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
}
