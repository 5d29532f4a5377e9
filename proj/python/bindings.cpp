// Python module: thin, typed pass-through over the C++ library. Policies
// cross the boundary as callables, tables and models as opaque objects, and
// all bulk numerics as numpy arrays via Eigen.

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "psps/baselines_sim.hpp"
#include "psps/fixture.hpp"
#include "psps/ingest.hpp"
#include "psps/oracles.hpp"
#include "psps/scenario3.hpp"
#include "psps/table_io.hpp"

namespace py = pybind11;
using namespace psps;

PYBIND11_MODULE(_psps, m) {
    m.doc() = "Day-ahead power shutoff and critical-peak-pricing scheduling "
              "over discrete Markov weather models.";
    m.attr("__version__") = "0.1.0";

    // ---- state space and transition model

    py::class_<Phenomenon>(m, "Phenomenon")
        .def(py::init([](std::string name, std::string unit, std::vector<double> edges) {
                 return Phenomenon{std::move(name), std::move(unit), std::move(edges)};
             }),
             py::arg("name"), py::arg("unit"), py::arg("bin_edges"))
        .def_readwrite("name", &Phenomenon::name)
        .def_readwrite("unit", &Phenomenon::unit)
        .def_readwrite("bin_edges", &Phenomenon::bin_edges);

    py::class_<StateSpace>(m, "StateSpace")
        .def(py::init<std::vector<Phenomenon>, int>(), py::arg("phenomena"),
             py::arg("day_type_count") = 1)
        .def_property_readonly("phenomena", &StateSpace::phenomena)
        .def_property_readonly("day_type_count", &StateSpace::day_type_count)
        .def_property_readonly("cardinality", &StateSpace::cardinality)
        .def("bin_of", &StateSpace::bin_of, py::arg("phenomenon"), py::arg("value"))
        .def("discretize",
             [](const StateSpace& s, const std::vector<double>& raw, int day_type) {
                 return s.discretize(raw, day_type);
             },
             py::arg("raw"), py::arg("day_type") = 0)
        .def("factors_of", &StateSpace::factors_of, py::arg("state"))
        .def("representative", &StateSpace::representative, py::arg("phenomenon"),
             py::arg("bin"));

    py::class_<TransitionModel>(m, "TransitionModel")
        .def(py::init<Eigen::MatrixXd, double>(), py::arg("matrix"),
             py::arg("smoothing") = 0.0)
        .def_property_readonly("matrix", &TransitionModel::matrix)
        .def_property_readonly("size", &TransitionModel::size)
        .def_property_readonly("smoothing", &TransitionModel::smoothing)
        .def("apply",
             static_cast<Eigen::VectorXd (TransitionModel::*)(const Eigen::VectorXd&) const>(
                 &TransitionModel::apply),
             py::arg("v"));

    m.def("estimate_transitions", &estimate_transitions, py::arg("paths"),
          py::arg("n_states"), py::arg("smoothing"));
    m.def("n_step", &n_step, py::arg("model"), py::arg("n"));
    m.def("is_ergodic", &is_ergodic, py::arg("model"));
    m.def("stationary", &stationary, py::arg("model"), py::arg("tol") = 1e-12);
    m.def("sample_path", &sample_path, py::arg("model"), py::arg("x0"), py::arg("steps"),
          py::arg("seed"));
    m.def("mix_seed", &mix_seed, py::arg("seed"), py::arg("counter"));
    m.def("uniform_from", &uniform_from, py::arg("seed"), py::arg("counter"));

    // ---- risk rule and cost schedule

    py::enum_<RiskDirection>(m, "RiskDirection")
        .value("AT_LEAST", RiskDirection::AtLeast)
        .value("AT_MOST", RiskDirection::AtMost)
        .value("PASS_THROUGH", RiskDirection::PassThrough);

    py::class_<RiskRule::Term>(m, "RiskTerm")
        .def(py::init([](RiskDirection direction, double threshold) {
                 return RiskRule::Term{direction, threshold};
             }),
             py::arg("direction"), py::arg("threshold") = 0.0)
        .def_readwrite("direction", &RiskRule::Term::direction)
        .def_readwrite("threshold", &RiskRule::Term::threshold);

    py::class_<RiskRule>(m, "RiskRule")
        .def(py::init([](std::vector<RiskRule::Term> terms) {
                 RiskRule r;
                 r.terms = std::move(terms);
                 return r;
             }),
             py::arg("terms"))
        .def_readwrite("terms", &RiskRule::terms);

    py::class_<CostSchedule>(m, "CostSchedule")
        .def(py::init<>())
        .def_static("uniform", &CostSchedule::uniform, py::arg("T"), py::arg("A"),
                    py::arg("a"), py::arg("s1"), py::arg("s2"), py::arg("gamma") = 0.0,
                    py::arg("lambda_") = 0.0)
        .def_readwrite("horizon", &CostSchedule::horizon)
        .def_readwrite("currency", &CostSchedule::currency)
        .def_readwrite("wildfire", &CostSchedule::wildfire)
        .def_readwrite("revenue_loss", &CostSchedule::revenue_loss)
        .def_readwrite("deenergize", &CostSchedule::deenergize)
        .def_readwrite("reenergize", &CostSchedule::reenergize)
        .def_readwrite("gamma", &CostSchedule::gamma)
        .def_readwrite("lambda_", &CostSchedule::lambda)
        .def_readwrite("initial_investment", &CostSchedule::initial_investment)
        .def_readwrite("remaining_budget", &CostSchedule::remaining_budget)
        .def("validate", &CostSchedule::validate)
        .def("A", &CostSchedule::A, py::arg("day"))
        .def("a", &CostSchedule::a, py::arg("day"))
        .def("s1", &CostSchedule::s1, py::arg("day"))
        .def("s2", &CostSchedule::s2, py::arg("day"));

    m.def("risk_indicator", &risk_indicator, py::arg("space"), py::arg("rule"),
          py::arg("state"));
    m.def("risk_vector", &risk_vector, py::arg("space"), py::arg("rule"));
    m.def("wrp_vector", &wrp_vector, py::arg("model"), py::arg("risk"));
    m.def("switching_cost", &switching_cost, py::arg("u_prev"), py::arg("u"),
          py::arg("s1"), py::arg("s2"));

    // ---- shutoff policy tables

    py::class_<PolicyTableS1>(m, "PolicyTableS1")
        .def_property_readonly("horizon", &PolicyTableS1::horizon)
        .def_property_readonly("budget", &PolicyTableS1::budget)
        .def_property_readonly("n_states", &PolicyTableS1::n_states)
        .def_property_readonly("wrp", &PolicyTableS1::wrp)
        .def("g", &PolicyTableS1::g, py::arg("d"), py::arg("k"), py::arg("u"),
             py::arg("x"));
    m.def("build_s1", &build_s1, py::arg("T"), py::arg("N"), py::arg("costs"),
          py::arg("model"), py::arg("risk"));
    m.def("threshold_s1", &threshold_s1, py::arg("table"), py::arg("d"), py::arg("k"),
          py::arg("u_prev"), py::arg("x"));
    m.def("decide_s1", &decide_s1, py::arg("table"), py::arg("d"), py::arg("k"),
          py::arg("u_prev"), py::arg("x"));

    py::class_<PolicyTableS2>(m, "PolicyTableS2")
        .def_property_readonly("horizon", &PolicyTableS2::horizon)
        .def_property_readonly("n_states", &PolicyTableS2::n_states)
        .def_property_readonly("lambda_", &PolicyTableS2::lambda)
        .def_property_readonly("wrp", &PolicyTableS2::wrp)
        .def("h", &PolicyTableS2::h, py::arg("d"), py::arg("u"), py::arg("x"));
    m.def("build_s2", &build_s2, py::arg("T"), py::arg("costs"), py::arg("model"),
          py::arg("risk"));
    m.def("threshold_s2", &threshold_s2, py::arg("table"), py::arg("d"), py::arg("u_prev"),
          py::arg("x"));
    m.def("decide_s2", &decide_s2, py::arg("table"), py::arg("d"), py::arg("u_prev"),
          py::arg("x"));

    // ---- cost-budgeted event minimization

    py::class_<AlphaGrid>(m, "AlphaGrid")
        .def(py::init([](double lo, double hi, double step) {
                 AlphaGrid g{lo, hi, step};
                 g.validate();
                 return g;
             }),
             py::arg("lo"), py::arg("hi"), py::arg("step"))
        .def_readonly("lo", &AlphaGrid::lo)
        .def_readonly("hi", &AlphaGrid::hi)
        .def_readonly("step", &AlphaGrid::step)
        .def_property_readonly("size", &AlphaGrid::size)
        .def("value", &AlphaGrid::value, py::arg("i"))
        .def("floor_index", &AlphaGrid::floor_index, py::arg("alpha"));

    py::class_<ValueTensor>(m, "ValueTensor")
        .def_property_readonly("horizon", &ValueTensor::horizon)
        .def_property_readonly("alpha_bar", &ValueTensor::alpha_bar)
        .def_property_readonly("grid", &ValueTensor::grid)
        .def_property_readonly("vbar", &ValueTensor::vbar)
        .def_property_readonly("n_states", &ValueTensor::n_states)
        .def("V", &ValueTensor::V, py::arg("tau"), py::arg("x"), py::arg("alpha_idx"))
        .def("value_at", &ValueTensor::value_at, py::arg("tau"), py::arg("x"),
             py::arg("alpha"))
        .def("b", &ValueTensor::b, py::arg("tau"), py::arg("x"))
        .def("feasible", &ValueTensor::feasible, py::arg("x"));
    m.def("compute_b", &compute_b, py::arg("tau"), py::arg("x"), py::arg("costs"),
          py::arg("model"), py::arg("risk"));
    m.def("build_value", &build_value, py::arg("T"), py::arg("alpha_bar"), py::arg("grid"),
          py::arg("costs"), py::arg("model"), py::arg("risk"));

    py::class_<PolicyStepS3>(m, "PolicyStepS3")
        .def_readonly("u", &PolicyStepS3::u)
        .def_readonly("next_alpha", &PolicyStepS3::next_alpha);
    m.def("extract_policy", &extract_policy, py::arg("tensor"), py::arg("model"),
          py::arg("t"), py::arg("x"), py::arg("alpha"));

    py::class_<RolloutResult>(m, "RolloutResult")
        .def_readonly("expected_count", &RolloutResult::expected_count)
        .def_readonly("expected_cost", &RolloutResult::expected_cost);
    m.def("rollout_tree", &rollout_tree, py::arg("tensor"), py::arg("model"),
          py::arg("x0"), py::arg("alpha_bar"));

    // ---- critical-peak-pricing scheduling

    py::class_<QuadCost>(m, "QuadCost")
        .def_static("uniform", &QuadCost::uniform, py::arg("T"), py::arg("B"),
                    py::arg("C"), py::arg("D"))
        .def_readwrite("b2", &QuadCost::b2)
        .def_readwrite("c1", &QuadCost::c1)
        .def_readwrite("d0", &QuadCost::d0)
        .def("validate", &QuadCost::validate, py::arg("T"))
        .def("B", &QuadCost::B, py::arg("day"))
        .def("C", &QuadCost::C, py::arg("day"))
        .def("D", &QuadCost::D, py::arg("day"));

    py::class_<CppParams>(m, "CppParams")
        .def_static("uniform", &CppParams::uniform, py::arg("T"), py::arg("M"),
                    py::arg("y"), py::arg("abar"))
        .def_readwrite("budget", &CppParams::budget)
        .def_readwrite("y", &CppParams::y)
        .def_readwrite("abar", &CppParams::abar)
        .def("validate", &CppParams::validate, py::arg("T"))
        .def("a", &CppParams::a, py::arg("day"));

    py::class_<DemandModel>(m, "DemandModel")
        .def(py::init<>())
        .def_readwrite("coef", &DemandModel::coef)
        .def("predict", &DemandModel::predict, py::arg("space"), py::arg("state"))
        .def("demand_vector", &DemandModel::demand_vector, py::arg("space"));
    m.def("demand_features", &demand_features, py::arg("space"), py::arg("state"));
    m.def("power_cost", &power_cost, py::arg("z"), py::arg("quad"), py::arg("day"));

    py::class_<PolicyTableCpp>(m, "PolicyTableCpp")
        .def_property_readonly("horizon", &PolicyTableCpp::horizon)
        .def_property_readonly("budget", &PolicyTableCpp::budget)
        .def_property_readonly("n_states", &PolicyTableCpp::n_states)
        .def_property_readonly("demand", &PolicyTableCpp::demand)
        .def_property_readonly("mean_next_demand", &PolicyTableCpp::mean_next_demand)
        .def("g", &PolicyTableCpp::g, py::arg("d"), py::arg("k"), py::arg("x"));
    m.def("build_cpp",
          static_cast<PolicyTableCpp (*)(int, const CppParams&, const QuadCost&,
                                         const Eigen::VectorXd&, const TransitionModel&)>(
              &build_cpp),
          py::arg("T"), py::arg("params"), py::arg("quad"), py::arg("demand"),
          py::arg("model"));
    m.def("build_cpp",
          static_cast<PolicyTableCpp (*)(int, const CppParams&, const QuadCost&,
                                         const DemandModel&, const StateSpace&,
                                         const TransitionModel&)>(&build_cpp),
          py::arg("T"), py::arg("params"), py::arg("quad"), py::arg("demand"),
          py::arg("space"), py::arg("model"));
    m.def("threshold_cpp", &threshold_cpp, py::arg("table"), py::arg("d"), py::arg("k"),
          py::arg("x"));
    m.def("decide_cpp", &decide_cpp, py::arg("table"), py::arg("d"), py::arg("k"),
          py::arg("x"));

    // ---- simulation and baselines

    py::class_<PolicyDecision>(m, "PolicyDecision")
        .def(py::init([](int decision, double threshold) {
                 return PolicyDecision{decision, threshold};
             }),
             py::arg("decision"), py::arg("threshold") = 0.0)
        .def_readwrite("decision", &PolicyDecision::decision)
        .def_readwrite("threshold", &PolicyDecision::threshold);

    py::class_<EpisodeResult>(m, "EpisodeResult")
        .def_readonly("decisions", &EpisodeResult::decisions)
        .def_readonly("realized_cost", &EpisodeResult::realized_cost)
        .def_readonly("expected_cost", &EpisodeResult::expected_cost)
        .def_readonly("metric", &EpisodeResult::metric)
        .def_readonly("threshold", &EpisodeResult::threshold)
        .def_readonly("budget_left", &EpisodeResult::budget_left)
        .def_readonly("count", &EpisodeResult::count)
        .def_readonly("total_realized", &EpisodeResult::total_realized)
        .def_readonly("total_expected", &EpisodeResult::total_expected);

    m.def("policy_from_s1", &policy_from_s1, py::arg("table"));
    m.def("policy_from_s2", &policy_from_s2, py::arg("table"));
    m.def("threshold_policy", &threshold_policy, py::arg("wrp"), py::arg("threshold"));
    m.def("run_policy", &run_policy, py::arg("path"), py::arg("costs"), py::arg("model"),
          py::arg("risk"), py::arg("budget"), py::arg("policy"));
    m.def("historical_threshold", &historical_threshold, py::arg("yearly_metrics"),
          py::arg("N"));
    m.def("hindsight_policy", &hindsight_policy, py::arg("realized"), py::arg("M"));
    m.def("sample_years", &sample_years, py::arg("model"), py::arg("x0"), py::arg("T"),
          py::arg("n_years"), py::arg("seed"));

    py::class_<PolicySpec>(m, "PolicySpec")
        .def(py::init([](std::string name, Policy policy, int budget) {
                 return PolicySpec{std::move(name), std::move(policy), budget};
             }),
             py::arg("name"), py::arg("policy"), py::arg("budget") = -1)
        .def_readwrite("name", &PolicySpec::name)
        .def_readwrite("budget", &PolicySpec::budget);

    py::class_<PolicySummary>(m, "PolicySummary")
        .def_readonly("name", &PolicySummary::name)
        .def_readonly("mean_count", &PolicySummary::mean_count)
        .def_readonly("std_count", &PolicySummary::std_count)
        .def_readonly("mean_expected_cost", &PolicySummary::mean_expected_cost)
        .def_readonly("std_expected_cost", &PolicySummary::std_expected_cost);
    m.def("monte_carlo", &monte_carlo, py::arg("model"), py::arg("risk"), py::arg("costs"),
          py::arg("x0"), py::arg("T"), py::arg("n_years"), py::arg("seed"),
          py::arg("policies"));

    m.def("policy_from_cpp", &policy_from_cpp, py::arg("table"));
    m.def("demand_threshold_policy", &demand_threshold_policy,
          py::arg("mean_next_demand"), py::arg("threshold"));
    m.def("cpp_path_cost", &cpp_path_cost, py::arg("path"), py::arg("params"),
          py::arg("quad"), py::arg("demand"), py::arg("model"), py::arg("u"));
    m.def("run_policy_cpp", &run_policy_cpp, py::arg("path"), py::arg("params"),
          py::arg("quad"), py::arg("demand"), py::arg("model"), py::arg("budget"),
          py::arg("policy"));
    m.def("savings_vs_hindsight", &savings_vs_hindsight, py::arg("cost_none"),
          py::arg("cost_policy"), py::arg("cost_hindsight"));

    // ---- ingestion

    py::class_<SeasonWindow>(m, "SeasonWindow")
        .def(py::init([](int sm, int sd, int em, int ed) {
                 return SeasonWindow{sm, sd, em, ed};
             }),
             py::arg("start_month") = 1, py::arg("start_day") = 1,
             py::arg("end_month") = 12, py::arg("end_day") = 31)
        .def_readwrite("start_month", &SeasonWindow::start_month)
        .def_readwrite("start_day", &SeasonWindow::start_day)
        .def_readwrite("end_month", &SeasonWindow::end_month)
        .def_readwrite("end_day", &SeasonWindow::end_day)
        .def("contains", &SeasonWindow::contains, py::arg("month"), py::arg("day"));

    py::class_<WeatherFrame>(m, "WeatherFrame")
        .def_readonly("columns", &WeatherFrame::columns)
        .def_readonly("year", &WeatherFrame::year)
        .def_readonly("month", &WeatherFrame::month)
        .def_readonly("day", &WeatherFrame::day)
        .def_readonly("weekday", &WeatherFrame::weekday)
        .def_readonly("readings", &WeatherFrame::readings)
        .def_readonly("demand", &WeatherFrame::demand)
        .def_readonly("has_demand", &WeatherFrame::has_demand)
        .def_property_readonly("rows", &WeatherFrame::rows);

    m.def("load_csv", &load_csv, py::arg("path"), py::arg("expected_columns"),
          py::arg("season"), py::arg("carry_forward") = false);
    m.def("fit_bins", &fit_bins, py::arg("frame"), py::arg("counts"),
          py::arg("day_type_count") = 1);
    m.def("discretize_frame", &discretize_frame, py::arg("frame"), py::arg("space"));
    m.def("distinct_years", &distinct_years, py::arg("frame"));
    m.def("filter_years", &filter_years, py::arg("frame"), py::arg("years"));
    m.def("by_year", &by_year, py::arg("frame"));
    m.def("fit_demand", &fit_demand, py::arg("frame"), py::arg("space"));
    m.def("demand_rmse", &demand_rmse, py::arg("frame"), py::arg("space"),
          py::arg("model"));
    m.def("cv_rmse", &cv_rmse, py::arg("frame"), py::arg("counts"),
          py::arg("day_type_count"), py::arg("k"));

    // ---- artifact files

    m.def("save_transitions", &save_transitions, py::arg("path"), py::arg("model"));
    m.def("load_transitions", &load_transitions, py::arg("path"));
    m.def("save_table",
          static_cast<void (*)(const std::string&, const PolicyTableS1&)>(&save_table),
          py::arg("path"), py::arg("table"));
    m.def("save_table",
          static_cast<void (*)(const std::string&, const PolicyTableS2&)>(&save_table),
          py::arg("path"), py::arg("table"));
    m.def("save_table",
          static_cast<void (*)(const std::string&, const PolicyTableCpp&)>(&save_table),
          py::arg("path"), py::arg("table"));
    m.def("load_table_s1", &load_table_s1, py::arg("path"));
    m.def("load_table_s2", &load_table_s2, py::arg("path"));
    m.def("load_table_cpp", &load_table_cpp, py::arg("path"));
    m.def("artifact_kind", &artifact_kind, py::arg("path"));

    // ---- bundled fixtures

    py::class_<PspsFixture>(m, "PspsFixture")
        .def_readonly("space", &PspsFixture::space)
        .def_readonly("model", &PspsFixture::model)
        .def_readonly("rule", &PspsFixture::rule)
        .def_readonly("risk", &PspsFixture::risk)
        .def_readonly("costs", &PspsFixture::costs)
        .def_readonly("budget", &PspsFixture::budget)
        .def_readonly("x0", &PspsFixture::x0);
    py::class_<CppFixture>(m, "CppFixture")
        .def_readonly("space", &CppFixture::space)
        .def_readonly("model", &CppFixture::model)
        .def_readonly("demand", &CppFixture::demand)
        .def_readonly("quad", &CppFixture::quad)
        .def_readonly("params", &CppFixture::params)
        .def_readonly("horizon", &CppFixture::horizon)
        .def_readonly("x0", &CppFixture::x0);
    m.def("make_psps_fixture", &make_psps_fixture);
    m.def("make_cpp_fixture", &make_cpp_fixture);
    m.def("write_psps_csv", &write_psps_csv, py::arg("path"), py::arg("n_years"),
          py::arg("seed"));
    m.def("write_cpp_csv", &write_cpp_csv, py::arg("path"), py::arg("n_years"),
          py::arg("seed"));
}
