"""End-to-end exercise of the python bindings on small instances."""

import numpy as np
import pytest

import psps_sched as ps


@pytest.fixture(scope="module")
def chain():
    P = np.array([[0.7, 0.3], [0.4, 0.6]])
    return ps.TransitionModel(P)


def test_markov_basics(chain):
    assert chain.size == 2
    pi = ps.stationary(chain)
    assert pi.shape == (2,)
    assert pi.sum() == pytest.approx(1.0)
    path = ps.sample_path(chain, 0, 10, seed=3)
    assert len(path) == 11
    assert path == ps.sample_path(chain, 0, 10, seed=3)
    est = ps.estimate_transitions([path], 2, smoothing=1.0)
    assert est.matrix.shape == (2, 2)


def test_shutoff_pipeline(chain, tmp_path):
    T, N = 6, 2
    costs = ps.CostSchedule.uniform(T, A=100.0, a=5.0, s1=2.0, s2=2.0, lambda_=8.0)
    risk = np.array([1.0, 0.0])
    table = ps.build_s1(T, N, costs, chain, risk)
    assert table.budget == N
    assert ps.decide_s1(table, 1, 0, 0, 0) == 0  # depleted budget never fires

    # rolled-out table policy stays within the budget on every sampled year
    policy = ps.policy_from_s1(table)
    for path in ps.sample_years(chain, 0, T, 20, seed=11):
        episode = ps.run_policy(path, costs, chain, risk, N, policy)
        assert sum(episode.decisions) <= N

    table2 = ps.build_s2(T, costs, chain, risk)
    assert table2.lambda_ == 8.0

    out = tmp_path / "table_s1.bin"
    ps.save_table(str(out), table)
    assert ps.artifact_kind(str(out)) == "s1"
    loaded = ps.load_table_s1(str(out))
    assert loaded.g(3, 1, 0, 1) == table.g(3, 1, 0, 1)


def test_monte_carlo_named_policies(chain):
    T = 6
    costs = ps.CostSchedule.uniform(T, A=100.0, a=5.0, s1=2.0, s2=2.0)
    risk = np.array([1.0, 0.0])
    table = ps.build_s1(T, 2, costs, chain, risk)
    wrp = ps.wrp_vector(chain, risk)
    specs = [
        ps.PolicySpec("p1", ps.policy_from_s1(table), budget=2),
        ps.PolicySpec("historical", ps.threshold_policy(wrp, 0.5)),
    ]
    summaries = ps.monte_carlo(chain, risk, costs, 0, T, 30, 7, specs)
    assert [s.name for s in summaries] == ["p1", "historical"]
    assert summaries[0].mean_count <= 2.0


def test_pricing_pipeline():
    fx = ps.make_cpp_fixture()
    table = ps.build_cpp(fx.horizon, fx.params, fx.quad, fx.demand, fx.space, fx.model)
    assert table.budget == fx.params.budget
    q = fx.demand.demand_vector(fx.space)
    path = ps.sample_years(fx.model, fx.x0, fx.horizon, 1, seed=5)[0]
    episode = ps.run_policy_cpp(
        path, fx.params, fx.quad, q, fx.model, fx.params.budget,
        ps.policy_from_cpp(table),
    )
    assert sum(episode.decisions) <= fx.params.budget
    none = ps.cpp_path_cost(path, fx.params, fx.quad, q, fx.model, [0] * fx.horizon)
    mine = ps.cpp_path_cost(path, fx.params, fx.quad, q, fx.model, episode.decisions)
    assert mine <= none


def test_csv_roundtrip(tmp_path):
    csv = tmp_path / "winter.csv"
    ps.write_cpp_csv(str(csv), 2, seed=9)
    frame = ps.load_csv(str(csv), ["temp_c"], ps.SeasonWindow(12, 1, 3, 30))
    assert frame.has_demand
    assert frame.rows >= 2 * 120
    space = ps.fit_bins(frame, [4])
    states = ps.discretize_frame(frame, space)
    assert len(states) == frame.rows
    demand = ps.fit_demand(frame, space)
    # binning error dominates, but the fit must still beat a constant
    assert ps.demand_rmse(frame, space, demand) < np.std(frame.demand)


def test_python_callable_policy(chain):
    T = 4
    costs = ps.CostSchedule.uniform(T, A=100.0, a=5.0, s1=2.0, s2=2.0)
    risk = np.array([1.0, 0.0])

    def always_off(t, k, u_prev, x):
        return ps.PolicyDecision(0, float("inf"))

    episode = ps.run_policy(
        ps.sample_years(chain, 0, T, 1, seed=1)[0], costs, chain, risk, -1, always_off
    )
    assert episode.count == 0
