import math

import pytest

import srptq


def test_threshold_exponential():
    r = srptq.solve_threshold(srptq.Distribution.exponential(1.0), 1.4)
    assert r["tau"] == pytest.approx(2.5077328998, abs=1e-9)
    assert r["g_tau"] == pytest.approx(0.918547308511, abs=1e-11)


def test_not_overloaded_raises():
    with pytest.raises(ValueError, match="not overloaded"):
        srptq.solve_threshold(srptq.Distribution.exponential(1.0), 0.9)


def test_report_and_fluid_waits():
    exp = srptq.Distribution.exponential(1.0)
    r = srptq.asymptotic_report(exp, exp, 1.4)
    assert r["srpt_wait"] == pytest.approx(0.0814526914893, abs=1e-11)
    assert r["srpt_wait_given_abandon"] == 1.0
    assert srptq.fcfs_fluid_wait(exp, 1.4) == pytest.approx(2 / 7, abs=1e-12)
    assert srptq.lcfs_fluid_wait(1.0, 1.4) == pytest.approx(2 / 7, abs=1e-12)
    assert srptq.fcfs_fluid_boundary_wait(exp, 1.4) == pytest.approx(math.log(1.4))


def test_erlang_and_knapsack():
    assert srptq.erlang_blocking(2, 2.0) == pytest.approx(0.4)
    assert srptq.erlang_blocking_integral(50, 50.0) == pytest.approx(srptq.erlang_blocking(50, 50.0), abs=1e-9)
    tau = srptq.solve_threshold(srptq.Distribution.exponential(1.0), 1.4)["tau"]
    bound = srptq.throughput_bound_oracle(srptq.Distribution.exponential(1.0), tau, 10_000)
    assert bound == pytest.approx(0.918547308511, rel=1e-3)


def test_distribution_surface():
    w = srptq.Distribution.with_mean(srptq.Family.Weibull, 0.4, 1.0)
    assert w.mean() == pytest.approx(1.0)
    assert w.cdf(w.quantile(0.3)) == pytest.approx(0.3)
    assert srptq.Distribution.pareto(2.0, 1.0).cdf(2.0) == pytest.approx(0.75)
    with pytest.raises(ValueError):
        srptq.Distribution.pareto(1.0, 1.0)


def test_simulate_and_couple():
    cfg = srptq.SystemConfig()
    cfg.horizon = 1000.0
    cfg.warmup = 100.0
    cfg.seeds = [1, 2]
    m = srptq.simulate(cfg)
    th, hw, batches = m["throughput_per_arrival"]
    assert 0.8 < th < 0.95
    assert hw >= 0.0
    assert batches == 40
    assert srptq.simulate(cfg, workers=2) == m
    c = srptq.run_coupled(cfg, seed=3)
    assert c["violations"] == 0
    assert c["n_L1"] <= c["n_O"]


def test_config_json_round_trip():
    cfg = srptq.SystemConfig.from_json(
        '{"servers": 20, "rho": 1.4, "service": {"family": "exponential", "mean": 1},'
        ' "patience": {"family": "exponential", "mean": 1}, "discipline": "lcfs"}'
    )
    assert cfg.lambda_ == pytest.approx(28.0)
    assert cfg.discipline == srptq.Discipline.LCFS
    again = srptq.SystemConfig.from_json(cfg.to_json())
    assert again.servers == 20


def test_figures_and_verify():
    f2 = srptq.figure2()
    g = [row[f2["columns"].index("srpt_throughput")] for row in f2["rows"]]
    assert all(a > b for a, b in zip(g, g[1:]))
    assert srptq.figure1(family=srptq.Family.Pareto)["name"] == "figure1_pareto"
    results = srptq.verify([1, 8, 9])
    assert [r["passed"] for r in results] == [True, True, True]
