import json
import math

import pytest

import cscgd


def test_presets_listed():
    names = cscgd.preset_names()
    for name in ("paper-ex1", "paper-ex3", "mm1", "toy-quadratic"):
        assert name in names


def test_preset_info_toy():
    info = cscgd.preset_info("toy-quadratic", {"level": 0.9})
    assert info["dim_x"] == 3
    assert info["num_constraints"] == 1
    assert info["constants"]["D_x"] == pytest.approx(3.0)


def test_unknown_preset_raises():
    with pytest.raises(cscgd.ConfigError):
        cscgd.preset_info("no-such-preset")


def test_mm1_solve_recovers_closed_form():
    mu = cscgd.mm1_optimal_mu(1.0, 1.0, 1.0)
    assert mu == pytest.approx(2.0 + math.sqrt(2.0))
    res = cscgd.solve("mm1", a=0.25, b=0.25, c=0.25, horizon=20000)
    assert res["x_hat"][0] == pytest.approx(mu, abs=1e-3)
    assert res["trajectory"][-1]["t"] == 20000


def test_toy_run_is_deterministic():
    a = cscgd.solve("toy-quadratic", horizon=500, seed=3)
    b = cscgd.solve("toy-quadratic", horizon=500, seed=3)
    assert list(a["x_hat"]) == list(b["x_hat"])
    assert len(a["trajectory"]) == 500


def test_example1_experiment_reports_gap():
    f_star, x_star = cscgd.example1_fstar()
    assert f_star < 0
    assert x_star.sum() <= 15 + 1e-9
    res = cscgd.run({"preset": "paper-ex1", "horizon": 2000, "seeds": [1, 2], "eval_batch": 10000})
    assert res["f_star"] == pytest.approx(f_star)
    assert [r["seed"] for r in res["runs"]] == [1, 2]
    for r in res["runs"]:
        assert r["gap"] == pytest.approx(r["F"] - f_star)


def test_config_hash_ignores_output_dir():
    base = {"preset": "mm1", "horizon": 100}
    assert cscgd.config_hash(base) == cscgd.config_hash({**base, "output_dir": "elsewhere"})
    assert cscgd.config_hash(base) != cscgd.config_hash({**base, "horizon": 101})
    assert len(cscgd.config_hash(json.dumps(base))) == 16


def test_statistics():
    slope, lo, hi = cscgd.rate_fit([1e3, 1e4, 1e5, 1e6], [[t ** -0.5] * 10 for t in (1e3, 1e4, 1e5, 1e6)])
    assert slope == pytest.approx(-0.5)
    assert lo <= slope <= hi
    s, _, p = cscgd.mann_kendall([4.0, 3.0, 2.0, 1.0])
    assert s == -6
    assert p < 1


def test_hessian_scan_small_grid():
    eig, _, _ = cscgd.hessian_min_eigenvalue(dof=10, nx=5, ny=5)
    assert eig >= -1e-8


def test_evaluate_toy():
    e = cscgd.evaluate("toy-quadratic", [0.5, 0.5, 0.5], batch=10)
    assert e["F"] == pytest.approx(0.06)
    assert e["F_se"] == 0.0
