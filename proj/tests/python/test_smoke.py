import math

import pytest

s2shock = pytest.importorskip("s2shock")


def test_profile_solves_cubic():
    for y in (-3.0, -0.2, 0.0, 1e-4, 5.0):
        w = s2shock.w1d(y)
        assert abs(w + w**3 + y) < 1e-13
    assert s2shock.w1d_deriv(0.0, 1) == pytest.approx(-1.0)
    assert s2shock.w1d_deriv(0.0, 3) == pytest.approx(6.0)


def test_profile_residual_and_oddness():
    for y1, y2 in ((0.3, -1.2), (-4.0, 2.5), (10.0, 0.0)):
        assert abs(s2shock.profile_residual(y1, y2)) < 1e-12
        assert s2shock.w2d(-y1, y2) == pytest.approx(-s2shock.w2d(y1, y2))


def test_bound_table():
    assert s2shock.bound_exponent(0, 0) == pytest.approx(1.0 / 6.0)
    with pytest.raises(s2shock.S2ShockError):
        s2shock.bound_constant(3, 2)


def test_betas_and_riemann_round_trip():
    b = s2shock.betas(1.4)
    assert b["beta3"] == pytest.approx(1.0 / 6.0)
    w, z, a = s2shock.to_riemann(0.3, -0.1, 1.7, 0.8)
    V1, V2, S = s2shock.to_phys(w, z, a, 0.8)
    assert (V1, V2, S) == pytest.approx((0.3, -0.1, 1.7), abs=1e-14)


def test_origin_table_passes():
    t = s2shock.origin_table(psi=0.4, q12=0.1, q13=-0.2, q23=0.05, r0=1.0)
    assert t["pass"]
    assert len(t["entries"]) > 0


def test_config_validation():
    cfg = s2shock.default_config()
    assert cfg["solver"]["gamma"] == 1.4
    with pytest.raises(ValueError):
        s2shock.resolve_config({"solver": {"no_such_key": 1}})
    a = s2shock.config_hash({"output": {"dir": "x"}})
    b = s2shock.config_hash({"output": {"dir": "y"}})
    assert a == b and len(a) == 16


SMALL = {"solver": {"tau0": 1e-2, "n_cells": 512}, "diagnostics": {"bootstrap_every": 0}}


def test_run_blows_up_near_tau0():
    out = s2shock.run(SMALL)
    summary = out["summary"]
    assert summary["status"] == "blew_up"
    assert len(out["samples"]) > 10
    tau0 = SMALL["solver"]["tau0"]
    assert math.isclose(summary["T_star"], tau0, rel_tol=0.01)


def test_run_experiment_writes_files(tmp_path):
    s2shock.run_experiment(SMALL, tmp_path)
    for name in ("run.jsonl", "summary.json", "config.json", "metadata.json"):
        assert (tmp_path / name).exists()
