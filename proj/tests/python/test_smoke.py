"""Smoke checks of the python bindings against known closed forms."""

import math

import numpy as np
import pytest

import meanfield as mf


def logistic_infected(tau, rho, xi0, t):
    if tau == rho:
        return xi0 / (1.0 + tau * xi0 * t)
    r = tau - rho
    k = r / tau
    return k * xi0 / (xi0 + (k - xi0) * math.exp(-r * t))


def test_exports():
    for name in (
        "Model",
        "wlan_model",
        "sis_model",
        "integrate",
        "simulate",
        "find_fixed_points",
        "wlan_gamma",
        "cross_check",
        "detect_limit_cycle",
        "lln_test",
        "decoupling_test",
        "level4_marginal_test",
        "tv_distance",
    ):
        assert hasattr(mf, name), name


def test_model_basics():
    model = mf.wlan_model([1.0, 0.5, 0.25])
    assert model.num_states == 3
    assert len(model.labels) == 3

    xi = np.array([0.5, 0.3, 0.2])
    drift = model.drift(xi)
    assert abs(float(np.sum(drift))) < 1e-14

    rates = model.rate_matrix(xi)
    assert rates.shape == (3, 3)
    assert np.all(rates - np.diag(np.diag(rates)) >= 0.0)
    assert np.allclose(rates.sum(axis=1), 0.0, atol=1e-14)


def test_wlan_gamma_golden():
    report = mf.wlan_gamma([1.0, 0.5, 0.25])
    assert report["gamma_star"] == pytest.approx(0.42749152492914533, abs=1e-10)
    assert report["uniqueness_guaranteed"] is True

    uniform = mf.wlan_gamma([math.log(2.0)] * 3)
    assert uniform["gamma_star"] == pytest.approx(0.5, abs=1e-10)


def test_integrate_matches_logistic():
    model = mf.sis_model(2.0, 1.0)
    times, points = mf.integrate(model, np.array([0.7, 0.3]), 20.0)
    assert points.shape == (len(times), 2)
    assert np.allclose(points.sum(axis=1), 1.0, atol=1e-10)
    worst = max(
        abs(points[k, 1] - logistic_infected(2.0, 1.0, 0.3, float(times[k])))
        for k in range(len(times))
    )
    assert worst < 1e-7


def test_simulate_deterministic():
    model = mf.sis_model(2.0, 1.0)
    a = mf.simulate(model, 200, np.array([0.7, 0.3]), 2.0, seed=12345)
    b = mf.simulate(model, 200, np.array([0.7, 0.3]), 2.0, seed=12345)
    assert np.array_equal(a["times"], b["times"])
    assert np.array_equal(a["measures"], b["measures"])
    assert a["num_jumps"] == b["num_jumps"]

    c = mf.simulate(model, 200, np.array([0.7, 0.3]), 2.0, seed=54321)
    assert not np.array_equal(a["measures"], c["measures"])

    measures = a["measures"]
    assert np.allclose(measures.sum(axis=1), 1.0, atol=1e-12)
    assert np.all(np.abs(measures * 200 - np.round(measures * 200)) < 1e-9)


def test_fixed_points_sis():
    reports = mf.find_fixed_points(mf.sis_model(2.0, 1.0))
    assert len(reports) == 2
    endemic, disease_free = reports
    assert endemic["point"][1] == pytest.approx(0.5, abs=1e-8)
    assert endemic["stability"] == "stable"
    assert disease_free["point"][1] == pytest.approx(0.0, abs=1e-8)
    assert disease_free["stability"] == "unstable"
    for r in reports:
        assert r["residual"] < 1e-10


def test_cross_check_and_cycles():
    report = mf.cross_check([1.0, 0.5, 0.25])
    assert report["passed"]
    assert report["gamma_star"] == pytest.approx(0.42749152492914533, abs=1e-9)

    cycle = mf.detect_limit_cycle(mf.sis_model(2.0, 1.0), np.array([0.6, 0.4]), 200.0)
    assert cycle["outcome"] == "converged-to-point"
    assert cycle["point"][1] == pytest.approx(0.5, abs=1e-6)


def test_tv_distance():
    assert mf.tv_distance(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == pytest.approx(1.0)
    assert mf.tv_distance(np.array([0.5, 0.5]), np.array([0.5, 0.5])) == 0.0
