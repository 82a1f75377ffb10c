"""Smoke tests for the Python bindings."""

import math
import os

import numpy as np
import pytest

import _oneshot as osd

DATA = os.environ.get("ONESHOT_DATA_DIR", os.path.join(os.path.dirname(__file__), "../../data"))


@pytest.fixture(scope="module")
def bdc():
    return osd.load_dataset(os.path.join(DATA, "bdc.csv"))


def test_dataset_roundtrip(bdc):
    assert len(bdc.plan) == 6
    assert bdc.plan.total_devices() == 238
    assert bdc.condition_ids[0] == "it1_w1"
    assert bdc.counts.rows[3].n_cause2 == 17


def test_mle_fit(bdc):
    r = osd.fit(bdc.plan, bdc.counts, beta=0.0)
    assert r.converged
    assert r.theta_hat.theta10 == pytest.approx(0.000890257471, rel=1e-4)
    assert r.theta_hat.theta11 == pytest.approx(1.31894483, rel=1e-4)
    assert r.theta_hat.theta21 == pytest.approx(2.49759982, rel=1e-4)
    assert r.covariance_ok
    assert np.asarray(r.covariance).shape == (4, 4)
    err = osd.estimated_error(bdc.plan, bdc.counts, r.theta_hat)
    assert err == pytest.approx(0.10497, abs=5e-4)


def test_dpd_fit_and_objective(bdc):
    r = osd.fit(bdc.plan, bdc.counts, beta=0.5)
    assert r.converged
    direct = osd.objective(bdc.plan, bdc.counts, r.theta_hat, 0.5)
    assert direct == pytest.approx(r.objective, rel=1e-12)


def test_wald_test(bdc):
    r = osd.fit(bdc.plan, bdc.counts, beta=0.0)
    L = np.zeros((1, 4))
    L[0, 3] = 1.0
    w = osd.wald_test(r, bdc.plan, L, np.array([0.08]), alpha=0.05)
    assert w.df == 1
    assert w.statistic > 0
    assert w.reject_at[0.05]


def test_power_and_sample_size():
    plan = osd.TestPlan([osd.TestCondition(it, x, 100)
                         for it in (7.0, 15.0, 25.0) for x in (35.0, 45.0, 55.0, 65.0)])
    star = osd.ThetaParams(0.004, 0.05, 0.0004, 0.09)
    L = np.zeros((1, 4))
    L[0, 3] = 1.0
    c = np.array([0.08])
    s = osd.required_sample_size(star, plan, L, c, beta=0.0, alpha=0.05, target_power=0.9)
    assert s.power_at_k.approx_power >= 0.89
    p = osd.power_approx(star, plan, L, c, beta=0.0, alpha=0.05, k_total=float(s.k_total))
    assert p.approx_power == pytest.approx(s.power_at_k.approx_power, rel=1e-12)


def test_tuning(bdc):
    r = osd.tune(bdc.plan, bdc.counts, grid=[0.0, 0.2, 0.4, 0.6, 0.8, 1.0])
    assert 0.2 <= r.best_beta <= 0.6
    assert len(r.records) == 6


def test_lifetime_summaries():
    theta = osd.ThetaParams(0.00089, 1.3191, 0.00028, 2.493)
    q = osd.quantities_of_interest(theta, 1.0)
    assert q.e_cause1 == pytest.approx(300.545, rel=0.02)
    assert q.p_cause1 + q.p_cause2 == pytest.approx(1.0, abs=1e-12)


def test_simulation_determinism():
    a = osd.run_efficiency_study("low-reliability", k_per_cell=40, replications=5,
                                 seed=11, betas=[0.0])
    b = osd.run_efficiency_study("low-reliability", k_per_cell=40, replications=5,
                                 seed=11, betas=[0.0])
    assert a[0][1].rmse_aggregate == b[0][1].rmse_aggregate
    assert a[0][1].replications_used == b[0][1].replications_used


def test_parse_error_class():
    with pytest.raises(osd.ParseError):
        osd.load_dataset("/nonexistent.csv")
