import math

import numpy as np
import pytest

from clonebench.one_to_n import (
    TradeoffParam,
    analytic_tradeoff,
    build_sandwich,
    estimation_limit,
    frontier_peak_y,
    numeric_fidelities,
    param_bridge,
)

# reference points on the n = 2 trade-off curve
CURVE_POINTS_N2 = [
    (0.0, 1.0, 0.5),
    (math.sqrt(1.0 / 3.0), 7.0 / 9.0, 7.0 / 9.0),
    (math.sqrt(2.0 / 3.0), 5.0 / 9.0, 5.0 / 6.0),
]


def test_curve_anchor_points_n2():
    for y, fa, fb in CURVE_POINTS_N2:
        got = analytic_tradeoff(2, TradeoffParam(y))
        assert abs(got[0] - fa) < 1e-15
        assert abs(got[1] - fb) < 1e-15


def test_param_validation():
    with pytest.raises(ValueError):
        TradeoffParam(-0.1)
    with pytest.raises(ValueError):
        TradeoffParam(1.1)
    with pytest.raises(ValueError):
        TradeoffParam(0.5, x=0.5)  # off the unit circle
    p = TradeoffParam(0.6)
    assert abs(p.x - 0.8) < 1e-15


def test_frontier_peak_maximizes_f_b():
    for n in (2, 3, 5):
        y0 = frontier_peak_y(n)
        fb_peak = analytic_tradeoff(n, TradeoffParam(y0))[1]
        assert abs(fb_peak - (2.0 * n + 1.0) / (3.0 * n)) < 1e-14
        for dy in (-1e-3, 1e-3):
            fb = analytic_tradeoff(n, TradeoffParam(y0 + dy))[1]
            assert fb <= fb_peak


def test_bridge_reproduces_curve_points():
    rng = np.random.default_rng(5)
    for n in (2, 3):
        for y in (0.0, 0.3, 0.62, 0.9, 1.0):
            p = TradeoffParam(y)
            ref = analytic_tradeoff(n, p)
            alpha, beta = param_bridge(n, p)
            stats = numeric_fidelities(build_sandwich(n, alpha, beta), samples=25, seed=rng)
            assert abs(stats.f_a - ref[0]) < 1e-8
            assert abs(stats.f_b - ref[1]) < 1e-8


def test_machine_is_universal_and_b_symmetric():
    alpha, beta = param_bridge(3, TradeoffParam(0.55))
    stats = numeric_fidelities(build_sandwich(3, alpha, beta), samples=40, seed=9)
    # input independence: zero variance across Haar states
    assert stats.f_a_std < 1e-9
    assert stats.f_b_std < 1e-9
    # the n blank-triggered clones are interchangeable
    assert stats.b_spread < 1e-12
    assert stats.f_a_min > 0.0


def test_symmetric_weights_give_symmetric_cloner():
    # alpha = 1, beta = 0 keeps only the fully symmetric block: the universal
    # symmetric 1 -> n+1 cloner, F = (2(n+1) + 1) / (3(n+1)) for every output
    for n in (2, 3):
        stats = numeric_fidelities(build_sandwich(n, 1.0, 0.0), samples=20, seed=2)
        f_sym = (2.0 * (n + 1.0) + 1.0) / (3.0 * (n + 1.0))
        assert abs(stats.f_a - f_sym) < 1e-10
        assert abs(stats.f_b - f_sym) < 1e-10


def test_build_sandwich_rejects_bad_arguments():
    with pytest.raises(ValueError):
        build_sandwich(1, 1.0, 0.0)
    with pytest.raises(ValueError):
        build_sandwich(2, 0.0, 0.0)


def test_estimation_limit_values_and_domain():
    f_a, f_meas = estimation_limit(1.0 / math.sqrt(2.0))
    assert abs(f_a - 2.0 / 3.0) < 1e-15
    assert abs(f_meas - 2.0 / 3.0) < 1e-15
    f_a0, f_meas0 = estimation_limit(0.0)
    assert f_a0 == 1.0 and f_meas0 == 0.5
    # the measured-knowledge curve increases all the way to the endpoint
    ys = np.linspace(0.0, 1.0 / math.sqrt(2.0), 300)
    vals = [estimation_limit(float(y))[1] for y in ys]
    assert np.all(np.diff(vals) > 0.0)
    with pytest.raises(ValueError):
        estimation_limit(0.8)
    with pytest.raises(ValueError):
        estimation_limit(-0.2)
