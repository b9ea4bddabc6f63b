import math

import numpy as np
import pytest

from clonebench.tripartite import (
    analytic_fidelities,
    anticlone_fidelities,
    best_coefficients,
    clone_fidelities,
    coefficients_from_ratios,
    constraint_residual,
    normalize_coefficients,
    numeric_fidelities,
    output_state,
    symmetric_point,
)


def test_normalization_satisfies_constraint():
    for d in (2, 3, 5):
        for raw in [(1.0, 1.0, 1.0), (3.0, 0.5, 0.1), (1.0, 0.0, 0.0), (0.0, 2.0, 1.0)]:
            a, b, c = normalize_coefficients(d, *raw)
            assert constraint_residual(d, a, b, c) < 1e-12
            # direction is preserved
            raw_arr = np.array(raw)
            got = np.array([a, b, c])
            k = np.argmax(raw_arr)
            assert np.allclose(got * raw_arr[k], raw_arr * got[k], atol=1e-12)


def test_normalization_rejects_bad_weights():
    with pytest.raises(ValueError):
        normalize_coefficients(2, 0.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        normalize_coefficients(2, 1.0, -0.2, 0.1)


def test_ratio_constructor():
    d = 3
    a, b, c = coefficients_from_ratios(d, 2.0, 4.0)
    assert abs(a / b - 2.0) < 1e-12
    assert abs(a / c - 4.0) < 1e-12
    assert constraint_residual(d, a, b, c) < 1e-12
    # infinite ratio switches the weight off entirely
    a, b, c = coefficients_from_ratios(d, math.inf, 1.0)
    assert b == 0.0 and abs(a - c) < 1e-15
    with pytest.raises(ValueError):
        coefficients_from_ratios(d, -1.0, 1.0)
    with pytest.raises(ValueError):
        coefficients_from_ratios(d, 0.0, 1.0)


def test_output_state_is_normalized():
    for d in (2, 3):
        coeffs = coefficients_from_ratios(d, 1.3, 0.7)
        psi = np.zeros(d, dtype=complex)
        psi[0] = 1.0
        state = output_state(d, *coeffs, psi)
        assert abs(state.norm - 1.0) < 1e-12
        assert state.layout.labels == ("A", "B", "C", "E", "F")


def test_numeric_matches_analytic():
    rng = np.random.default_rng(31)
    for d in (2, 3):
        for ratios in [(1.0, 1.0), (2.0, 0.5), (0.3, 3.0)]:
            coeffs = coefficients_from_ratios(d, *ratios)
            ref = analytic_fidelities(d, *coeffs)
            stats = numeric_fidelities(d, *coeffs, samples=15, seed=rng)
            for got, want in zip(stats.mean, ref):
                assert abs(got - want) < 1e-12
            for s in stats.std:
                assert s < 1e-12  # universal machine


def test_clone_exchange_symmetry():
    # swapping two coefficients swaps the corresponding clone fidelities
    d = 3
    a, b, c = normalize_coefficients(d, 0.9, 0.5, 0.2)
    fab = analytic_fidelities(d, a, b, c)
    fba = analytic_fidelities(d, b, a, c)
    assert abs(fab.f_a - fba.f_b) < 1e-15
    assert abs(fab.f_b - fba.f_a) < 1e-15
    assert abs(fab.f_c - fba.f_c) < 1e-15


def test_symmetric_point_values():
    for d in (2, 3, 7):
        a, b, c = symmetric_point(d)
        assert abs(a - b) < 1e-15 and abs(b - c) < 1e-15
        f = analytic_fidelities(d, a, b, c)
        want = 1.0 - 2.0 * (d - 1.0) / (3.0 * (d + 1.0))
        for val in f:
            assert abs(val - want) < 1e-12


def test_trivial_and_two_clone_points():
    for d in (2, 5):
        f = analytic_fidelities(d, 1.0, 0.0, 0.0)
        assert f.f_a == 1.0
        assert abs(f.f_b - 1.0 / d) < 1e-15
        assert abs(f.f_c - 1.0 / d) < 1e-15
        # balanced two-clone slice
        a, b, c = coefficients_from_ratios(d, 1.0, math.inf)
        f2 = analytic_fidelities(d, a, b, c)
        assert abs(f2.f_a - (d + 3.0) / (2.0 * (d + 1.0))) < 1e-12
        assert abs(f2.f_a - f2.f_b) < 1e-15


def test_single_state_fidelities_are_input_independent():
    d = 2
    coeffs = coefficients_from_ratios(d, 1.7, 0.9)
    rng = np.random.default_rng(8)
    base = clone_fidelities(d, *coeffs, np.array([1.0, 0.0]))
    for _ in range(5):
        v = rng.normal(size=d) + 1j * rng.normal(size=d)
        v /= np.linalg.norm(v)
        got = clone_fidelities(d, *coeffs, v)
        for x, y in zip(got, base):
            assert abs(x - y) < 1e-12


def test_anticlone_fidelities_symmetry_and_spread():
    d = 2
    a, b, c = symmetric_point(d)
    anc = anticlone_fidelities(d, a, b, c, samples=12, seed=4)
    # beta = gamma makes the two ancillas interchangeable, sample by sample
    assert abs(anc.f_e - anc.f_f) < 1e-12
    assert abs(anc.std_e - anc.std_f) < 1e-12
    # unlike the clones, the ancilla overlap depends on the input state
    assert anc.std_e > 1e-3
    assert 0.0 <= anc.f_e <= 1.0


def test_best_coefficients_recovers_symmetric_point():
    # per-clone fidelities move linearly away from the optimum, so the
    # optimizer pins them less tightly than the weighted objective; 1e-7 is
    # the cross-route agreement this machinery is held to elsewhere
    for d in (2, 3):
        best = best_coefficients(d, (1.0, 1.0, 1.0), seed=1)
        want = symmetric_point(d)
        for got, ref in zip(best.coefficients, want):
            assert abs(got - ref) < 1e-4
        f_sym = 1.0 - 2.0 * (d - 1.0) / (3.0 * (d + 1.0))
        for f in best.fidelities:
            assert abs(f - f_sym) < 1e-7


def test_best_coefficients_vertex_weight():
    # all weight on one clone: copy it perfectly, other outputs maximally mixed
    best = best_coefficients(2, (1.0, 0.0, 0.0), seed=1)
    assert abs(best.fidelities.f_a - 1.0) < 1e-9
    assert abs(best.coefficients[1]) < 1e-4
    assert abs(best.coefficients[2]) < 1e-4
