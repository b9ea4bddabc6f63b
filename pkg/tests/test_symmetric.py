import numpy as np
import pytest

from clonebench.symmetric import CGProjectors, cg_projectors, dicke_state, sym_projector


def test_sym_projector_is_projector_with_rank_n_plus_1():
    for n in (1, 2, 3, 4):
        p = sym_projector(n)
        assert np.allclose(p, p.T, atol=1e-14)
        assert np.allclose(p @ p, p, atol=1e-13)
        assert abs(np.trace(p) - (n + 1)) < 1e-12


def test_sym_projector_fixes_symmetric_states_only():
    p = sym_projector(2)
    # |01> + |10> is symmetric, |01> - |10> is not
    plus = np.array([0, 1, 1, 0]) / np.sqrt(2)
    minus = np.array([0, 1, -1, 0]) / np.sqrt(2)
    assert np.allclose(p @ plus, plus, atol=1e-14)
    assert np.allclose(p @ minus, 0.0, atol=1e-14)


def test_dicke_states_span_the_symmetric_subspace():
    n = 3
    p = sym_projector(n)
    vecs = [dicke_state(n, k).amplitudes for k in range(n + 1)]
    gram = np.array([[np.vdot(a, b) for b in vecs] for a in vecs])
    assert np.allclose(gram, np.eye(n + 1), atol=1e-14)
    span = sum(np.outer(v, v.conj()) for v in vecs)
    assert np.allclose(span, p, atol=1e-13)


def test_dicke_rejects_bad_excitation_numbers():
    with pytest.raises(ValueError):
        dicke_state(3, 4)
    with pytest.raises(ValueError):
        dicke_state(3, -1)


def test_cg_blocks_are_orthogonal_projectors_with_expected_ranks():
    for n in (2, 3, 4):
        blocks = cg_projectors(n)
        sp, sm = blocks.s_plus, blocks.s_minus
        assert sp.shape == (blocks.dim, blocks.dim)
        for p in (sp, sm):
            assert np.allclose(p @ p, p, atol=1e-12)
            assert np.allclose(p, p.conj().T, atol=1e-13)
        assert np.max(np.abs(sp @ sm)) < 1e-12
        assert abs(np.trace(sp) - (n + 2)) < 1e-10
        assert abs(np.trace(sm) - n) < 1e-10


def test_cg_blocks_resolve_qubit_times_symmetric():
    n = 3
    blocks = cg_projectors(n)
    embed = np.kron(np.eye(2), sym_projector(n))
    assert np.allclose(blocks.s_plus + blocks.s_minus, embed, atol=1e-12)


def test_cg_register_size_limits():
    with pytest.raises(ValueError):
        cg_projectors(1)
    with pytest.raises(ValueError):
        cg_projectors(7)
