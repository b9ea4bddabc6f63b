import numpy as np
import pytest

from clonebench.linalg import (
    DensityOperator,
    StateVector,
    SubsystemLayout,
    eig_hermitian,
    fidelity_pure,
    fidelity_to_eta,
    haar_random_state,
    haar_random_unitary,
    partial_trace,
    qubits,
    tensor,
)


def test_layout_indexing():
    layout = SubsystemLayout.of(("A", 2), ("B", 3), ("C", 2))
    assert layout.dim == 12
    assert layout.labels == ("A", "B", "C")
    assert layout.index("B") == 1
    assert layout.dim_of("C") == 2
    with pytest.raises(ValueError):
        layout.index("Z")
    with pytest.raises(ValueError):
        SubsystemLayout.of(("A", 2), ("A", 2))


def test_partial_trace_matches_direct_contraction():
    rng = np.random.default_rng(11)
    layout = SubsystemLayout.of(("A", 2), ("B", 3))
    m = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    rho = DensityOperator(layout, m @ m.conj().T / np.trace(m @ m.conj().T))
    reduced = partial_trace(rho, keep=("A",))
    direct = np.einsum(rho.matrix.reshape(2, 3, 2, 3), [0, 1, 2, 1])
    assert np.allclose(reduced.matrix, direct, atol=1e-14)
    assert reduced.layout.labels == ("A",)
    # keeping everything is the identity operation
    same = partial_trace(rho, keep=("A", "B"))
    assert np.allclose(same.matrix, rho.matrix, atol=0)


def test_partial_trace_keeps_declared_order():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(2, 2))
    b = rng.normal(size=(3, 3))
    c = rng.normal(size=(2, 2))
    layout = SubsystemLayout.of(("A", 2), ("B", 3), ("C", 2))
    rho = DensityOperator(layout, np.kron(np.kron(a, b), c))
    out = partial_trace(rho, keep=("C", "A"))
    # product input: the reduction factorizes, traced factor leaves its trace
    expect = np.kron(a, c) * np.trace(b)
    assert out.layout.labels == ("A", "C")
    assert np.allclose(out.matrix, expect, atol=1e-13)


def test_tensor_and_state_density():
    psi = StateVector.normalized(qubits("p"), np.array([1.0, 1.0j]))
    rho = psi.density()
    assert np.allclose(rho.matrix, 0.5 * np.array([[1, -1j], [1j, 1]]), atol=1e-15)
    phi = StateVector.normalized(qubits("q"), np.array([1.0, 0.0]))
    two = tensor(psi, phi)
    assert two.layout.labels == ("p", "q")
    assert abs(two.norm - 1.0) < 1e-14
    with pytest.raises(ValueError):
        tensor(psi, psi)  # same label on both factors


def test_eig_hermitian_descending_and_rejects_nonhermitian():
    rng = np.random.default_rng(0)
    m = rng.normal(size=(5, 5))
    h = m + m.T
    vals, vecs = eig_hermitian(h)
    assert np.all(np.diff(vals) <= 1e-12)
    assert np.allclose(vecs @ np.diag(vals) @ vecs.conj().T, h, atol=1e-12)
    with pytest.raises(ValueError):
        eig_hermitian(h + 1e-3 * (m - m.T))


def test_haar_state_and_unitary():
    rng = np.random.default_rng(7)
    for d in (2, 3, 5):
        psi = haar_random_state(d, rng)
        assert abs(psi.norm - 1.0) < 1e-13
        u = haar_random_unitary(d, rng)
        assert np.allclose(u @ u.conj().T, np.eye(d), atol=1e-12)


def test_haar_state_moments():
    # mean projector over Haar states is the maximally mixed state
    rng = np.random.default_rng(123)
    d = 3
    acc = np.zeros((d, d), dtype=complex)
    n = 4000
    for _ in range(n):
        v = haar_random_state(d, rng).amplitudes
        acc += np.outer(v, v.conj())
    acc /= n
    assert np.max(np.abs(acc - np.eye(d) / d)) < 5.0 / np.sqrt(n)


def test_fidelity_pure_and_eta():
    psi = StateVector(qubits("q"), np.array([1.0, 0.0]))
    rho = DensityOperator(qubits("q"), np.array([[0.75, 0.0], [0.0, 0.25]]))
    assert abs(fidelity_pure(rho, psi) - 0.75) < 1e-15
    assert abs(fidelity_to_eta(1.0, 2) - 1.0) < 1e-15
    assert abs(fidelity_to_eta(0.5, 2)) < 1e-15
    assert abs(fidelity_to_eta(2.0 / 3.0, 3) - 0.5) < 1e-14
    with pytest.raises(ValueError):
        fidelity_to_eta(1.2, 2)
    with pytest.raises(ValueError):
        fidelity_to_eta(0.2, 2)


def test_density_validation_rejects_bad_operators():
    layout = qubits("q")
    with pytest.raises(ValueError):
        DensityOperator(layout, np.array([[1.5, 0], [0, -0.5]])).validated()
    with pytest.raises(ValueError):
        DensityOperator(layout, np.array([[0.7, 0.2], [0.3, 0.3]])).validated()
    with pytest.raises(ValueError):
        DensityOperator(layout, np.array([[0.7, 0.0], [0.0, 0.7]])).validated()
    ok = DensityOperator(layout, np.array([[0.7, 0.1], [0.1, 0.3]])).validated()
    assert abs(ok.trace - 1.0) < 1e-14
