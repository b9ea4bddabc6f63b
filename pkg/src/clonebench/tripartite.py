"""Universal asymmetric 1 -> 1 + 1 + 1 cloning machine for qudits.

The three clones A, B, C and two ancillas E, F are prepared in a
six-term superposition: for each clone X, the input state sits on X while
the other two clones are maximally entangled with the ancillas in both
possible pairings,

    |out> = sum_X  w_X  |psi>_X  K (|Phi>_{Y E}|Phi>_{Z F}
                                     + |Phi>_{Y F}|Phi>_{Z E}),

with |Phi> = d^{-1/2} sum_j |jj> and K = sqrt(d / (2 (d + 1))) chosen so
each block is a unit vector.  The ancilla symmetrization is what makes the
single-clone fidelities input independent.  Weights are taken nonnegative;
relative phases between blocks are out of scope.  Valid weights (alpha, beta,
gamma) lie on the quadric

    alpha^2 + beta^2 + gamma^2
        + (2/d) (alpha beta + alpha gamma + beta gamma) = 1,

and the closed-form fidelities are

    F_A = 1 - ((d-1)/d) [beta^2 + gamma^2 + 2 beta gamma / (d+1)]

with F_B, F_C obtained by cycling the weights.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from scipy.linalg import eigh
from scipy.optimize import minimize

from .linalg import SubsystemLayout, StateVector, haar_random_state, rng_from

CONSTRAINT_ATOL = 1e-12
CLONE_LABELS = ("A", "B", "C")


class CloneTriple(NamedTuple):
    f_a: float
    f_b: float
    f_c: float


class TripartiteStats(NamedTuple):
    """Haar-sampled clone fidelities for the three outputs."""

    mean: CloneTriple
    min: CloneTriple
    std: CloneTriple


class BestCoefficients(NamedTuple):
    """Result of maximizing a weighted fidelity sum over valid weights."""

    coefficients: tuple[float, float, float]
    fidelities: CloneTriple
    value: float


def constraint_gram(d: int) -> np.ndarray:
    """Gram matrix of the three blocks; weights satisfy w^T G w = 1."""
    if d < 2:
        raise ValueError("d must be at least 2")
    g = np.full((3, 3), 1.0 / d)
    np.fill_diagonal(g, 1.0)
    return g


def constraint_residual(d: int, alpha: float, beta: float, gamma: float) -> float:
    w = np.array([alpha, beta, gamma], dtype=float)
    return float(w @ constraint_gram(d) @ w - 1.0)


def normalize_coefficients(
    d: int, alpha: float, beta: float, gamma: float
) -> tuple[float, float, float]:
    """Scale a nonzero, nonnegative triple onto the constraint quadric."""
    if min(alpha, beta, gamma) < 0.0:
        raise ValueError("weights must be nonnegative")
    w = np.array([alpha, beta, gamma], dtype=float)
    q = float(w @ constraint_gram(d) @ w)
    if q <= 0.0:
        raise ValueError("all three weights are zero")
    w = w / math.sqrt(q)
    return float(w[0]), float(w[1]), float(w[2])


def coefficients_from_ratios(d: int, r_ab: float, r_ac: float) -> tuple[float, float, float]:
    """Normalized weights from the asymmetry ratios alpha/beta and alpha/gamma.

    A ratio of math.inf encodes a vanishing second or third weight; ratios
    must otherwise be positive and finite.
    """
    for name, r in (("r_ab", r_ab), ("r_ac", r_ac)):
        if math.isnan(r) or r <= 0.0:
            raise ValueError(f"{name} must be positive (math.inf for a zero weight)")
    beta = 0.0 if math.isinf(r_ab) else 1.0 / r_ab
    gamma = 0.0 if math.isinf(r_ac) else 1.0 / r_ac
    return normalize_coefficients(d, 1.0, beta, gamma)


def _check_constraint(d: int, alpha: float, beta: float, gamma: float) -> None:
    if min(alpha, beta, gamma) < 0.0:
        raise ValueError("weights must be nonnegative")
    res = constraint_residual(d, alpha, beta, gamma)
    if abs(res) > CONSTRAINT_ATOL:
        raise ValueError(
            f"weights violate the normalization quadric (residual {res:.3e}); "
            "use normalize_coefficients first"
        )


def analytic_fidelities(d: int, alpha: float, beta: float, gamma: float) -> CloneTriple:
    """Closed-form clone fidelities for weights on the constraint quadric."""
    _check_constraint(d, alpha, beta, gamma)
    k = (d - 1.0) / d
    pair = 2.0 / (d + 1.0)

    def one(u: float, v: float) -> float:
        return 1.0 - k * (u * u + v * v + pair * u * v)

    return CloneTriple(one(beta, gamma), one(alpha, gamma), one(alpha, beta))


def symmetric_point(d: int) -> tuple[float, float, float]:
    """Equal-weight triple: all three clones at 1 - 2(d-1)/(3(d+1))."""
    if d < 2:
        raise ValueError("d must be at least 2")
    a = math.sqrt(d / (3.0 * (d + 2.0)))
    return a, a, a


def output_state(
    d: int,
    alpha: float,
    beta: float,
    gamma: float,
    psi: np.ndarray | None = None,
) -> StateVector:
    """Five-qudit output |out> on clones A, B, C and ancillas E, F."""
    _check_constraint(d, alpha, beta, gamma)
    if psi is None:
        psi = np.zeros(d, dtype=complex)
        psi[0] = 1.0
    psi = np.asarray(psi, dtype=complex).reshape(d)
    eye = np.eye(d)
    block_norm = math.sqrt(d / (2.0 * (d + 1.0))) / d  # K times the 1/d of two |Phi> pairs

    def block(spec_a: str, spec_b: str) -> np.ndarray:
        return np.einsum(spec_a, psi, eye, eye) + np.einsum(spec_b, psi, eye, eye)

    tens = (
        alpha * block("a,br,cs->abcrs", "a,bs,cr->abcrs")
        + beta * block("b,ar,cs->abcrs", "b,as,cr->abcrs")
        + gamma * block("c,ar,bs->abcrs", "c,as,br->abcrs")
    ) * block_norm
    layout = SubsystemLayout.of(("A", d), ("B", d), ("C", d), ("E", d), ("F", d))
    return StateVector(layout, tens.reshape(-1))


def clone_fidelities(
    d: int,
    alpha: float,
    beta: float,
    gamma: float,
    psi: np.ndarray | None = None,
) -> CloneTriple:
    """Numerically computed clone fidelities from the five-qudit output."""
    if psi is None:
        psi = np.zeros(d, dtype=complex)
        psi[0] = 1.0
    psi = np.asarray(psi, dtype=complex).reshape(d)
    state = output_state(d, alpha, beta, gamma, psi)
    tens = state.amplitudes.reshape((d,) * 5)
    vals = []
    for site in range(3):
        ket = [0, 1, 2, 3, 4]
        bra = [0, 1, 2, 3, 4]
        bra[site] = 5
        rdm = np.einsum(tens, ket, tens.conj(), bra, [site, 5])
        vals.append(float(np.vdot(psi, rdm @ psi).real))
    return CloneTriple(*vals)


def numeric_fidelities(
    d: int,
    alpha: float,
    beta: float,
    gamma: float,
    samples: int = 50,
    seed: int | np.random.Generator = 0,
) -> TripartiteStats:
    """Clone fidelities over Haar-random inputs (mean, min, std per clone)."""
    if samples < 1:
        raise ValueError("samples must be positive")
    rng = rng_from(seed)
    vals = np.empty((samples, 3))
    for i in range(samples):
        psi = haar_random_state(d, rng).amplitudes
        vals[i] = clone_fidelities(d, alpha, beta, gamma, psi)
    return TripartiteStats(
        mean=CloneTriple(*np.mean(vals, axis=0)),
        min=CloneTriple(*np.min(vals, axis=0)),
        std=CloneTriple(*np.std(vals, axis=0)),
    )


class AncillaFidelities(NamedTuple):
    """Haar-averaged input overlap of the two ancilla subsystems (diagnostic)."""

    f_e: float
    f_f: float
    std_e: float
    std_f: float


def anticlone_fidelities(
    d: int,
    alpha: float,
    beta: float,
    gamma: float,
    samples: int = 50,
    seed: int | np.random.Generator = 0,
) -> AncillaFidelities:
    """Fidelities of the ancilla (anti-clone) subsystems against the input.

    Unlike the clone fidelities these have no closed form here and are not
    input independent in general, so the Haar mean and spread are reported
    together.
    """
    _check_constraint(d, alpha, beta, gamma)
    if samples < 1:
        raise ValueError("samples must be positive")
    rng = rng_from(seed)
    vals = np.empty((samples, 2))
    for i in range(samples):
        psi = haar_random_state(d, rng).amplitudes
        state = output_state(d, alpha, beta, gamma, psi)
        tens = state.amplitudes.reshape((d,) * 5)
        for j, site in enumerate((3, 4)):
            ket = [0, 1, 2, 3, 4]
            bra = [0, 1, 2, 3, 4]
            bra[site] = 5
            rdm = np.einsum(tens, ket, tens.conj(), bra, [site, 5])
            vals[i, j] = float(np.vdot(psi, rdm @ psi).real)
    mean = np.mean(vals, axis=0)
    std = np.std(vals, axis=0)
    return AncillaFidelities(float(mean[0]), float(mean[1]), float(std[0]), float(std[1]))


def _penalty_matrix(d: int, weights: tuple[float, float, float]) -> np.ndarray:
    """Quadratic form whose value under the weight vector is the fidelity deficit."""
    a, b, c = weights
    off = 1.0 / (d + 1.0)
    return np.array(
        [
            [b + c, c * off, b * off],
            [c * off, a + c, a * off],
            [b * off, a * off, a + b],
        ]
    )


def _spherical_direction(angles: np.ndarray) -> np.ndarray:
    th, ph = angles
    return np.array(
        [math.cos(th), math.sin(th) * math.cos(ph), math.sin(th) * math.sin(ph)]
    )


def best_coefficients(
    d: int,
    weights: tuple[float, float, float],
    restarts: int = 10,
    seed: int | np.random.Generator = 0,
) -> BestCoefficients:
    """Weights maximizing a*F_A + b*F_B + c*F_C over the constraint quadric.

    The octant of nonnegative weight triples is parameterized by two angles
    and searched with multistart Nelder-Mead; the eigenvector of the
    generalized eigenproblem (penalty matrix versus block Gram matrix) with
    the smallest eigenvalue seeds the first start.
    """
    a, b, c = (float(x) for x in weights)
    if min(a, b, c) < 0.0 or a + b + c <= 0.0:
        raise ValueError("weights must be nonnegative and not all zero")
    gram = constraint_gram(d)
    pen = _penalty_matrix(d, (a, b, c))
    k = (d - 1.0) / d

    def value(angles: np.ndarray) -> float:
        u = _spherical_direction(angles)
        v = u / math.sqrt(float(u @ gram @ u))
        return (a + b + c) - k * float(v @ pen @ v)

    half = math.pi / 2.0
    starts = []
    evals, evecs = eigh(pen, gram)
    u0 = evecs[:, int(np.argmin(evals))]
    if u0.sum() < 0.0:
        u0 = -u0
    u0 = np.clip(u0, 0.0, None)
    if np.linalg.norm(u0) > 0.0:
        u0 = u0 / np.linalg.norm(u0)
        th = math.acos(min(1.0, max(-1.0, u0[0])))
        ph = math.atan2(u0[2], u0[1]) if th > 1e-12 else 0.0
        starts.append(np.clip([th, ph], 0.0, half))
    rng = rng_from(seed)
    while len(starts) < max(1, restarts):
        starts.append(rng.uniform(0.0, half, size=2))

    best_angles = None
    best_val = -math.inf
    for s in starts:
        res = minimize(
            lambda ang: -value(np.asarray(ang)),
            np.asarray(s, dtype=float),
            method="Nelder-Mead",
            bounds=[(0.0, half), (0.0, half)],
            options={"xatol": 1e-12, "fatol": 1e-12, "maxiter": 2000},
        )
        if -res.fun > best_val:
            best_val = -res.fun
            best_angles = np.asarray(res.x)
    assert best_angles is not None
    u = _spherical_direction(best_angles)
    v = u / math.sqrt(float(u @ gram @ u))
    coeffs = (float(v[0]), float(v[1]), float(v[2]))
    fids = analytic_fidelities(d, *coeffs)
    return BestCoefficients(coefficients=coeffs, fidelities=fids, value=best_val)
