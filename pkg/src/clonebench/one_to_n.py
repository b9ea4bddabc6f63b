"""Universal asymmetric 1 -> 1 + n qubit cloning machine.

One input qubit is turned into a single clone A plus n interchangeable clones
B_1..B_n by sandwiching the input (extended with maximally mixed blanks)
between a real combination of the two spin-block projectors:

    rho  ->  c * (alpha*S+ + beta*S-) (rho (x) 1^{(x)n}) (alpha*S+ + beta*S-)

The trade-off between the two clone qualities is the closed-form curve

    F_A = 1 - (2/3) y**2
    F_B = 1/2 + (y**2 + sqrt(n(n+2)) x y) / (3n),      x**2 + y**2 = 1,

and `param_bridge` recovers the (alpha, beta) pair realizing a given point of
the curve by root finding on the numerically evaluated map, which keeps the
curve and the constructive map independent of each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .linalg import haar_random_state, rng_from
from .symmetric import cg_projectors

BRIDGE_ATOL = 1e-8
_PROFILE_POINTS = 1441


@dataclass(frozen=True)
class TradeoffParam:
    """Point on the trade-off circle; x is derived as +sqrt(1 - y^2) if omitted."""

    y: float
    x: float | None = None

    def __post_init__(self) -> None:
        y = float(self.y)
        if not 0.0 <= y <= 1.0 + 1e-12:
            raise ValueError(f"y = {y} outside [0, 1]")
        y = min(y, 1.0)
        x = math.sqrt(max(0.0, 1.0 - y * y)) if self.x is None else float(self.x)
        if x < 0.0:
            raise ValueError("x must be nonnegative")
        if abs(x * x + y * y - 1.0) > 1e-12:
            raise ValueError("x and y must lie on the unit circle")
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "x", x)


class CloneFidelityStats(NamedTuple):
    """Haar-sampled clone fidelities: means, minima, spreads."""

    f_a: float
    f_b: float
    f_a_min: float
    f_b_min: float
    f_a_std: float
    f_b_std: float
    b_spread: float  # largest pairwise difference among the n B clones


@dataclass(frozen=True, eq=False)
class SandwichCloner:
    """Concrete 1 -> 1 + n machine with fixed projector weights."""

    n: int
    alpha: float
    beta: float
    norm_const: float
    operator: np.ndarray  # alpha*S+ + beta*S- on 2^(n+1) dimensions

    def output(self, rho: np.ndarray) -> np.ndarray:
        """Normalized (n+1)-qubit output for a single-qubit density matrix."""
        rho = np.asarray(rho, dtype=complex)
        if rho.shape != (2, 2):
            raise ValueError("input must be a 2x2 density matrix")
        blank = np.eye(2**self.n)
        a = self.operator
        return self.norm_const * (a @ np.kron(rho, blank) @ a.conj().T)

    def clone_fidelities(self, psi: np.ndarray) -> tuple[float, np.ndarray]:
        """(F_A, [F_B1..F_Bn]) for a pure input state psi."""
        psi = np.asarray(psi, dtype=complex).reshape(2)
        out = self.output(np.outer(psi, psi.conj()))
        m = self.n + 1
        fa = _site_fidelity(out, m, 0, psi)
        fbs = np.array([_site_fidelity(out, m, 1 + i, psi) for i in range(self.n)])
        return fa, fbs


def _site_fidelity(mat: np.ndarray, n_qubits: int, site: int, psi: np.ndarray) -> float:
    """<psi| rho_site |psi> from the single-qubit reduced state of `mat`."""
    dims = (2,) * n_qubits
    tens = mat.reshape(dims + dims)
    row = list(range(n_qubits))
    col = [i if i != site else n_qubits for i in range(n_qubits)]
    rdm = np.einsum(tens, row + col, [site, n_qubits])
    val = np.vdot(psi, rdm @ psi)
    return float(val.real)


@lru_cache(maxsize=None)
def _blocks(n: int) -> tuple[np.ndarray, np.ndarray]:
    proj = cg_projectors(n)
    return proj.s_plus, proj.s_minus


def build_sandwich(n: int, alpha: float, beta: float) -> SandwichCloner:
    """Assemble the machine and its input-independent normalization constant."""
    if n == 1:
        raise ValueError(
            "n = 1 is the two-output machine; use the tripartite module with gamma = 0"
        )
    if n < 2:
        raise ValueError("n must be at least 2")
    alpha = float(alpha)
    beta = float(beta)
    if alpha == 0.0 and beta == 0.0:
        raise ValueError("(alpha, beta) must not both vanish")
    s_plus, s_minus = _blocks(n)
    op = alpha * s_plus + beta * s_minus
    zero = np.zeros(2, dtype=complex)
    zero[0] = 1.0
    trace = _sandwich_trace(op, n, zero)
    if trace <= 0.0:
        raise ValueError("degenerate sandwich operator: zero output trace")
    cloner = SandwichCloner(n=n, alpha=alpha, beta=beta, norm_const=1.0 / trace, operator=op)
    # spot check that the normalization really is input independent
    rng = rng_from(12021)
    for _ in range(3):
        psi = haar_random_state(2, rng).amplitudes
        t = _sandwich_trace(op, n, psi)
        assert abs(t * cloner.norm_const - 1.0) <= 1e-9
    return cloner


def _sandwich_trace(op: np.ndarray, n: int, psi: np.ndarray) -> float:
    emb = np.kron(np.outer(psi, psi.conj()), np.eye(2**n))
    return float(np.trace(op @ emb @ op.conj().T).real)


def numeric_fidelities(
    cloner: SandwichCloner, samples: int = 50, seed: int | np.random.Generator = 0
) -> CloneFidelityStats:
    """Clone fidelities over Haar-random inputs (mean, min, spread)."""
    if samples < 1:
        raise ValueError("samples must be positive")
    rng = rng_from(seed)
    fa_vals = np.empty(samples)
    fb_vals = np.empty(samples)
    spread = 0.0
    for i in range(samples):
        psi = haar_random_state(2, rng).amplitudes
        fa, fbs = cloner.clone_fidelities(psi)
        fa_vals[i] = fa
        fb_vals[i] = float(np.mean(fbs))
        spread = max(spread, float(np.max(fbs) - np.min(fbs)))
    return CloneFidelityStats(
        f_a=float(np.mean(fa_vals)),
        f_b=float(np.mean(fb_vals)),
        f_a_min=float(np.min(fa_vals)),
        f_b_min=float(np.min(fb_vals)),
        f_a_std=float(np.std(fa_vals)),
        f_b_std=float(np.std(fb_vals)),
        b_spread=spread,
    )


def analytic_tradeoff(n: int, p: TradeoffParam) -> tuple[float, float]:
    """Closed-form (F_A, F_B) on the optimal trade-off curve."""
    if n < 2:
        raise ValueError("n must be at least 2")
    y2 = p.y * p.y
    f_a = 1.0 - (2.0 / 3.0) * y2
    f_b = 0.5 + (y2 + math.sqrt(n * (n + 2.0)) * p.x * p.y) / (3.0 * n)
    return f_a, f_b


def frontier_peak_y(n: int) -> float:
    """y at which F_B reaches its maximum (2n+1)/(3n) along the curve.

    Beyond this point both fidelities decrease together, so the segment
    [0, peak] is the non-dominated part of the curve.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    return math.sqrt((n + 2.0) / (2.0 * (n + 1.0)))


@lru_cache(maxsize=None)
def _fidelity_profile(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Numeric (F_A, F_B) along the (alpha, beta) half circle, single input |0>."""
    thetas = np.linspace(-math.pi / 2.0, math.pi / 2.0, _PROFILE_POINTS)
    fa = np.empty_like(thetas)
    fb = np.empty_like(thetas)
    for i, th in enumerate(thetas):
        fa[i], fb[i] = _fidelities_at(n, th)
    return thetas, fa, fb


def _fidelities_at(n: int, theta: float) -> tuple[float, float]:
    s_plus, s_minus = _blocks(n)
    op = math.cos(theta) * s_plus + math.sin(theta) * s_minus
    psi = np.zeros(2, dtype=complex)
    psi[0] = 1.0
    emb = np.kron(np.outer(psi, psi.conj()), np.eye(2**n))
    out = op @ emb @ op.conj().T
    tr = float(np.trace(out).real)
    out /= tr
    m = n + 1
    fa = _site_fidelity(out, m, 0, psi)
    fb = _site_fidelity(out, m, 1, psi)
    return fa, fb


def _root_candidates(thetas: np.ndarray, values: np.ndarray, func, target: float) -> list[float]:
    """Roots of func(theta) - target: sign changes plus tangential minima."""
    g = values - target
    roots: list[float] = []
    for i in range(len(thetas) - 1):
        a, b = g[i], g[i + 1]
        if a == 0.0:
            roots.append(float(thetas[i]))
        elif a * b < 0.0:
            roots.append(float(brentq(lambda t: func(t) - target, thetas[i], thetas[i + 1], xtol=1e-14)))
    if g[-1] == 0.0:
        roots.append(float(thetas[-1]))
    # tangential contact: |g| has a local minimum close to zero without a sign change
    absg = np.abs(g)
    near = absg < 5e-3
    for i in range(1, len(thetas) - 1):
        if near[i] and absg[i] <= absg[i - 1] and absg[i] <= absg[i + 1] and g[i - 1] * g[i + 1] > 0.0:
            res = minimize_scalar(
                lambda t: (func(t) - target) ** 2,
                bounds=(float(thetas[i - 1]), float(thetas[i + 1])),
                method="bounded",
                options={"xatol": 1e-13},
            )
            roots.append(float(res.x))
    return roots


def param_bridge(n: int, p: TradeoffParam) -> tuple[float, float]:
    """(alpha, beta) whose sandwich machine realizes the curve point p.

    Found by root finding on the numerically evaluated fidelities over the
    projector-weight half circle; both fidelities must match the closed forms
    within BRIDGE_ATOL or a ValueError is raised.
    """
    target_a, target_b = analytic_tradeoff(n, p)
    thetas, fa, fb = _fidelity_profile(n)
    func_a = lambda t: _fidelities_at(n, t)[0]  # noqa: E731
    func_b = lambda t: _fidelities_at(n, t)[1]  # noqa: E731
    candidates = _root_candidates(thetas, fa, func_a, target_a)
    candidates += _root_candidates(thetas, fb, func_b, target_b)
    if not candidates:
        raise ValueError(f"no (alpha, beta) matches the curve point y = {p.y}")
    best = None
    best_res = math.inf
    for th in candidates:
        va, vb = _fidelities_at(n, th)
        res = max(abs(va - target_a), abs(vb - target_b))
        if res < best_res:
            best_res = res
            best = th
    if best is None or best_res > BRIDGE_ATOL:
        raise ValueError(
            f"curve point y = {p.y} not reproduced within {BRIDGE_ATOL:.1e} "
            f"(best residual {best_res:.3e})"
        )
    return math.cos(best), math.sin(best)


def estimation_limit(y: float) -> tuple[float, float]:
    """(F_A, F_meas) for keeping one clone and measuring infinitely many others.

    Valid for 0 <= y <= 1/sqrt(2); outside this range the curve is not the
    optimal retain-versus-measure trade-off.
    """
    y = float(y)
    upper = 1.0 / math.sqrt(2.0)
    if y < -1e-15 or y > upper + 1e-12:
        raise ValueError(f"y = {y} outside [0, 1/sqrt(2)]")
    y = min(max(y, 0.0), upper)
    f_a = 1.0 - (2.0 / 3.0) * y * y
    f_meas = 0.5 + (y * math.sqrt(1.0 - y * y)) / 3.0
    return f_a, f_meas
