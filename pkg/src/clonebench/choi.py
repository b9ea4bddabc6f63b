"""Independent route to optimal asymmetric cloners via channel operators.

A cloning channel taking one d-level input to m clones is represented by its
channel operator S on (input x output), positive semidefinite with
Tr_out S = 1_in.  The Haar-averaged weighted fidelity sum is linear in S,

    sum_X w_X F_X = Tr[S L(w)],
    L(w) = sum_X w_X * (pair kernel on (input, clone X)) (x) identity,

with the two-site pair kernel

    integral dpsi  psi^T (x) psi  =  (1 + d |Phi><Phi|) / (d (d + 1)).

Because Tr S = d, the value is bounded by d * lambda_max(L), and the bound
is reached by S = (d / r) P with P the projector onto the top eigenspace
(rank r): L commutes with conj(U) (x) U^{(x)m} for every unitary U, hence so
does P, and its partial trace over the outputs is a multiple of the
identity, which is exactly the trace-preservation condition.

This route never touches the constructive machines in the companion
modules, so agreement between the two is a real consistency check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .linalg import eig_hermitian, haar_random_state, rng_from

DEGENERACY_ATOL = 1e-10
TP_ATOL = 1e-8
MAX_TOTAL_DIM = 4096


def max_entangled(d: int) -> np.ndarray:
    """|Phi> = d^{-1/2} sum_j |jj> as a length d^2 vector."""
    if d < 2:
        raise ValueError("d must be at least 2")
    phi = np.zeros(d * d, dtype=complex)
    phi[:: d + 1] = 1.0 / np.sqrt(d)
    return phi


def haar_pair_kernel(d: int) -> np.ndarray:
    """Exact Haar average of psi^T (x) psi on two d-level sites."""
    phi = max_entangled(d)
    return (np.eye(d * d) + d * np.outer(phi, phi.conj())) / (d * (d + 1.0))


def _embed_pair(pair: np.ndarray, d: int, n_sites: int, site: int) -> np.ndarray:
    """Operator acting as `pair` on sites (0, site) and trivially elsewhere."""
    m = n_sites - 2
    full = np.kron(pair, np.eye(d**m)) if m else np.asarray(pair, dtype=complex)
    order = [0, site] + [k for k in range(1, n_sites) if k != site]
    inv = np.argsort(order)
    dims = (d,) * n_sites
    tens = full.reshape(dims + dims)
    tens = tens.transpose(tuple(inv) + tuple(n_sites + i for i in inv))
    return np.ascontiguousarray(tens.reshape(d**n_sites, d**n_sites))


def score_operator(d: int, weights: tuple[float, ...]) -> np.ndarray:
    """L(w) on input (x) clones; Tr[S L] is the weighted fidelity sum."""
    weights = tuple(float(w) for w in weights)
    if len(weights) < 1:
        raise ValueError("need at least one clone weight")
    if min(weights) < 0.0 or sum(weights) <= 0.0:
        raise ValueError("weights must be nonnegative and not all zero")
    n_sites = len(weights) + 1
    if d**n_sites > MAX_TOTAL_DIM:
        raise ValueError("total dimension too large")
    kernel = haar_pair_kernel(d)
    total = np.zeros((d**n_sites, d**n_sites), dtype=complex)
    for x, w in enumerate(weights, start=1):
        if w != 0.0:
            total += w * _embed_pair(kernel, d, n_sites, x)
    return total


def apply_choi(choi: np.ndarray, rho: np.ndarray, d_in: int) -> np.ndarray:
    """Channel output Tr_in[(rho^T (x) 1) S] for the given channel operator."""
    choi = np.asarray(choi, dtype=complex)
    d_out = choi.shape[0] // d_in
    if choi.shape != (d_in * d_out, d_in * d_out):
        raise ValueError("channel operator shape incompatible with d_in")
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (d_in, d_in):
        raise ValueError("input state has wrong dimension")
    s4 = choi.reshape(d_in, d_out, d_in, d_out)
    return np.einsum("ki,kaib->ab", rho, s4)


class ChoiResiduals(NamedTuple):
    """How far an operator is from being a valid channel operator.

    All three are reported unconditionally; nothing is thrown.
    """

    psd: float
    trace_preserving: float
    total_trace: float


def choi_residuals(choi: np.ndarray, d_in: int) -> ChoiResiduals:
    """PSD / trace-preservation / total-trace defects of a channel operator."""
    choi = np.asarray(choi, dtype=complex)
    d_out = choi.shape[0] // d_in
    if choi.shape != (d_in * d_out, d_in * d_out):
        raise ValueError("channel operator shape incompatible with d_in")
    herm = (choi + choi.conj().T) / 2.0
    lo = float(np.linalg.eigvalsh(herm)[0])
    psd = max(0.0, -lo) + float(np.max(np.abs(choi - herm)))
    s4 = choi.reshape(d_in, d_out, d_in, d_out)
    tr_out = np.einsum("iaja->ij", s4)
    tp = float(np.max(np.abs(tr_out - np.eye(d_in))))
    total = float(abs(np.trace(choi) - d_in))
    return ChoiResiduals(psd=psd, trace_preserving=tp, total_trace=total)


@dataclass(frozen=True, eq=False)
class OptimalCloner:
    """Top-eigenspace channel saturating the weighted-fidelity bound."""

    d: int
    weights: tuple[float, ...]
    lam_max: float
    rank: int
    value: float  # = d * lam_max = achieved weighted fidelity sum
    fidelities: tuple[float, ...]  # per-clone Tr[S L_X]
    choi: np.ndarray

    @property
    def n_clones(self) -> int:
        return len(self.weights)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return apply_choi(self.choi, rho, self.d)

    def clone_fidelities(self, psi: np.ndarray) -> tuple[float, ...]:
        """Per-clone fidelities for a pure input state."""
        d, m = self.d, self.n_clones
        psi = np.asarray(psi, dtype=complex).reshape(d)
        out = self.apply(np.outer(psi, psi.conj()))
        tens = out.reshape((d,) * (2 * m))
        vals = []
        for site in range(m):
            ket = list(range(m))
            bra = list(range(m))
            bra[site] = 2 * m
            rdm = np.einsum(tens, ket + bra, [site, 2 * m])
            vals.append(float(np.vdot(psi, rdm @ psi).real))
        return tuple(vals)


def _tp_element_of_span(top: np.ndarray, d: int, d_out: int) -> np.ndarray:
    """Trace-preserving PSD operator supported on the given orthonormal span.

    Solves the linear system Tr_out(V H V^dag) = 1_in for a small Hermitian
    H in span coordinates by least squares, then clips H to the PSD cone.
    Used only when the isotropic mixture of the span is not itself trace
    preserving (a genuinely degenerate top eigenspace).
    """
    r = top.shape[1]
    v4 = top.reshape(d, d_out, r)
    # t[k, l, i, j] multiplies H[k, l] in the (i, j) entry of Tr_out S.
    t = np.einsum("iak,jal->klij", v4, v4.conj())
    a = t.reshape(r * r, d * d).T
    b = np.eye(d, dtype=complex).reshape(-1)
    a_real = np.vstack([a.real, a.imag])
    b_real = np.concatenate([b.real, b.imag])
    h_flat, *_ = np.linalg.lstsq(a_real, b_real, rcond=None)
    h = h_flat.reshape(r, r)
    h = (h + h.conj().T) / 2.0
    w, u = np.linalg.eigh(h)
    h = (u * np.maximum(w, 0.0)) @ u.conj().T
    return top @ h @ top.conj().T


def optimize_cloner(d: int, weights: tuple[float, ...]) -> OptimalCloner:
    """Best channel for the weighted fidelity sum, from the top eigenspace.

    Weights are normalized to sum to one, so the returned value is the
    convex mixture sum_X w_X F_X.  The isotropic mixture of the top
    eigenspace is used whenever it is trace preserving (it is, at every
    weight triple exercised here, by the covariance of L); otherwise a
    trace-preserving element of the eigenspace is found by least squares.
    """
    weights = tuple(float(w) for w in weights)
    if min(weights) < 0.0 or sum(weights) <= 0.0:
        raise ValueError("weights must be nonnegative and not all zero")
    weights = tuple(w / sum(weights) for w in weights)
    total = score_operator(d, weights)
    evals, evecs = eig_hermitian(total)
    lam = float(evals[0])
    cut = lam - max(DEGENERACY_ATOL, abs(lam) * 1e-9)
    rank = int(np.sum(evals >= cut))
    top = evecs[:, :rank]
    proj = top @ top.conj().T
    n_sites = len(weights) + 1
    d_out = d ** (n_sites - 1)
    p4 = proj.reshape(d, d_out, d, d_out)
    tr_out = np.einsum("iaja->ij", p4)
    dev = np.max(np.abs(tr_out - (rank / d) * np.eye(d)))
    if dev <= TP_ATOL:
        choi = (d / rank) * proj
    else:
        choi = _tp_element_of_span(top, d, d_out)
        residual = choi_residuals(choi, d).trace_preserving
        if residual > TP_ATOL:
            raise RuntimeError(
                "top eigenspace admits no trace-preserving element "
                f"(best residual {residual:.3e})"
            )
    kernel = haar_pair_kernel(d)
    fids = tuple(
        float(np.trace(choi @ _embed_pair(kernel, d, n_sites, x)).real)
        for x in range(1, n_sites)
    )
    value = float(np.trace(choi @ total).real)
    return OptimalCloner(
        d=d,
        weights=weights,
        lam_max=lam,
        rank=rank,
        value=value,
        fidelities=fids,
        choi=choi,
    )


class SampledKernel(NamedTuple):
    """Monte-Carlo estimate with entrywise standard errors of Re and Im."""

    mean: np.ndarray
    se_real: np.ndarray
    se_imag: np.ndarray
    samples: int

    def max_z(self, reference: np.ndarray) -> float:
        """Largest entrywise |mean - reference| in units of standard errors.

        Entries whose sampled standard error vanishes (structurally constant
        statistics) must match exactly and contribute 0 or inf.
        """
        ref = np.asarray(reference, dtype=complex)
        zs = []
        for diff, se in (
            (np.abs(self.mean.real - ref.real), self.se_real),
            (np.abs(self.mean.imag - ref.imag), self.se_imag),
        ):
            ok = se > 0.0
            zs.append(np.max(diff[ok] / se[ok]) if ok.any() else 0.0)
            if np.any(diff[~ok] > 0.0):
                return float("inf")
        return float(max(zs))


def sampled_pair_kernel(
    d: int,
    samples: int,
    seed: int | np.random.Generator = 0,
    batch: int = 4096,
) -> SampledKernel:
    """Monte-Carlo estimate of the two-site Haar pair kernel.

    Each Haar sample contributes psi^T (x) psi, a rank-one projector onto
    conj(psi) (x) psi; the entrywise mean converges to `haar_pair_kernel`.
    Standard errors of the real and imaginary parts let callers form
    z-statistics against the closed form.
    """
    if samples < 2:
        raise ValueError("need at least two samples")
    rng = rng_from(seed)
    dim = d * d
    s1 = np.zeros((dim, dim), dtype=complex)
    s2_re = np.zeros((dim, dim))
    s2_im = np.zeros((dim, dim))
    done = 0
    while done < samples:
        nb = min(batch, samples - done)
        states = rng.normal(size=(nb, d)) + 1j * rng.normal(size=(nb, d))
        states /= np.linalg.norm(states, axis=1, keepdims=True)
        vecs = np.einsum("ni,nj->nij", states.conj(), states).reshape(nb, dim)
        mats = np.einsum("ni,nj->nij", vecs, vecs.conj())
        s1 += mats.sum(axis=0)
        s2_re += (mats.real**2).sum(axis=0)
        s2_im += (mats.imag**2).sum(axis=0)
        done += nb
    mean = s1 / samples
    var_re = np.maximum(s2_re / samples - mean.real**2, 0.0)
    var_im = np.maximum(s2_im / samples - mean.imag**2, 0.0)
    corr = samples / (samples - 1.0)
    se_re = np.sqrt(var_re * corr / samples)
    se_im = np.sqrt(var_im * corr / samples)
    return SampledKernel(mean=mean, se_real=se_re, se_imag=se_im, samples=samples)
