"""Stimulated-emission optics realizing the asymmetric cloning machines.

A polarization-entangled photon-pair source amplifies one input photon, and
passive splitters plus polarization-independent beam splitters distribute
the photons over output arms; postselecting on arm photon counts leaves
clones whose polarization fidelities reproduce the closed-form machines.

States are sparse amplitude tables over Fock occupation keys: each spatial
mode label carries a (vertical, horizontal) pair of occupation numbers.
The pair source creates the jointly rotation-invariant combination

    K+ = a+_{V,S} a+_{H,I} - a+_{H,S} a+_{V,I},

and the component of exp(-i tau (K+ + K)) |in> with exactly k idler pairs
equals  sech(tau)^(N+2) (-i tanh tau)^k (K+)^k / k! |in>  for any N-photon
signal input (the two squeezing terms commute), so postselected quantities
are independent of the interaction strength and the simulation works
directly with (K+)^k/k!.  Beam splitters use the convention

    a+_1 -> sqrt(T) a+_1' + sqrt(1-T) a+_2',
    a+_2 -> sqrt(1-T) a+_1' - sqrt(T) a+_2'.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.sparse import dok_matrix
from scipy.sparse.linalg import expm_multiply

Key = tuple[int, ...]

RDM_TRACE_ATOL = 1e-14
AMPLITUDE_FLOOR = 1e-300


@dataclass(frozen=True)
class FockState:
    """Sparse multimode photon state; key layout is (V, H) per label."""

    labels: tuple[str, ...]
    table: dict[Key, complex]

    def mode_index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"no mode labeled {label!r}") from None

    def norm_squared(self) -> float:
        return float(sum(abs(a) ** 2 for a in self.table.values()))


def vacuum_state(labels: tuple[str, ...]) -> FockState:
    if len(set(labels)) != len(labels):
        raise ValueError("duplicate mode labels")
    return FockState(tuple(labels), {(0,) * (2 * len(labels)): 1.0 + 0.0j})


def polarized_input(psi: np.ndarray, n: int = 1) -> FockState:
    """n signal photons polarized along psi, idler empty; labels (S, I)."""
    if n < 1:
        raise ValueError("need at least one input photon")
    psi = np.asarray(psi, dtype=complex).reshape(2)
    nrm = np.linalg.norm(psi)
    if nrm == 0.0:
        raise ValueError("polarization vector must be nonzero")
    psi = psi / nrm
    table: dict[Key, complex] = {}
    for j in range(n + 1):
        amp = math.sqrt(math.comb(n, j)) * psi[0] ** j * psi[1] ** (n - j)
        if amp != 0.0:
            table[(j, n - j, 0, 0)] = complex(amp)
    return FockState(("S", "I"), table)


def _create(table: dict[Key, complex], idx: int, sign: float, out: dict[Key, complex]) -> None:
    for key, amp in table.items():
        n = key[idx]
        new = key[:idx] + (n + 1,) + key[idx + 1 :]
        out[new] = out.get(new, 0.0) + sign * amp * math.sqrt(n + 1.0)


def pair_sector(state: FockState, k: int, signal: str = "S", idler: str = "I") -> FockState:
    """Apply (K+)^k / k!: the exactly-k-pairs component of the amplifier."""
    if k < 0:
        raise ValueError("pair count must be nonnegative")
    i_s = 2 * state.mode_index(signal)
    i_i = 2 * state.mode_index(idler)
    table = dict(state.table)
    for _ in range(k):
        nxt: dict[Key, complex] = {}
        stage: dict[Key, complex] = {}
        _create(table, i_s, 1.0, stage)  # a+_{V,S}
        _create(stage, i_i + 1, 1.0, nxt)  # a+_{H,I}
        stage = {}
        _create(table, i_s + 1, 1.0, stage)  # a+_{H,S}
        _create(stage, i_i, -1.0, nxt)  # -a+_{V,I}
        table = nxt
    scale = 1.0 / math.factorial(k)
    return FockState(state.labels, {key: amp * scale for key, amp in table.items() if amp != 0.0})


def sector_prefactor(tau: float, n_signal: int, k: int) -> complex:
    """Amplitude multiplying (K+)^k/k! |in> in the full evolved state."""
    sech = 1.0 / math.cosh(tau)
    return sech ** (n_signal + 2) * (-1j * math.tanh(tau)) ** k


def photon_sector(state: FockState, total: int) -> FockState:
    """Component of the state with the given total photon number (all modes)."""
    if total < 0:
        raise ValueError("photon number must be nonnegative")
    return FockState(
        state.labels, {key: amp for key, amp in state.table.items() if sum(key) == total}
    )


def _truncated_amplifier(cutoff: int):
    """Sparse amplifier generator K+ + K on keys with at most `cutoff` photons.

    Basis keys are (V_S, H_S, V_I, H_I) occupations over the signal and
    idler modes; the matrix is real symmetric.
    """
    keys = [
        key
        for key in itertools.product(range(cutoff + 1), repeat=4)
        if sum(key) <= cutoff
    ]
    index = {key: i for i, key in enumerate(keys)}
    gen = dok_matrix((len(keys), len(keys)), dtype=float)
    for i, (vs, hs, vi, hi) in enumerate(keys):
        if vs + hs + vi + hi + 2 > cutoff:
            continue
        j = index[(vs + 1, hs, vi, hi + 1)]
        amp = math.sqrt((vs + 1.0) * (hi + 1.0))
        gen[j, i] += amp
        gen[i, j] += amp
        j = index[(vs, hs + 1, vi + 1, hi)]
        amp = math.sqrt((hs + 1.0) * (vi + 1.0))
        gen[j, i] -= amp
        gen[i, j] -= amp
    return keys, index, gen.tocsr()


def stimulated_pdc(
    psi: np.ndarray,
    pairs: int,
    n_photons: int = 1,
    tau: float = 0.1,
    engine: str = "sector",
    cutoff: int | None = None,
) -> FockState:
    """Amplifier output for n input photons polarized along psi.

    engine="sector" returns the exactly-`pairs` component of the evolved
    state with its closed-form amplitude sech(tau)^(n+2) (-i tanh tau)^k;
    this is exact and is what the scheme pipelines build on.

    engine="exponential" exponentiates the amplifier generator on a
    photon-number-truncated space (default cutoff n + 2*pairs + 4) and
    returns the full multi-sector state.  It exists as an independent check
    on the sector formula; truncation shows up as amplitude error near the
    cutoff, which `photon_sector` comparisons quantify.
    """
    if pairs < 0:
        raise ValueError("pair count must be nonnegative")
    if engine == "sector":
        st = pair_sector(polarized_input(psi, n_photons), pairs)
        pref = sector_prefactor(tau, n_photons, pairs)
        return FockState(st.labels, {k: pref * a for k, a in st.table.items()})
    if engine != "exponential":
        raise ValueError("engine must be 'sector' or 'exponential'")
    if cutoff is None:
        cutoff = n_photons + 2 * pairs + 4
    if cutoff < n_photons + 2 * pairs:
        raise ValueError("cutoff too small for the requested pair sector")
    base = polarized_input(psi, n_photons)
    keys, index, gen = _truncated_amplifier(cutoff)
    v0 = np.zeros(len(keys), dtype=complex)
    for key, amp in base.table.items():
        v0[index[key]] = amp
    vt = expm_multiply(-1j * tau * gen, v0)
    table = {
        keys[i]: complex(vt[i]) for i in np.flatnonzero(np.abs(vt) > AMPLITUDE_FLOOR)
    }
    return FockState(("S", "I"), table)


def add_vacuum_mode(state: FockState, label: str) -> FockState:
    if label in state.labels:
        raise ValueError(f"mode {label!r} already present")
    return FockState(
        state.labels + (label,), {key + (0, 0): amp for key, amp in state.table.items()}
    )


def rename_modes(state: FockState, mapping: dict[str, str]) -> FockState:
    new_labels = tuple(mapping.get(lbl, lbl) for lbl in state.labels)
    if len(set(new_labels)) != len(new_labels):
        raise ValueError("renaming collides labels")
    return FockState(new_labels, dict(state.table))


def beam_splitter(state: FockState, port1: str, port2: str, transmit: float) -> FockState:
    """Mix two spatial modes, identically for both polarizations."""
    t = float(transmit)
    if not 0.0 <= t <= 1.0:
        raise ValueError("transmittance must lie in [0, 1]")
    ct, st = math.sqrt(t), math.sqrt(1.0 - t)
    i1 = 2 * state.mode_index(port1)
    i2 = 2 * state.mode_index(port2)
    out: dict[Key, complex] = {}
    for key, amp in state.table.items():
        occ = (key[i1], key[i1 + 1], key[i2], key[i2 + 1])  # v1 h1 v2 h2
        base = amp / math.sqrt(
            math.factorial(occ[0]) * math.factorial(occ[1]) * math.factorial(occ[2]) * math.factorial(occ[3])
        )
        v1, h1, v2, h2 = occ
        for j1 in range(v1 + 1):
            cv1 = math.comb(v1, j1) * ct**j1 * st ** (v1 - j1)
            for j2 in range(v2 + 1):
                cv2 = math.comb(v2, j2) * st**j2 * (-ct) ** (v2 - j2)
                nv1, nv2 = j1 + j2, v1 + v2 - j1 - j2
                for l1 in range(h1 + 1):
                    ch1 = math.comb(h1, l1) * ct**l1 * st ** (h1 - l1)
                    for l2 in range(h2 + 1):
                        ch2 = math.comb(h2, l2) * st**l2 * (-ct) ** (h2 - l2)
                        nh1, nh2 = l1 + l2, h1 + h2 - l1 - l2
                        coef = base * cv1 * cv2 * ch1 * ch2
                        if coef == 0.0:
                            continue
                        coef *= math.sqrt(
                            math.factorial(nv1)
                            * math.factorial(nh1)
                            * math.factorial(nv2)
                            * math.factorial(nh2)
                        )
                        new = list(key)
                        new[i1], new[i1 + 1] = nv1, nh1
                        new[i2], new[i2 + 1] = nv2, nh2
                        nk = tuple(new)
                        out[nk] = out.get(nk, 0.0) + coef
    return FockState(state.labels, {k_: a for k_, a in out.items() if a != 0.0})


def split_mode(state: FockState, source: str, new_label: str, transmit: float = 0.5) -> FockState:
    """Tap a fraction (1 - transmit) of a mode into a fresh output arm.

    After projecting onto fixed photon counts per arm, results do not depend
    on the splitting ratio (it only rescales the kept amplitude), so the
    default is an even split.
    """
    return beam_splitter(add_vacuum_mode(state, new_label), source, new_label, transmit)


def postselect(state: FockState, counts: dict[str, int]) -> tuple[FockState, float]:
    """Keep components with the given total photon count per labeled arm.

    Returns the projected (unrenormalized) state and the conditional
    probability of the count pattern within the supplied state.
    """
    total = state.norm_squared()
    if total <= 0.0:
        raise ValueError("cannot postselect the zero state")
    idx = {label: 2 * state.mode_index(label) for label in counts}
    kept: dict[Key, complex] = {}
    for key, amp in state.table.items():
        if all(key[i] + key[i + 1] == counts[lbl] for lbl, i in idx.items()):
            kept[key] = amp
    prob = sum(abs(a) ** 2 for a in kept.values()) / total
    return FockState(state.labels, kept), float(prob)


def mode_polarization_rdm(state: FockState, label: str) -> np.ndarray:
    """Trace-normalized one-photon polarization state of one arm."""
    i = 2 * state.mode_index(label)
    r_vv = 0.0
    r_hh = 0.0
    r_vh = 0.0 + 0.0j  # <a+_H a_V>
    for key, amp in state.table.items():
        v, h = key[i], key[i + 1]
        p = abs(amp) ** 2
        r_vv += v * p
        r_hh += h * p
        if v >= 1:
            lowered = key[:i] + (v - 1, h + 1) + key[i + 2 :]
            other = state.table.get(lowered)
            if other is not None:
                r_vh += np.conj(other) * amp * math.sqrt(v * (h + 1.0))
    rho = np.array([[r_vv, r_vh], [np.conj(r_vh), r_hh]], dtype=complex)
    tr = float(rho[0, 0].real + rho[1, 1].real)
    if tr < RDM_TRACE_ATOL:
        raise ValueError(f"arm {label!r} carries no photons in this state")
    return rho / tr


def mode_fidelity(state: FockState, label: str, psi: np.ndarray) -> float:
    psi = np.asarray(psi, dtype=complex).reshape(2)
    psi = psi / np.linalg.norm(psi)
    rho = mode_polarization_rdm(state, label)
    return float(np.vdot(psi, rho @ psi).real)


class PairCloneResult(NamedTuple):
    """Two-arm clone fidelities and the count-pattern probability."""

    f_a: float
    f_b: float
    prob: float


class TripleCloneResult(NamedTuple):
    """Three-arm clone fidelities (descending) and the pattern probability."""

    f_a: float
    f_b: float
    f_c: float
    prob: float


def _default_psi(psi: np.ndarray | None) -> np.ndarray:
    if psi is None:
        return np.array([1.0, 0.0], dtype=complex)
    return np.asarray(psi, dtype=complex).reshape(2)


def simulate_11(transmit: float, psi: np.ndarray | None = None, split: float = 0.5) -> PairCloneResult:
    """Two-clone machine: amplify once, tap arm A, mix the rest with the idler.

    One photon enters the amplifier; the single-pair component is kept.  Arm
    A is tapped off the signal before a beam splitter of transmittance
    `transmit` mixes the remaining signal with the idler into arms B and D;
    one photon is then required in each arm.
    """
    psi = _default_psi(psi)
    st = pair_sector(polarized_input(psi), 1)
    st = split_mode(st, "S", "A", split)
    st = beam_splitter(st, "S", "I", transmit)
    st = rename_modes(st, {"S": "B", "I": "D"})
    st, prob = postselect(st, {"A": 1, "B": 1, "D": 1})
    return PairCloneResult(mode_fidelity(st, "A", psi), mode_fidelity(st, "B", psi), prob)


def analytic_11(transmit: float) -> tuple[float, float]:
    """Closed-form (F_A, F_B) for the two-clone machine at transmittance T."""
    t = float(transmit)
    w1 = (1.0 + t) ** 2
    w2 = (2.0 - t) ** 2
    w3 = (2.0 * t - 1.0) ** 2
    den = w1 + w2 + w3
    return (w1 + w2) / den, (w1 + w3) / den


def simulate_112(
    transmit: float,
    m_a: int,
    m_b: int,
    psi: np.ndarray | None = None,
    split: float = 0.5,
) -> PairCloneResult:
    """Three-photon machine: two-pair amplification, counts (m_a, m_b) kept.

    The double-pair component is kept, arm A is tapped off the signal, and
    the remaining signal meets the idler on a beam splitter feeding arms B
    and D.  The two photon-number patterns (m_a, m_b) in {(1, 2), (2, 1)}
    are distinct machines; arm D always keeps the remaining two photons.
    """
    if (m_a, m_b) not in {(1, 2), (2, 1)}:
        raise ValueError("(m_a, m_b) must be (1, 2) or (2, 1)")
    psi = _default_psi(psi)
    st = pair_sector(polarized_input(psi), 2)
    st = split_mode(st, "S", "A", split)
    st = beam_splitter(st, "S", "I", transmit)
    st = rename_modes(st, {"S": "B", "I": "D"})
    st, prob = postselect(st, {"A": m_a, "B": m_b, "D": 5 - m_a - m_b})
    return PairCloneResult(mode_fidelity(st, "A", psi), mode_fidelity(st, "B", psi), prob)


def analytic_112(transmit: float, m_a: int, m_b: int) -> tuple[float, float]:
    """Closed-form (F_A, F_B) for the three-photon machine branches."""
    t = float(transmit)
    if (m_a, m_b) == (1, 2):
        den = 12.0 * t * t - 12.0 * t + 9.0
        return (4.0 * t * t - 4.0 * t + 7.0) / den, (8.0 * t * t - 4.0 * t + 3.0) / den
    if (m_a, m_b) == (2, 1):
        den = 9.0 * t * t - 12.0 * t + 12.0
        return (3.0 * t * t - 4.0 * t + 8.0) / den, (7.0 * t * t - 4.0 * t + 4.0) / den
    raise ValueError("(m_a, m_b) must be (1, 2) or (2, 1)")


def simulate_1111(
    t1: float,
    t2: float,
    psi: np.ndarray | None = None,
    split: float = 0.5,
) -> TripleCloneResult:
    """Three-clone cascade: tap A, mix with idler, tap B, mix again for C.

    Both pairs are kept.  Arm A is tapped first; a beam splitter of
    transmittance t1 mixes signal and idler; arm B is tapped from the
    signal side; a second beam splitter of transmittance t2 mixes the rest
    with the idler arm into C and D.  One photon is required in each clone
    arm and two in D, and the clone fidelities are reported in descending
    order.
    """
    psi = _default_psi(psi)
    st = pair_sector(polarized_input(psi), 2)
    st = split_mode(st, "S", "A", split)
    st = beam_splitter(st, "S", "I", t1)
    st = split_mode(st, "S", "B", split)
    st = beam_splitter(st, "S", "I", t2)
    st = rename_modes(st, {"S": "C", "I": "D"})
    st, prob = postselect(st, {"A": 1, "B": 1, "C": 1, "D": 2})
    fids = sorted(
        (
            mode_fidelity(st, "A", psi),
            mode_fidelity(st, "B", psi),
            mode_fidelity(st, "C", psi),
        ),
        reverse=True,
    )
    return TripleCloneResult(fids[0], fids[1], fids[2], prob)
