"""Dense complex linear algebra over labeled tensor-product Hilbert spaces.

All values are plain numpy arrays wrapped with a layout that names the tensor
factors.  Subsystem order is canonical: the layout order fixes the Kronecker
order, and any reordering has to be asked for explicitly.  Objects are treated
as immutable; every operation returns a new object.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

# Construction-time guards and the default tolerance for numeric assertions.
NORM_ATOL = 1e-12
HERMITICITY_ATOL = 1e-10
DENSITY_HERMITICITY_ATOL = 1e-12
TRACE_ATOL = 1e-10
PSD_ATOL = 1e-10
EQUALITY_ATOL = 1e-9


def rng_from(seed: int | np.random.Generator) -> np.random.Generator:
    """Accept either an integer seed or a ready Generator (PCG64: portable)."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(int(seed))


@dataclass(frozen=True)
class SubsystemLayout:
    """Ordered, labeled tensor factors of a Hilbert space."""

    subsystems: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        subs = tuple((str(lab), int(dim)) for lab, dim in self.subsystems)
        object.__setattr__(self, "subsystems", subs)
        labels = [lab for lab, _ in subs]
        if len(labels) == 0:
            raise ValueError("layout needs at least one subsystem")
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate subsystem labels: {labels}")
        if any(dim < 1 for _, dim in subs):
            raise ValueError("subsystem dimensions must be positive")

    @classmethod
    def of(cls, *subsystems: tuple[str, int]) -> "SubsystemLayout":
        return cls(tuple(subsystems))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(lab for lab, _ in self.subsystems)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(dim for _, dim in self.subsystems)

    @property
    def dim(self) -> int:
        return math.prod(self.dims)

    def index(self, label: str) -> int:
        for i, (lab, _) in enumerate(self.subsystems):
            if lab == label:
                return i
        raise ValueError(f"unknown subsystem label {label!r} (have {self.labels})")

    def dim_of(self, label: str) -> int:
        return self.subsystems[self.index(label)][1]

    def merged(self, other: "SubsystemLayout") -> "SubsystemLayout":
        overlap = set(self.labels) & set(other.labels)
        if overlap:
            raise ValueError(f"duplicate labels in tensor product: {sorted(overlap)}")
        return SubsystemLayout(self.subsystems + other.subsystems)


def qubits(*labels: str) -> SubsystemLayout:
    """Convenience layout of two-level subsystems."""
    return SubsystemLayout(tuple((lab, 2) for lab in labels))


@dataclass(frozen=True, eq=False)
class StateVector:
    """Pure state over a labeled layout."""

    layout: SubsystemLayout
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        object.__setattr__(self, "amplitudes", amps)
        if amps.shape[0] != self.layout.dim:
            raise ValueError(
                f"amplitude length {amps.shape[0]} does not match layout dimension {self.layout.dim}"
            )

    @classmethod
    def normalized(cls, layout: SubsystemLayout, amplitudes: np.ndarray) -> "StateVector":
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        nrm = np.linalg.norm(amps)
        if nrm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        state = cls(layout, amps / nrm)
        assert abs(state.norm - 1.0) <= NORM_ATOL
        return state

    @property
    def dim(self) -> int:
        return self.layout.dim

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def density(self) -> "DensityOperator":
        v = self.amplitudes
        return DensityOperator(self.layout, np.outer(v, v.conj()))

    def overlap(self, other: "StateVector") -> complex:
        if other.dim != self.dim:
            raise ValueError("dimension mismatch in overlap")
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Operator over a labeled layout; validation is explicit via validated()."""

    layout: SubsystemLayout
    matrix: np.ndarray

    def __post_init__(self) -> None:
        mat = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", mat)
        d = self.layout.dim
        if mat.shape != (d, d):
            raise ValueError(f"matrix shape {mat.shape} does not match layout dimension {d}")

    @property
    def dim(self) -> int:
        return self.layout.dim

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def validated(
        self,
        hermiticity_atol: float = DENSITY_HERMITICITY_ATOL,
        trace_atol: float = TRACE_ATOL,
        psd_atol: float = PSD_ATOL,
    ) -> "DensityOperator":
        """Check the density-matrix invariants; return self on success."""
        m = self.matrix
        herm = float(np.max(np.abs(m - m.conj().T)))
        if herm > hermiticity_atol:
            raise ValueError(f"not Hermitian: residual {herm:.3e}")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > trace_atol:
            raise ValueError(f"trace {tr} is not 1 within {trace_atol:.1e}")
        lo = float(np.linalg.eigvalsh((m + m.conj().T) / 2.0)[0])
        if lo < -psd_atol:
            raise ValueError(f"not positive semidefinite: min eigenvalue {lo:.3e}")
        return self


def tensor(a: StateVector | DensityOperator, b: StateVector | DensityOperator):
    """Kronecker product of two states or two operators (layouts merged)."""
    layout = a.layout.merged(b.layout)
    if isinstance(a, StateVector) and isinstance(b, StateVector):
        return StateVector(layout, np.kron(a.amplitudes, b.amplitudes))
    if isinstance(a, DensityOperator) and isinstance(b, DensityOperator):
        return DensityOperator(layout, np.kron(a.matrix, b.matrix))
    raise TypeError("tensor expects two StateVector or two DensityOperator arguments")


def partial_trace(op: DensityOperator, keep: Iterable[str]) -> DensityOperator:
    """Trace out every subsystem not listed in `keep`.

    The kept subsystems stay in their original layout order regardless of the
    order they are listed in.
    """
    keep_set = set(keep)
    unknown = keep_set - set(op.layout.labels)
    if unknown:
        raise ValueError(f"unknown labels in keep: {sorted(unknown)}")
    if not keep_set:
        raise ValueError("keep must name at least one subsystem")
    dims = op.layout.dims
    n = len(dims)
    tens = op.matrix.reshape(dims + dims)
    row = list(range(n))
    col = list(range(n, 2 * n))
    out: list[int] = []
    for i, lab in enumerate(op.layout.labels):
        if lab in keep_set:
            out.append(i)
        else:
            col[i] = i  # contract bra against ket
    out_idx = out + [c + n for c in out]
    reduced = np.einsum(tens, row + col, out_idx)
    kept = tuple(s for s in op.layout.subsystems if s[0] in keep_set)
    new_layout = SubsystemLayout(kept)
    d = new_layout.dim
    return DensityOperator(new_layout, reduced.reshape(d, d))


def eig_hermitian(matrix: np.ndarray, hermiticity_atol: float = HERMITICITY_ATOL):
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Returns (w, V) with V[:, i] the eigenvector of w[i].
    """
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    herm = float(np.max(np.abs(m - m.conj().T)))
    if herm > hermiticity_atol:
        raise ValueError(f"matrix is not Hermitian: residual {herm:.3e}")
    w, v = np.linalg.eigh((m + m.conj().T) / 2.0)
    order = np.argsort(w)[::-1]
    return w[order], v[:, order]


def haar_random_state(d: int, seed: int | np.random.Generator, label: str = "q") -> StateVector:
    """Haar-distributed pure state on C^d (normalized complex Gaussian vector)."""
    if d < 2:
        raise ValueError("dimension must be at least 2")
    rng = rng_from(seed)
    amps = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    while np.linalg.norm(amps) == 0.0:  # pragma: no cover
        amps = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return StateVector.normalized(SubsystemLayout.of((label, d)), amps)


def haar_random_unitary(d: int, seed: int | np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary: QR of a Ginibre matrix with phase fix."""
    rng = rng_from(seed)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


def fidelity_pure(rho: DensityOperator, psi: StateVector) -> float:
    """<psi| rho |psi> for a (sub)normalized density operator and a pure state."""
    if rho.dim != psi.dim:
        raise ValueError(f"dimension mismatch: operator {rho.dim}, state {psi.dim}")
    val = complex(np.vdot(psi.amplitudes, rho.matrix @ psi.amplitudes))
    if abs(val.imag) > 1e-12:
        raise ValueError(f"fidelity has imaginary residue {val.imag:.3e}")
    return float(min(1.0, max(0.0, val.real)))


def fidelity_to_eta(fidelity: float, d: int) -> float:
    """Shrinking factor eta with F = eta + (1 - eta)/d on C^d.

    Only defined for fidelities between the maximally mixed value 1/d and 1.
    """
    if d < 2:
        raise ValueError("dimension must be at least 2")
    lo = 1.0 / d
    if fidelity < lo - 1e-12 or fidelity > 1.0 + 1e-12:
        raise ValueError(f"fidelity {fidelity} outside [{lo}, 1]")
    f = min(1.0, max(lo, fidelity))
    return (f - lo) / (1.0 - lo)
