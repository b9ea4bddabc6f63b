"""Symmetric subspaces of qubit registers and the two angular-momentum blocks
obtained when one extra qubit is coupled to a fully symmetric n-qubit register.

Conventions: qubit 0 is the most significant Kronecker factor, and computational
basis index b has qubit i in state (b >> (n-1-i)) & 1.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .linalg import StateVector, SubsystemLayout

MAX_REGISTER = 6  # permutation-sum construction is kept to small registers


@lru_cache(maxsize=None)
def _sym_projector_cached(n: int) -> np.ndarray:
    dim = 2**n
    weights = 2 ** np.arange(n - 1, -1, -1)
    # bits[b, i] = state of qubit i in basis index b
    bits = (np.arange(dim)[:, None] >> np.arange(n - 1, -1, -1)[None, :]) & 1
    proj = np.zeros((dim, dim))
    src = np.arange(dim)
    for perm in itertools.permutations(range(n)):
        dest = bits[:, perm] @ weights
        np.add.at(proj, (dest, src), 1.0)
    proj /= math.factorial(n)
    proj.setflags(write=False)
    return proj


def sym_projector(n: int) -> np.ndarray:
    """Projector onto the symmetric subspace of n qubits (rank n + 1).

    Built as the average of all n! qubit-permutation operators.
    """
    if n < 1:
        raise ValueError("register size must be at least 1")
    if n > MAX_REGISTER + 1:
        raise ValueError(f"register size {n} exceeds supported maximum {MAX_REGISTER + 1}")
    return np.array(_sym_projector_cached(n))


def dicke_state(n: int, k: int) -> StateVector:
    """Equal-weight superposition of all n-qubit basis states with k excitations."""
    if n < 1:
        raise ValueError("register size must be at least 1")
    if not 0 <= k <= n:
        raise ValueError(f"excitation number {k} outside [0, {n}]")
    dim = 2**n
    amps = np.zeros(dim, dtype=complex)
    for b in range(dim):
        if bin(b).count("1") == k:
            amps[b] = 1.0
    layout = SubsystemLayout(tuple((f"q{i}", 2) for i in range(n)))
    return StateVector.normalized(layout, amps)


@dataclass(frozen=True, eq=False)
class CGProjectors:
    """Orthogonal projectors onto the two total-spin blocks of one qubit coupled
    to the symmetric subspace of n further qubits.

    s_plus projects onto the fully symmetric block of all n + 1 qubits
    (rank n + 2); s_minus onto its complement inside qubit (x) Sym(n) (rank n).
    """

    n: int
    s_plus: np.ndarray
    s_minus: np.ndarray

    @property
    def dim(self) -> int:
        return 2 ** (self.n + 1)


def cg_projectors(n: int) -> CGProjectors:
    """Both spin-block projectors for 1 qubit + a symmetric n-qubit register."""
    if n < 2:
        raise ValueError("n must be at least 2 (a single extra copy has no two-block split here)")
    if n > MAX_REGISTER:
        raise ValueError(f"n = {n} exceeds supported maximum {MAX_REGISTER}")
    s_plus = sym_projector(n + 1)
    s_minus = np.kron(np.eye(2), sym_projector(n)) - s_plus
    return CGProjectors(n=n, s_plus=s_plus, s_minus=s_minus)
