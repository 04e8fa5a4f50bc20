"""Orthogonal Jacobi transform and the relative fermionic modes it induces.

Row b < n of R combines the first b+1 particle coordinates into a relative
coordinate, y_b = (x_1 + ... + x_b - b x_{b+1}) / sqrt(b(b+1)); the last row
is the normalized center of mass y_n = (x_1 + ... + x_n)/sqrt(n). The same
matrix rotates the fermionic modes, phi_k = sum_l R_{kl} psi_l, which
preserves the anticommutation relations because R is orthogonal.

States built from phi+_1 .. phi+_{n-1} alone span the "relative" subspace on
which the exchange operators K_ij act through the hook representations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

import numpy as np

from .errors import InvalidModeError, InvalidSectorError
from .fock import SparseOperator, creation_matrix, enumerate_basis, full_creation

__all__ = [
    "JacobiMatrix",
    "PhiBasis",
    "build_R",
    "phi_creation_matrix",
    "full_phi_creation",
    "build_phi_basis",
]


@dataclass(frozen=True)
class JacobiMatrix:
    n: int
    entries: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        self.entries.flags.writeable = False

    def row(self, k: int) -> np.ndarray:
        """1-based row k."""
        return self.entries[k - 1]


@lru_cache(maxsize=None)
def build_R(n: int) -> JacobiMatrix:
    """The n x n orthogonal Jacobi matrix."""
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise InvalidModeError(f"need at least two particles, got n={n!r}")
    R = np.zeros((n, n))
    for b in range(1, n):
        norm = 1.0 / math.sqrt(b * (b + 1))
        R[b - 1, :b] = norm
        R[b - 1, b] = -b * norm
    R[n - 1, :] = 1.0 / math.sqrt(n)
    return JacobiMatrix(n, R)


@lru_cache(maxsize=None)
def phi_creation_matrix(n: int, sector: int, k: int) -> SparseOperator:
    """Matrix of phi+_k = sum_l R_{kl} psi+_l from sector `sector` to sector+1."""
    if not 1 <= k <= n:
        raise InvalidModeError(f"jacobi mode must lie in 1..{n}, got {k!r}")
    if not 0 <= sector <= n - 1:
        raise InvalidSectorError(
            f"creation source sector must lie in 0..{n - 1}, got {sector!r}"
        )
    R = build_R(n).entries
    acc = None
    for l in range(n):
        c = R[k - 1, l]
        if c == 0.0:
            continue
        term = creation_matrix(n, sector, l + 1) * c
        acc = term if acc is None else acc + term
    return acc


@lru_cache(maxsize=None)
def full_phi_creation(n: int, k: int) -> SparseOperator:
    """phi+_k over the full 2**n space."""
    if not 1 <= k <= n:
        raise InvalidModeError(f"jacobi mode must lie in 1..{n}, got {k!r}")
    R = build_R(n).entries
    acc = None
    for l in range(n):
        c = R[k - 1, l]
        if c == 0.0:
            continue
        term = full_creation(n, l + 1) * c
        acc = term if acc is None else acc + term
    return acc


@dataclass(frozen=True)
class PhiBasis:
    """Orthonormal basis of the relative (phi_n-free) part of one sector.

    vectors has shape (C(n, sector), C(n-1, sector)); column t is the state
    phi+_{b_1} ... phi+_{b_M} |0> for the t-th ascending tuple
    (b_1 < ... < b_M), tuples in lexicographic order, expressed in the
    canonical psi-sector basis.
    """

    n: int
    sector: int
    tuples: tuple[tuple[int, ...], ...]
    vectors: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        self.vectors.flags.writeable = False

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1])


@lru_cache(maxsize=None)
def build_phi_basis(n: int, sector: int) -> PhiBasis:
    """Relative-mode basis of a sector; sector must lie in 0..n-1."""
    if not 0 <= sector <= n - 1:
        raise InvalidSectorError(
            f"relative sectors run over 0..{n - 1}, got {sector!r}"
        )
    ambient = len(enumerate_basis(n, sector))
    tuples = tuple(combinations(range(1, n), sector))
    cols = np.zeros((ambient, len(tuples)))
    for t, bs in enumerate(tuples):
        v = np.ones(1)
        # rightmost factor acts first
        for depth, b in enumerate(reversed(bs)):
            v = phi_creation_matrix(n, depth, b).to_csr() @ v
        cols[:, t] = v
    return PhiBasis(n, sector, tuples, cols)
