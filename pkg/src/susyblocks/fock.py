"""Fermionic Fock space over n one-particle modes, encoded as bitmasks.

Bit i-1 of a mask records the occupation of mode i (modes are 1-based in the
public API). The canonical basis vector for an occupied set {i1 < ... < iM}
is psi+_{i1} ... psi+_{iM} |0> with coefficient +1, and a sector basis lists
its masks in ascending numeric order. All operator matrices in this module
have integer entries and are exact.

The pair-exchange operator K_ij = 1 - (psi+_i - psi+_j)(psi_i - psi_j) swaps
the occupations of modes i and j; it is assembled from creation/annihilation
products so no separate sign bookkeeping is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from . import _kernels
from .errors import InvalidModeError, InvalidSectorError

__all__ = [
    "FockState",
    "FockBasis",
    "SparseOperator",
    "enumerate_basis",
    "creation_matrix",
    "annihilation_matrix",
    "permutation_operator",
    "full_basis",
    "full_creation",
    "full_annihilation",
    "full_permutation",
]

FULL_SPACE_MAX_MODES = 12


def _check_modes(n_modes: int) -> None:
    if not isinstance(n_modes, (int, np.integer)) or n_modes < 1:
        raise InvalidModeError(f"n_modes must be a positive integer, got {n_modes!r}")


def _check_sector(n_modes: int, sector: int) -> None:
    if not isinstance(sector, (int, np.integer)) or not 0 <= sector <= n_modes:
        raise InvalidSectorError(
            f"sector must lie in 0..{n_modes}, got {sector!r}"
        )


def _check_mode(n_modes: int, mode: int) -> None:
    if not isinstance(mode, (int, np.integer)) or not 1 <= mode <= n_modes:
        raise InvalidModeError(f"mode must lie in 1..{n_modes}, got {mode!r}")


@dataclass(frozen=True)
class FockState:
    """A single occupation-number basis state."""

    mask: int
    n_modes: int

    @property
    def fermion_number(self) -> int:
        return int(self.mask).bit_count()

    def occupied_modes(self) -> tuple[int, ...]:
        """1-based modes that are occupied, ascending."""
        return tuple(i + 1 for i in range(self.n_modes) if (self.mask >> i) & 1)

    def __repr__(self) -> str:
        occ = "".join(str(i) for i in self.occupied_modes())
        return f"|{occ}>" if occ else "|0>"


@dataclass(frozen=True)
class FockBasis:
    """Ordered basis of one fermion-number sector (or of the full space)."""

    n_modes: int
    sector: int | None
    masks: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        self.masks.flags.writeable = False

    def __len__(self) -> int:
        return int(self.masks.size)

    @property
    def states(self) -> list[FockState]:
        return [FockState(int(m), self.n_modes) for m in self.masks]

    def index_of(self, mask: int) -> int:
        """Position of a mask in the basis; raises if absent."""
        i = int(np.searchsorted(self.masks, mask))
        if i >= len(self) or self.masks[i] != mask:
            raise InvalidSectorError(f"mask {mask} not in this basis")
        return i


@dataclass(frozen=True)
class SparseOperator:
    """Sparse matrix between two Fock bases, stored as COO triplets.

    Entries are exact (integer for the psi operators); duplicates are merged
    at construction so each (row, col) appears at most once.
    """

    n_rows: int
    n_cols: int
    row: np.ndarray = field(repr=False)
    col: np.ndarray = field(repr=False)
    val: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        for a in (self.row, self.col, self.val):
            a.flags.writeable = False

    @classmethod
    def from_coo(
        cls, n_rows: int, n_cols: int, row: np.ndarray, col: np.ndarray, val: np.ndarray
    ) -> "SparseOperator":
        m = sp.coo_matrix((val, (row, col)), shape=(n_rows, n_cols))
        return cls.from_scipy(m)

    @classmethod
    def from_scipy(cls, m: sp.spmatrix) -> "SparseOperator":
        c = sp.coo_matrix(m)
        c.sum_duplicates()
        c.eliminate_zeros()
        # canonical row-major ordering keeps dumps deterministic
        order = np.lexsort((c.col, c.row))
        return cls(
            c.shape[0],
            c.shape[1],
            c.row[order].astype(np.int64),
            c.col[order].astype(np.int64),
            c.data[order].copy(),
        )

    @classmethod
    def identity(cls, n: int, dtype=np.int64) -> "SparseOperator":
        idx = np.arange(n, dtype=np.int64)
        return cls(n, n, idx, idx.copy(), np.ones(n, dtype=dtype))

    @property
    def nnz(self) -> int:
        return int(self.val.size)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_rows, self.n_cols)

    def to_csr(self) -> sp.csr_matrix:
        return sp.csr_matrix(
            (self.val, (self.row, self.col)), shape=(self.n_rows, self.n_cols)
        )

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.n_rows, self.n_cols), dtype=self.val.dtype)
        out[self.row, self.col] = self.val
        return out

    @property
    def T(self) -> "SparseOperator":
        return SparseOperator.from_coo(
            self.n_cols, self.n_rows, self.col, self.row, self.val
        )

    def __matmul__(self, other: "SparseOperator") -> "SparseOperator":
        if self.n_cols != other.n_rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return SparseOperator.from_scipy(self.to_csr() @ other.to_csr())

    def __add__(self, other: "SparseOperator") -> "SparseOperator":
        return SparseOperator.from_scipy(self.to_csr() + other.to_csr())

    def __sub__(self, other: "SparseOperator") -> "SparseOperator":
        return SparseOperator.from_scipy(self.to_csr() - other.to_csr())

    def __mul__(self, scalar) -> "SparseOperator":
        return SparseOperator(
            self.n_rows, self.n_cols, self.row, self.col, self.val * scalar
        )

    __rmul__ = __mul__


@lru_cache(maxsize=None)
def _masks(n_modes: int, sector: int) -> np.ndarray:
    m = _kernels.sector_masks(n_modes, sector)
    m.flags.writeable = False
    return m


def enumerate_basis(n_modes: int, sector: int) -> FockBasis:
    """Canonical basis of the fermion-number-`sector` subspace.

    Masks come out in ascending numeric order; the basis size is
    C(n_modes, sector).
    """
    _check_modes(n_modes)
    _check_sector(n_modes, sector)
    masks = _masks(n_modes, sector)
    assert masks.size == math.comb(n_modes, sector)
    return FockBasis(n_modes, sector, masks)


@lru_cache(maxsize=None)
def _full_masks(n_modes: int) -> np.ndarray:
    m = np.arange(1 << n_modes, dtype=np.int64)
    m.flags.writeable = False
    return m


def full_basis(n_modes: int) -> FockBasis:
    """All 2**n_modes states, ascending by mask (sector=None)."""
    _check_modes(n_modes)
    if n_modes > FULL_SPACE_MAX_MODES:
        raise InvalidModeError(
            f"full-space assembly is limited to n_modes <= {FULL_SPACE_MAX_MODES}"
        )
    return FockBasis(n_modes, None, _full_masks(n_modes))


def _creation_between(src: np.ndarray, tgt: np.ndarray, n_tgt: int, mode: int) -> SparseOperator:
    rows, cols, signs = _kernels.creation_triplets(src, tgt, mode - 1)
    return SparseOperator(n_tgt, src.size, rows, cols, signs)


@lru_cache(maxsize=None)
def creation_matrix(n_modes: int, sector: int, mode: int) -> SparseOperator:
    """Matrix of psi+_mode from sector `sector` to sector `sector`+1.

    Entry convention: psi+_m |S> = (-1)**(occupied modes below m) |S + m>
    when mode m is free, else 0. So e.g. for two modes
    psi+_2 |1> = psi+_2 psi+_1 |0> = -|12>, giving entry -1.
    """
    _check_modes(n_modes)
    _check_mode(n_modes, mode)
    if not 0 <= sector <= n_modes - 1:
        raise InvalidSectorError(
            f"creation source sector must lie in 0..{n_modes - 1}, got {sector!r}"
        )
    src = _masks(n_modes, sector)
    tgt = _masks(n_modes, sector + 1)
    return _creation_between(src, tgt, tgt.size, mode)


def annihilation_matrix(n_modes: int, sector: int, mode: int) -> SparseOperator:
    """Matrix of psi_mode from sector `sector` to `sector`-1 (transpose of creation)."""
    _check_modes(n_modes)
    _check_mode(n_modes, mode)
    if not 1 <= sector <= n_modes:
        raise InvalidSectorError(
            f"annihilation source sector must lie in 1..{n_modes}, got {sector!r}"
        )
    return creation_matrix(n_modes, sector - 1, mode).T


@lru_cache(maxsize=None)
def full_creation(n_modes: int, mode: int) -> SparseOperator:
    """psi+_mode over the full 2**n_modes space."""
    basis = full_basis(n_modes)
    return _creation_between(basis.masks, basis.masks, len(basis), mode)


def full_annihilation(n_modes: int, mode: int) -> SparseOperator:
    return full_creation(n_modes, mode).T


def _permutation_from_ladder(
    cre, ann, ident: SparseOperator, i: int, j: int
) -> SparseOperator:
    # K_ij = 1 - (psi+_i - psi+_j)(psi_i - psi_j), expanded into ladder products
    hop = cre(i) @ ann(i) - cre(i) @ ann(j) - cre(j) @ ann(i) + cre(j) @ ann(j)
    return ident - hop


@lru_cache(maxsize=None)
def permutation_operator(n_modes: int, sector: int, i: int, j: int) -> SparseOperator:
    """Exchange operator K_ij restricted to one sector. Symmetric, involutive.

    K_ij acts on labels: |..i..> <-> |..j..>; states containing both or
    neither of i, j pick up -1 or +1 respectively (sign from reordering the
    canonical product).
    """
    _check_modes(n_modes)
    _check_sector(n_modes, sector)
    _check_mode(n_modes, i)
    _check_mode(n_modes, j)
    if i == j:
        raise InvalidModeError(f"pair indices must differ, got i=j={i}")
    dim = math.comb(n_modes, sector)
    if sector == 0 or sector == n_modes:
        # no hopping possible; K is +1 on the vacuum, -1 on the full state
        sign = 1 if sector == 0 else -1
        return SparseOperator.identity(dim) * sign

    def cre(m: int) -> SparseOperator:
        return creation_matrix(n_modes, sector - 1, m)

    def ann(m: int) -> SparseOperator:
        return annihilation_matrix(n_modes, sector, m)

    return _permutation_from_ladder(cre, ann, SparseOperator.identity(dim), i, j)


@lru_cache(maxsize=None)
def full_permutation(n_modes: int, i: int, j: int) -> SparseOperator:
    """K_ij over the full 2**n_modes space."""
    _check_mode(n_modes, i)
    _check_mode(n_modes, j)
    if i == j:
        raise InvalidModeError(f"pair indices must differ, got i=j={i}")
    ident = SparseOperator.identity(len(full_basis(n_modes)))
    return _permutation_from_ladder(
        lambda m: full_creation(n_modes, m),
        lambda m: full_annihilation(n_modes, m),
        ident,
        i,
        j,
    )
