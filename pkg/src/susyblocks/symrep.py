"""Hook representations of S_n carried by the relative fermionic sectors.

The exchange operators K_ij, restricted to the phi_n-free part of the
M-fermion sector, give C(n-1, M)-dimensional representation matrices
B^(M)_ij. This module builds them, evaluates their characters, and checks
against the Murnaghan-Nakayama recursion that sector M carries exactly the
hook irreducible representation with partition (n-M, 1, ..., 1).

Conventions: permutations use 1-based one-line notation; a cycle type is a
weakly decreasing tuple of positive parts summing to n; the canonical class
representative lays its cycles out on consecutive integers, largest first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cache, lru_cache
from itertools import combinations

import numpy as np

from .errors import (
    InvalidModeError,
    InvalidPartitionError,
    InvalidSectorError,
    TableauMatchError,
)
from .jacobi import build_R, build_phi_basis
from .fock import permutation_operator

__all__ = [
    "partitions",
    "validate_partition",
    "class_size",
    "class_representative",
    "t_matrix",
    "t_tilde",
    "b_matrix",
    "rep_matrix_set",
    "b_permutation",
    "character",
    "mn_character",
    "hook_dimension",
    "verify_irreducible",
    "identify_tableau",
    "IrreducibilityReport",
]

REP_MAX_N = 12


def validate_partition(parts, n: int | None = None) -> tuple[int, ...]:
    """Normalize to a tuple, enforcing weak decrease and positive parts."""
    t = tuple(int(p) for p in parts)
    if not t or any(p < 1 for p in t) or any(t[i] < t[i + 1] for i in range(len(t) - 1)):
        raise InvalidPartitionError(f"not a partition: {parts!r}")
    if n is not None and sum(t) != n:
        raise InvalidPartitionError(f"{t} is not a partition of {n}")
    return t


@cache
def partitions(n: int) -> tuple[tuple[int, ...], ...]:
    """All partitions of n in descending lexicographic order."""
    if n < 0:
        raise InvalidPartitionError(f"n must be nonnegative, got {n}")
    if n == 0:
        return ((),)

    def gen(rest: int, largest: int):
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, largest), 0, -1):
            for tail in gen(rest - first, first):
                yield (first,) + tail

    return tuple(gen(n, n))


def class_size(cycle_type) -> int:
    """Number of permutations with the given cycle type: n! / prod j**m_j m_j!."""
    ct = validate_partition(cycle_type)
    n = sum(ct)
    denom = 1
    for j in set(ct):
        m = ct.count(j)
        denom *= j**m * math.factorial(m)
    return math.factorial(n) // denom


def class_representative(cycle_type) -> tuple[int, ...]:
    """One-line permutation with cycles on consecutive integers, e.g. (3,2) -> (2,3,1,5,4)."""
    ct = validate_partition(cycle_type)
    n = sum(ct)
    img = list(range(1, n + 1))
    start = 1
    for part in ct:
        for offset in range(part):
            img[start - 1 + offset] = start + (offset + 1) % part
        start += part
    return tuple(img)


def _one_line_to_transpositions(perm: tuple[int, ...]) -> list[tuple[int, int]]:
    """Decompose via cycles: (c1 .. ck) = (c1 c2)(c2 c3)...(c_{k-1} c_k)."""
    n = len(perm)
    seen = [False] * (n + 1)
    out: list[tuple[int, int]] = []
    for s in range(1, n + 1):
        if seen[s]:
            continue
        cyc = []
        c = s
        while not seen[c]:
            seen[c] = True
            cyc.append(c)
            c = perm[c - 1]
        for a, b in zip(cyc, cyc[1:]):
            out.append((a, b))
    return out


def _coerce_word(n: int, permutation) -> list[tuple[int, int]]:
    """Accept one-line notation (length n) or an explicit transposition list."""
    seq = list(permutation)
    if not seq:
        return []  # empty word is the identity
    if all(
        isinstance(p, (tuple, list)) and len(p) == 2 for p in seq
    ):
        word = [(int(a), int(b)) for a, b in seq]
    else:
        perm = tuple(int(p) for p in seq)
        if len(perm) != n or sorted(perm) != list(range(1, n + 1)):
            raise InvalidModeError(
                f"expected one-line notation of length {n} or pair list, got {permutation!r}"
            )
        word = _one_line_to_transpositions(perm)
    for a, b in word:
        if not (1 <= a <= n and 1 <= b <= n) or a == b:
            raise InvalidModeError(f"bad transposition ({a},{b}) for n={n}")
    return word


def _check_rep_args(n: int, sector: int) -> None:
    if not 2 <= n <= REP_MAX_N:
        raise InvalidModeError(f"n must lie in 2..{REP_MAX_N}, got {n!r}")
    if not 0 <= sector <= n - 1:
        raise InvalidSectorError(f"sector must lie in 0..{n - 1}, got {sector!r}")


def t_matrix(n: int, i: int, j: int) -> np.ndarray:
    """n x n permutation matrix of the transposition (i j) on coordinates."""
    if not (1 <= i <= n and 1 <= j <= n) or i == j:
        raise InvalidModeError(f"bad pair ({i},{j}) for n={n}")
    T = np.eye(n)
    T[[i - 1, j - 1]] = T[[j - 1, i - 1]]
    return T


def t_tilde(n: int, i: int, j: int) -> np.ndarray:
    """Transposition matrix rotated to Jacobi modes: R T R^T.

    Row and column n always equal the unit vector e_n (the center of mass is
    permutation invariant), so the action is carried by the leading
    (n-1) x (n-1) block. For the pair (n-1, n) that block is the identity
    except for the trailing 2x2 block
    [[1/(n-1), sqrt(n(n-2))/(n-1)], [sqrt(n(n-2))/(n-1), -1/(n-1)]].
    """
    R = build_R(n).entries
    return R @ t_matrix(n, i, j) @ R.T


@lru_cache(maxsize=None)
def b_matrix(n: int, sector: int, i: int, j: int) -> np.ndarray:
    """Representation matrix of (i j) on the relative part of one sector.

    Computed as V^T K_ij V with V the PhiBasis columns; the relative subspace
    is K-invariant so the compression is exact.
    """
    _check_rep_args(n, sector)
    V = build_phi_basis(n, sector).vectors
    K = permutation_operator(n, sector, i, j).to_csr()
    B = V.T @ (K @ V)
    B.flags.writeable = False
    return B


@dataclass(frozen=True)
class RepMatrixSet:
    """All pair matrices B^(sector)_ij for one sector of S_n."""

    n: int
    sector: int
    matrices: dict[tuple[int, int], np.ndarray]

    def pair(self, i: int, j: int) -> np.ndarray:
        key = (min(i, j), max(i, j))
        return self.matrices[key]

    @property
    def dim(self) -> int:
        return math.comb(self.n - 1, self.sector)


def rep_matrix_set(n: int, sector: int) -> RepMatrixSet:
    _check_rep_args(n, sector)
    mats = {
        (i, j): b_matrix(n, sector, i, j)
        for i, j in combinations(range(1, n + 1), 2)
    }
    return RepMatrixSet(n, sector, mats)


def b_permutation(n: int, sector: int, permutation) -> np.ndarray:
    """Representation matrix of an arbitrary permutation.

    The word is multiplied left to right; any decomposition of the same
    permutation yields the same matrix because the pair matrices satisfy the
    Coxeter relations.
    """
    _check_rep_args(n, sector)
    word = _coerce_word(n, permutation)
    dim = math.comb(n - 1, sector)
    out = np.eye(dim)
    for a, b in word:
        out = out @ b_matrix(n, sector, min(a, b), max(a, b))
    return out


def character(n: int, sector: int, cycle_type) -> float:
    """Trace of the sector representation on one conjugacy class."""
    ct = validate_partition(cycle_type, n)
    return float(np.trace(b_permutation(n, sector, class_representative(ct))))


@cache
def mn_character(partition, cycle_type) -> int:
    """Murnaghan-Nakayama character chi_partition(cycle_type), exact integer.

    Recursion on border strips via the abacus encoding: removing a strip of
    length r means moving one bead down r slots; the sign is (-1)**(number of
    beads jumped over), which equals (-1)**(rows spanned - 1).
    """
    lam = validate_partition(partition) if partition else ()
    rho = validate_partition(cycle_type) if cycle_type else ()
    if sum(lam) != sum(rho):
        raise InvalidPartitionError(
            f"partition {lam} and cycle type {rho} have different sizes"
        )
    if not rho:
        return 1
    r = rho[0]
    rest = rho[1:]
    m = len(lam)
    beta = [lam[i] + (m - 1 - i) for i in range(m)]
    beta_set = set(beta)
    total = 0
    for i in range(m):
        nb = beta[i] - r
        if nb < 0 or nb in beta_set:
            continue
        height = sum(1 for b in beta if nb < b < beta[i])
        new_beta = sorted((beta[j] if j != i else nb for j in range(m)), reverse=True)
        new_lam = tuple(
            new_beta[k] - (m - 1 - k) for k in range(m) if new_beta[k] - (m - 1 - k) > 0
        )
        total += (-1) ** height * mn_character(new_lam, rest)
    return total


def hook_dimension(partition) -> int:
    """Dimension of the irreducible representation, by the hook length formula."""
    lam = validate_partition(partition)
    n = sum(lam)
    cols = [0] * (lam[0] if lam else 0)
    for row_len in lam:
        for c in range(row_len):
            cols[c] += 1
    prod = 1
    for r, row_len in enumerate(lam):
        for c in range(row_len):
            arm = row_len - c - 1
            leg = cols[c] - r - 1
            prod *= arm + leg + 1
    return math.factorial(n) // prod


@dataclass(frozen=True)
class IrreducibilityReport:
    n: int
    sector: int
    inner_product: float
    characters: dict[tuple[int, ...], float]
    passed: bool


def verify_irreducible(n: int, sector: int, tol: float = 1e-9) -> IrreducibilityReport:
    """Check <chi, chi> = 1 over all conjugacy classes of S_n."""
    _check_rep_args(n, sector)
    chars = {ct: character(n, sector, ct) for ct in partitions(n)}
    total = sum(class_size(ct) * chars[ct] ** 2 for ct in chars)
    ip = total / math.factorial(n)
    return IrreducibilityReport(n, sector, ip, chars, abs(ip - 1.0) <= tol)


def identify_tableau(n: int, sector: int, tol: float = 1e-9) -> tuple[int, ...]:
    """Match the sector's character vector against every partition of n.

    Returns the unique matching partition; for sector M it is the hook
    (n-M, 1, ..., 1). Raises TableauMatchError unless exactly one partition
    matches within tol on every class.
    """
    _check_rep_args(n, sector)
    classes = partitions(n)
    chi = np.array([character(n, sector, ct) for ct in classes])
    matches = []
    for lam in partitions(n):
        ref = np.array([mn_character(lam, ct) for ct in classes], dtype=float)
        if np.max(np.abs(chi - ref)) <= tol:
            matches.append(lam)
    if len(matches) != 1:
        raise TableauMatchError(
            f"expected exactly one matching partition for n={n}, sector={sector}; "
            f"got {matches}"
        )
    return matches[0]
