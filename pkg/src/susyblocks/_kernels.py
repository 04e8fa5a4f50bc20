"""Bit-twiddling kernels for fermionic occupation masks.

Sector enumeration and operator-triplet generation are the only loops in the
package that do not vectorize; they scale as 2**n_modes for full-space algebra
checks. Both a numba path and a pure-numpy path are provided; the active one
is chosen at import time. Set SUSYBLOCKS_NO_NUMBA=1 to force the numpy
fallback. benchmarks/bench_kernels.py compares the two.
"""

from __future__ import annotations

import math
import os

import numpy as np

__all__ = [
    "sector_masks",
    "creation_triplets",
    "sector_masks_numpy",
    "creation_triplets_numpy",
    "using_numba",
]


def _numba_disabled() -> bool:
    return os.environ.get("SUSYBLOCKS_NO_NUMBA", "").strip() not in ("", "0")


# ---------------------------------------------------------------------------
# pure-numpy path


def sector_masks_numpy(n_modes: int, sector: int) -> np.ndarray:
    """All n_modes-bit masks with popcount == sector, ascending."""
    if sector == 0:
        return np.zeros(1, dtype=np.int64)
    all_masks = np.arange(1 << n_modes, dtype=np.int64)
    counts = np.bitwise_count(all_masks.astype(np.uint64))
    return all_masks[counts == sector]


def creation_triplets_numpy(
    src_masks: np.ndarray, tgt_masks: np.ndarray, bit: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(rows, cols, signs) of the creation operator for one mode bit.

    src_masks/tgt_masks must be ascending. Sign is (-1)**(number of occupied
    modes below the target bit).
    """
    free = (src_masks >> bit) & 1 == 0
    cols = np.nonzero(free)[0].astype(np.int64)
    new_masks = src_masks[free] | (np.int64(1) << bit)
    rows = np.searchsorted(tgt_masks, new_masks).astype(np.int64)
    below = src_masks[free] & ((np.int64(1) << bit) - 1)
    parity = np.bitwise_count(below.astype(np.uint64)).astype(np.int64) & 1
    signs = np.int64(1) - 2 * parity
    return rows, cols, signs


# ---------------------------------------------------------------------------
# numba path

_HAVE_NUMBA = False
if not _numba_disabled():
    try:
        from numba import njit

        _HAVE_NUMBA = True
    except ImportError:  # pragma: no cover - numba is a hard dependency
        _HAVE_NUMBA = False

if _HAVE_NUMBA:

    @njit(cache=True)
    def _popcount(x: np.int64) -> np.int64:
        c = 0
        while x:
            x &= x - 1
            c += 1
        return c

    @njit(cache=True)
    def _sector_masks_jit(n_modes: int, sector: int, count: int) -> np.ndarray:
        out = np.empty(count, dtype=np.int64)
        if sector == 0:
            out[0] = 0
            return out
        mask = np.int64((1 << sector) - 1)
        limit = np.int64(1 << n_modes)
        k = 0
        # Gosper's hack walks same-popcount masks in ascending order
        while mask < limit:
            out[k] = mask
            k += 1
            low = mask & (-mask)
            ripple = mask + low
            mask = (((ripple ^ mask) >> 2) // low) | ripple
        return out

    @njit(cache=True)
    def _creation_triplets_jit(
        src_masks: np.ndarray, tgt_masks: np.ndarray, bit: int
    ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        n = src_masks.size
        rows = np.empty(n, dtype=np.int64)
        cols = np.empty(n, dtype=np.int64)
        signs = np.empty(n, dtype=np.int64)
        one = np.int64(1)
        k = 0
        for idx in range(n):
            m = src_masks[idx]
            if (m >> bit) & one == 0:
                nm = m | (one << bit)
                rows[k] = np.searchsorted(tgt_masks, nm)
                cols[k] = idx
                signs[k] = 1 - 2 * (_popcount(m & ((one << bit) - one)) & 1)
                k += 1
        return rows[:k], cols[:k], signs[:k]

    def sector_masks(n_modes: int, sector: int) -> np.ndarray:
        return _sector_masks_jit(n_modes, sector, math.comb(n_modes, sector))

    creation_triplets = _creation_triplets_jit
else:
    sector_masks = sector_masks_numpy
    creation_triplets = creation_triplets_numpy


def using_numba() -> bool:
    """True when the jit path is active."""
    return _HAVE_NUMBA
