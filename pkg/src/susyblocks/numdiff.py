"""Eighth-order central finite differences on callables.

Operator identities in this package (intertwining, anticommutators, the
two routes to the same block Hamiltonian) are verified by applying both
sides to smooth test fields and comparing pointwise. A "field" is any
callable mapping points of shape (p, n) to values of shape (p, ...); the
helpers below wrap such callables in new callables that evaluate stencil
combinations, so first- and second-order operators compose by nesting.

Eighth-order stencils keep the truncation error (~h^8 f^(9)) far below the
residual tolerances even at step sizes around 1e-2, where float64 rounding
in the difference quotients is still harmless.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

__all__ = [
    "STENCIL_OFFSETS",
    "D1_WEIGHTS",
    "D2_WEIGHTS",
    "partial_derivative",
    "second_partial",
    "laplacian",
]

STENCIL_OFFSETS = np.arange(-4, 5)

# central first derivative, order 8: [±4 ±3 ±2 ±1 0] = [∓1/280 ±4/105 ∓1/5 ±4/5 0]
D1_WEIGHTS = np.array([3.0, -32.0, 168.0, -672.0, 0.0, 672.0, -168.0, 32.0, -3.0]) / 840.0

# central second derivative, order 8: [-1/560 8/315 -1/5 8/5 -205/72 ...]
D2_WEIGHTS = (
    np.array([-9.0, 128.0, -1008.0, 8064.0, -14350.0, 8064.0, -1008.0, 128.0, -9.0])
    / 5040.0
)

Field = Callable[[np.ndarray], np.ndarray]


def _stencil_apply(f: Field, coord: int, weights: np.ndarray, h: float) -> Field:
    offsets = [(o, w) for o, w in zip(STENCIL_OFFSETS, weights) if w != 0.0]

    def applied(pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        acc = None
        for off, wt in offsets:
            shifted = pts.copy()
            shifted[..., coord] += off * h
            term = wt * np.asarray(f(shifted))
            acc = term if acc is None else acc + term
        return acc

    return applied


def partial_derivative(f: Field, coord: int, h: float = 0.02) -> Field:
    """d/dx_coord as a field transformer."""
    inner = _stencil_apply(f, coord, D1_WEIGHTS, h)
    return lambda pts: inner(pts) / h


def second_partial(f: Field, ci: int, cj: int, h: float = 0.02) -> Field:
    """d^2/dx_ci dx_cj; the diagonal case uses the dedicated stencil."""
    if ci == cj:
        inner = _stencil_apply(f, ci, D2_WEIGHTS, h)
        return lambda pts: inner(pts) / h**2
    return partial_derivative(partial_derivative(f, cj, h), ci, h)


def laplacian(f: Field, n: int, h: float = 0.02) -> Field:
    """Sum of the n diagonal second derivatives."""
    parts = [second_partial(f, c, c, h) for c in range(n)]

    def applied(pts: np.ndarray) -> np.ndarray:
        acc = parts[0](pts)
        for p in parts[1:]:
            acc = acc + p(pts)
        return acc

    return applied
