"""Seeded smooth test fields for operator-identity checks.

Each scalar field is a low-degree polynomial times an anisotropic gaussian,
so every derivative that the stencils probe is bounded and decays at
infinity. Vector fields (states in a fermion sector of dimension d) stack
independent scalar components.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["GaussPoly", "make_scalar_field", "make_vector_field", "make_field_suite"]

DEFAULT_SEED = 1729


@dataclass(frozen=True)
class GaussPoly:
    """(c0 + a.x + x.Q x) * exp(-|x - mu|^2 / (2 s^2))."""

    c0: float
    lin: np.ndarray
    quad: np.ndarray
    center: np.ndarray
    width: float

    def __call__(self, pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        poly = self.c0 + pts @ self.lin + np.einsum("pi,ij,pj->p", pts, self.quad, pts)
        dx = pts - self.center
        return poly * np.exp(-np.sum(dx**2, axis=-1) / (2.0 * self.width**2))


def make_scalar_field(rng: np.random.Generator, n: int, spread: float = 0.8) -> GaussPoly:
    quad = rng.normal(scale=0.3, size=(n, n))
    return GaussPoly(
        c0=float(rng.normal(scale=1.0)),
        lin=rng.normal(scale=0.7, size=n),
        quad=0.5 * (quad + quad.T),
        center=rng.normal(scale=spread, size=n),
        width=float(rng.uniform(0.9, 1.6)),
    )


def make_vector_field(rng: np.random.Generator, n: int, dim: int, spread: float = 0.8):
    comps = [make_scalar_field(rng, n, spread) for _ in range(dim)]

    def field(pts: np.ndarray) -> np.ndarray:
        return np.stack([c(pts) for c in comps], axis=-1)

    return field


def make_field_suite(n: int, dim: int, count: int = 3, seed: int = DEFAULT_SEED, spread: float = 0.8):
    """A reproducible list of (p, n) -> (p, dim) fields."""
    rng = np.random.default_rng(seed)
    return [make_vector_field(rng, n, dim, spread) for _ in range(count)]
