"""Separable superpotentials and the translation-invariant pair models.

A superpotential here is a smooth w: R^n -> R whose gradient components sum
to zero (sum_j dw/dx_j = 0), so the center-of-mass motion decouples; an
optional quadratic-in-y_n piece W_C(y_n) rides on top of it. The bundle
carries analytic gradient and Hessian callables because every operator
construction downstream consumes those rather than w itself.

Pair models take w = sum_{i<j} U(x_i - x_j) with U even. Such a w yields a
pairwise Hamiltonian exactly when U' satisfies the Calogero-type functional
equation U'(A)U'(B) + U'(A)U'(C) + U'(B)U'(C) = v0(A) + v0(B) + v0(C) on
A + B + C = 0. The four models shipped here (calogero, linear, sutherland,
hyperbolic) satisfy it; `functional_eq_residual` checks the identity at
arbitrary arguments.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import InvalidModeError, SingularArgumentError

__all__ = [
    "Superpotential",
    "PairModel",
    "SeparabilityReport",
    "check_separability",
    "example3",
    "pair_model",
    "pairwise_superpotential",
    "functional_eq_residual",
    "printed_potential",
    "potential_column_diagnostic",
    "get_superpotential",
    "default_sample_points",
    "MODEL_NAMES",
    "SINGULARITY_GUARD",
]

SINGULARITY_GUARD = 1e-8

MODEL_NAMES = ("calogero", "linear", "sutherland", "hyperbolic")


def _batch(x, n: int) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 1:
        if arr.shape != (n,):
            raise InvalidModeError(f"point must have {n} coordinates, got {arr.shape}")
        return arr[None, :], True
    if arr.ndim != 2 or arr.shape[1] != n:
        raise InvalidModeError(f"points must have shape (p, {n}), got {arr.shape}")
    return arr, False


@dataclass(frozen=True)
class Superpotential:
    """Analytic bundle (w, grad w, hess w) plus the center-of-mass piece W_C.

    All callables accept (n,) or (p, n) arrays; batched input gives batched
    output. wc, wc_d1, wc_d2 act on the scalar y_n = sum(x)/sqrt(n) and
    default to zero.
    """

    n: int
    name: str
    w: Callable[[np.ndarray], np.ndarray]
    grad_w: Callable[[np.ndarray], np.ndarray]
    hess_w: Callable[[np.ndarray], np.ndarray]
    wc: Callable[[np.ndarray], np.ndarray]
    wc_d1: Callable[[np.ndarray], np.ndarray]
    wc_d2: Callable[[np.ndarray], np.ndarray]
    params: dict = field(default_factory=dict)

    def y_cm(self, x) -> np.ndarray:
        pts, single = _batch(x, self.n)
        y = pts.sum(axis=1) / math.sqrt(self.n)
        return y[0] if single else y

    @property
    def has_cmm_term(self) -> bool:
        probe = np.array([0.37, -1.21, 2.05])
        return bool(np.any(self.wc_d1(probe) != 0.0) or np.any(self.wc_d2(probe) != 0.0))

    def without_cmm(self) -> "Superpotential":
        z = lambda y: np.zeros_like(np.asarray(y, dtype=float))
        return dataclasses.replace(self, wc=z, wc_d1=z, wc_d2=z)


@dataclass(frozen=True)
class SeparabilityReport:
    n: int
    samples: int
    max_divergence: float
    max_grad_fd_error: float
    max_hess_fd_error: float
    passed: bool


def check_separability(
    sp: Superpotential,
    points: np.ndarray | None = None,
    count: int = 100,
    seed: int = 1729,
    tol: float = 1e-9,
    fd_tol: float = 1e-6,
    fd_step: float = 1e-4,
) -> SeparabilityReport:
    """Verify sum_j dw/dx_j = 0 and cross-check the analytic derivatives.

    Gradient and Hessian are compared against central finite differences of
    w; the relative error bound fd_tol is taken against max(1, |analytic|).
    """
    pts = default_sample_points(sp, count, seed) if points is None else np.atleast_2d(points)
    grad = sp.grad_w(pts)
    hess = sp.hess_w(pts)
    div = float(np.max(np.abs(grad.sum(axis=1))))

    n = sp.n
    h = fd_step
    fd_grad = np.empty_like(grad)
    for l in range(n):
        e = np.zeros(n)
        e[l] = h
        fd_grad[:, l] = (sp.w(pts + e) - sp.w(pts - e)) / (2 * h)
    grad_err = float(np.max(np.abs(fd_grad - grad) / np.maximum(1.0, np.abs(grad))))

    fd_hess = np.empty_like(hess)
    w0 = sp.w(pts)
    for i in range(n):
        ei = np.zeros(n)
        ei[i] = h
        fd_hess[:, i, i] = (sp.w(pts + ei) - 2 * w0 + sp.w(pts - ei)) / h**2
        for j in range(i + 1, n):
            ej = np.zeros(n)
            ej[j] = h
            mixed = (
                sp.w(pts + ei + ej)
                - sp.w(pts + ei - ej)
                - sp.w(pts - ei + ej)
                + sp.w(pts - ei - ej)
            ) / (4 * h**2)
            fd_hess[:, i, j] = mixed
            fd_hess[:, j, i] = mixed
    hess_err = float(np.max(np.abs(fd_hess - hess) / np.maximum(1.0, np.abs(hess))))

    return SeparabilityReport(
        n=sp.n,
        samples=pts.shape[0],
        max_divergence=div,
        max_grad_fd_error=grad_err,
        max_hess_fd_error=hess_err,
        passed=(div <= tol and grad_err <= fd_tol and hess_err <= fd_tol),
    )


# ---------------------------------------------------------------------------
# three-particle example with a genuinely non-pairwise interaction


def example3(a: float = 1.0) -> Superpotential:
    """w = -ln(3 + a*s) - (a/6) s with s = sum_{j<k} (x_j - x_k)^2, n = 3.

    Separable by construction; the center-of-mass piece is
    W_C(y) = -(a/2) y^2. The relative sector-0 block built from this w is a
    shifted two-dimensional isotropic oscillator of frequency a.
    """
    if a == 0:
        raise InvalidModeError("example3 needs a != 0")
    n = 3

    def s_of(pts: np.ndarray) -> np.ndarray:
        diffs = pts[:, :, None] - pts[:, None, :]
        return 0.5 * np.sum(diffs**2, axis=(1, 2))

    def guard(g: np.ndarray) -> None:
        if np.any(np.abs(g) < SINGULARITY_GUARD):
            raise SingularArgumentError("example3: 3 + a*s vanishes at a sample point")

    def w(x):
        pts, single = _batch(x, n)
        g = 3.0 + a * s_of(pts)
        guard(g)
        out = -np.log(np.abs(g)) - (a / 6.0) * s_of(pts)
        return out[0] if single else out

    def grad_w(x):
        pts, single = _batch(x, n)
        g = 3.0 + a * s_of(pts)
        guard(g)
        ds = 2.0 * (n * pts - pts.sum(axis=1, keepdims=True))
        out = -(a / g + a / 6.0)[:, None] * ds
        return out[0] if single else out

    def hess_w(x):
        pts, single = _batch(x, n)
        g = 3.0 + a * s_of(pts)
        guard(g)
        ds = 2.0 * (n * pts - pts.sum(axis=1, keepdims=True))
        dds = 2.0 * (n * np.eye(n) - 1.0)
        out = (
            -(a / g + a / 6.0)[:, None, None] * dds[None, :, :]
            + (a**2 / g**2)[:, None, None] * ds[:, :, None] * ds[:, None, :]
        )
        return out[0] if single else out

    wc = lambda y: -(a / 2.0) * np.asarray(y, dtype=float) ** 2
    wc_d1 = lambda y: -a * np.asarray(y, dtype=float)
    wc_d2 = lambda y: np.full_like(np.asarray(y, dtype=float), -a)

    return Superpotential(
        n=n, name="example3", w=w, grad_w=grad_w, hess_w=hess_w,
        wc=wc, wc_d1=wc_d1, wc_d2=wc_d2, params={"a": a},
    )


# ---------------------------------------------------------------------------
# pair models


@dataclass(frozen=True)
class PairModel:
    """Even pair potential U with derivatives and the v0 of its functional equation."""

    name: str
    u: Callable[[np.ndarray], np.ndarray]
    du: Callable[[np.ndarray], np.ndarray]
    d2u: Callable[[np.ndarray], np.ndarray]
    v0: Callable[[np.ndarray], np.ndarray]
    singular_distance: Callable[[np.ndarray], np.ndarray]
    params: dict = field(default_factory=dict)
    domain_note: str = ""

    def guard(self, diffs: np.ndarray) -> None:
        if np.any(self.singular_distance(np.asarray(diffs, dtype=float)) < SINGULARITY_GUARD):
            raise SingularArgumentError(
                f"{self.name}: pair separation within {SINGULARITY_GUARD} of a singularity"
            )


def pair_model(name: str, a: float = 1.0, b: float = 0.0) -> PairModel:
    """Build one of the solvable pair models by name.

    calogero:   U = a x^2/2 + b ln|x|,  v0 = -a^2 x^2/2 - a b
    linear:     U = a|x|,               v0 = -a^2/3   (away from sign changes)
    sutherland: U = a ln|sin x|,        v0 = +a^2/3   (separations in (0, pi))
    hyperbolic: U = a ln|sinh x|,       v0 = -a^2/3
    """
    dist_zero = lambda x: np.abs(x)
    if name == "calogero":
        return PairModel(
            name=name,
            u=lambda x: 0.5 * a * x**2 + b * np.log(np.abs(x)),
            du=lambda x: a * x + b / x,
            d2u=lambda x: a - b / x**2,
            v0=lambda x: -0.5 * a**2 * x**2 - a * b * np.ones_like(x),
            singular_distance=dist_zero,
            params={"a": a, "b": b},
        )
    if name == "linear":
        return PairModel(
            name=name,
            u=lambda x: a * np.abs(x),
            du=lambda x: a * np.sign(x),
            d2u=lambda x: np.zeros_like(x),
            v0=lambda x: np.full_like(x, -(a**2) / 3.0),
            singular_distance=dist_zero,
            params={"a": a},
            domain_note="second derivative ignores the delta at the origin",
        )
    if name == "sutherland":
        return PairModel(
            name=name,
            u=lambda x: a * np.log(np.abs(np.sin(x))),
            du=lambda x: a / np.tan(x),
            d2u=lambda x: -a / np.sin(x) ** 2,
            v0=lambda x: np.full_like(x, a**2 / 3.0),
            singular_distance=lambda x: np.abs(x - np.round(x / math.pi) * math.pi),
            params={"a": a},
            domain_note="pair separations must stay inside (0, pi)",
        )
    if name == "hyperbolic":
        return PairModel(
            name=name,
            u=lambda x: a * np.log(np.abs(np.sinh(x))),
            du=lambda x: a / np.tanh(x),
            d2u=lambda x: -a / np.sinh(x) ** 2,
            v0=lambda x: np.full_like(x, -(a**2) / 3.0),
            singular_distance=dist_zero,
            params={"a": a},
        )
    raise InvalidModeError(
        f"unknown pair model {name!r}; available: {', '.join(MODEL_NAMES)}"
    )


def functional_eq_residual(model: PairModel, A, B) -> np.ndarray:
    """|U'(A)U'(B) + U'(A)U'(C) + U'(B)U'(C) - v0(A) - v0(B) - v0(C)|, C = -A-B."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    C = -A - B
    for arg in (A, B, C):
        model.guard(arg)
    lhs = (
        model.du(A) * model.du(B)
        + model.du(A) * model.du(C)
        + model.du(B) * model.du(C)
    )
    rhs = model.v0(A) + model.v0(B) + model.v0(C)
    return np.abs(lhs - rhs)


def pairwise_superpotential(
    model: PairModel, n: int, cmm_frequency: float | None = None
) -> Superpotential:
    """w(x) = sum_{i<j} U(x_i - x_j) for n particles.

    Translation invariance makes this separable identically. For the calogero
    model a confined center of mass is available: cmm_frequency=a adds
    W_C(y) = (a n / 2) y^2.
    """
    if n < 2:
        raise InvalidModeError(f"need at least two particles, got n={n!r}")
    iu, ju = np.triu_indices(n, k=1)

    def pair_diffs(pts: np.ndarray) -> np.ndarray:
        d = pts[:, iu] - pts[:, ju]
        model.guard(d)
        return d

    def w(x):
        pts, single = _batch(x, n)
        out = model.u(pair_diffs(pts)).sum(axis=1)
        return out[0] if single else out

    rng_n = np.arange(n)

    def grad_w(x):
        pts, single = _batch(x, n)
        d = pts[:, :, None] - pts[:, None, :]
        model.guard(d[:, iu, ju])
        d[:, rng_n, rng_n] = 1.0  # placeholder off the singular set
        slopes = model.du(d)
        slopes[:, rng_n, rng_n] = 0.0
        out = slopes.sum(axis=2)
        return out[0] if single else out

    def hess_w(x):
        pts, single = _batch(x, n)
        d = pts[:, :, None] - pts[:, None, :]
        model.guard(d[:, iu, ju])
        d[:, rng_n, rng_n] = 1.0
        curv = model.d2u(d)
        curv[:, rng_n, rng_n] = 0.0
        out = -curv
        out[:, rng_n, rng_n] = curv.sum(axis=2)
        return out[0] if single else out

    if cmm_frequency is not None:
        freq = float(cmm_frequency) * n
        wc = lambda y: 0.5 * freq * np.asarray(y, dtype=float) ** 2
        wc_d1 = lambda y: freq * np.asarray(y, dtype=float)
        wc_d2 = lambda y: np.full_like(np.asarray(y, dtype=float), freq)
    else:
        wc = lambda y: np.zeros_like(np.asarray(y, dtype=float))
        wc_d1 = wc
        wc_d2 = wc

    params = dict(model.params)
    if cmm_frequency is not None:
        params["cmm_frequency"] = float(cmm_frequency)
    return Superpotential(
        n=n, name=model.name, w=w, grad_w=grad_w, hess_w=hess_w,
        wc=wc, wc_d1=wc_d1, wc_d2=wc_d2, params=params,
    )


# ---------------------------------------------------------------------------
# published potential column, kept as a diagnostic only


def printed_potential(model: PairModel) -> Callable[[np.ndarray], np.ndarray]:
    """The tabulated single-pair potential V(x) as published, for comparison."""
    a = model.params.get("a", 1.0)
    b = model.params.get("b", 0.0)
    if model.name == "calogero":
        return lambda x: b * (b + 1) / x**2 + 1.5 * a**2 * x**2 + 3 * a * b + a
    if model.name == "linear":
        return lambda x: a**2 * np.sign(x) ** 2 - a**2 / 3.0
    if model.name == "sutherland":
        return lambda x: a * (a - 1) / np.sin(x) ** 2 - (4.0 / 3.0) * a**2
    if model.name == "hyperbolic":
        return lambda x: a * (a - 1) / np.sinh(x) ** 2 + (2.0 / 3.0) * a**2
    raise InvalidModeError(f"no published potential column for {model.name!r}")


def potential_column_diagnostic(model: PairModel, xs: np.ndarray) -> dict:
    """Compare the published V(x) against U'(x)^2 + v0(x) pointwise.

    The published column does not satisfy that relation for every model (it
    folds in second-derivative terms), so this reports the discrepancy rather
    than asserting it away.
    """
    xs = np.asarray(xs, dtype=float)
    model.guard(xs)
    derived = model.du(xs) ** 2 + model.v0(xs)
    printed = printed_potential(model)(xs)
    diff = printed - derived
    return {
        "model": model.name,
        "samples": int(xs.size),
        "max_abs_diff": float(np.max(np.abs(diff))),
        "mean_diff": float(np.mean(diff)),
        "matches": bool(np.max(np.abs(diff)) <= 1e-9),
    }


# ---------------------------------------------------------------------------
# registry and sampling helpers


def get_superpotential(
    name: str, n: int, a: float = 1.0, b: float = 0.0, confine_cmm: bool = False
) -> Superpotential:
    """Look up a superpotential by model name for the CLI and config files."""
    if name == "example3":
        if n != 3:
            raise InvalidModeError("example3 is a three-particle model (n=3)")
        return example3(a)
    if name == "weierstrass":
        raise InvalidModeError(
            "the weierstrass pair model is out of scope in this package"
        )
    model = pair_model(name, a=a, b=b)
    cmm = a if (confine_cmm and name == "calogero") else None
    return pairwise_superpotential(model, n, cmm_frequency=cmm)


def default_sample_points(sp: Superpotential, count: int, seed: int = 1729) -> np.ndarray:
    """Seeded sample points that stay clear of the model's singular set.

    Pairwise models get descending, well-separated coordinates (separations
    inside (0, pi) for sutherland); example3 is sampled from a plain
    gaussian cloud.
    """
    rng = np.random.default_rng(seed)
    n = sp.n
    if sp.name == "example3":
        return rng.normal(scale=1.2, size=(count, n))
    spacing = math.pi / (n + 1) if sp.name == "sutherland" else 0.9
    base = np.arange(n - 1, -1, -1, dtype=float) * spacing
    base -= base.mean()
    jitter = rng.uniform(-0.2 * spacing, 0.2 * spacing, size=(count, n))
    shift = rng.uniform(-0.5, 0.5, size=(count, 1))
    if sp.name == "sutherland":
        shift = np.zeros((count, 1))
    return base[None, :] + jitter + shift
