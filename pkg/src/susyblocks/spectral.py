"""Grid discretization of the relative blocks and SUSY spectrum checks.

The center of mass is split off exactly, so spectra are computed on a
uniform grid over the n-1 relative collective coordinates y_1..y_{n-1};
particle positions are recovered through the orthogonal map with y_n = 0.

Two discretization routes coexist on purpose. The composed route builds the
supercharge matrix Q (antisymmetric central first differences, so the
discrete adjoint is exactly the transpose) and forms the partner pair
(Q^T Q, Q Q^T), which is isospectral away from kernels by construction at
any grid resolution; it is the right object for pairing claims. The direct
route discretizes -(1/2) Laplacian + V(x) with the standard second
difference; it is the right object for physical eigenvalues. The two agree
only up to discretization error.

Composed central differences admit checkerboard (grid-doubler) eigenvectors
whose eigenvalues shadow the partner operator's spectrum; report entries
carry a roughness flag so those can be told apart from smooth states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse as sparse
import scipy.sparse.linalg as sla

from .errors import ConvergenceError, InvalidModeError, InvalidSectorError
from .hamiltonian import BlockOperatorSpec, SuperchargeSpec, build_block, build_supercharge
from .jacobi import build_R
from .superpotential import Superpotential

__all__ = [
    "GridSpec",
    "DiscreteOperator",
    "discretize_block",
    "relative_block",
    "discretize_supercharge",
    "susy_composed_pair",
    "susy_composed_hamiltonian",
    "eigen_lowest",
    "eigen_near",
    "roughness",
    "map_eigenfunction",
    "SpectrumReport",
    "verify_pairing",
    "example3_oscillator_check",
    "DENSE_CUTOFF",
    "DEFAULT_SEED",
]

DENSE_CUTOFF = 3000
DEFAULT_SEED = 1729
BOUNDARY_CONDITIONS = ("dirichlet", "periodic")


@dataclass(frozen=True)
class GridSpec:
    """Uniform tensor grid over the relative coordinates.

    dirichlet keeps the m interior nodes of [lo, hi] (functions vanish at
    the walls); periodic keeps m nodes with hi identified with lo.
    """

    n: int
    m: int
    lo: tuple
    hi: tuple
    bc: str = "dirichlet"

    def __post_init__(self):
        if self.n < 2:
            raise InvalidModeError(f"need n >= 2 particles, got {self.n}")
        if self.m < 3:
            raise InvalidModeError(f"need at least 3 nodes per axis, got {self.m}")
        if self.bc not in BOUNDARY_CONDITIONS:
            raise InvalidModeError(
                f"bc must be one of {BOUNDARY_CONDITIONS}, got {self.bc!r}"
            )
        k = self.n - 1
        lo = tuple(float(v) for v in np.broadcast_to(self.lo, (k,)))
        hi = tuple(float(v) for v in np.broadcast_to(self.hi, (k,)))
        if any(b <= a for a, b in zip(lo, hi)):
            raise InvalidModeError("each axis needs hi > lo")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def centered(cls, n: int, m: int, center, half_width, bc: str = "dirichlet"):
        k = n - 1
        c = np.broadcast_to(np.asarray(center, dtype=float), (k,))
        w = np.broadcast_to(np.asarray(half_width, dtype=float), (k,))
        return cls(n=n, m=m, lo=tuple(c - w), hi=tuple(c + w), bc=bc)

    @property
    def spacing(self) -> tuple:
        denom = self.m + 1 if self.bc == "dirichlet" else self.m
        return tuple((b - a) / denom for a, b in zip(self.lo, self.hi))

    @property
    def max_spacing(self) -> float:
        return max(self.spacing)

    @property
    def num_points(self) -> int:
        return self.m ** (self.n - 1)

    def axes(self) -> list[np.ndarray]:
        out = []
        for a, h in zip(self.lo, self.spacing):
            if self.bc == "dirichlet":
                out.append(a + h * np.arange(1, self.m + 1))
            else:
                out.append(a + h * np.arange(self.m))
        return out

    def mesh(self) -> np.ndarray:
        """All grid points as (num_points, n-1), axis 0 slowest."""
        grids = np.meshgrid(*self.axes(), indexing="ij")
        return np.stack([g.reshape(-1) for g in grids], axis=1)

    def particle_points(self) -> np.ndarray:
        """Map grid points to particle coordinates with the center of mass at 0."""
        r_rel = build_R(self.n).entries[: self.n - 1]
        return self.mesh() @ r_rel

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "lo": list(self.lo),
            "hi": list(self.hi),
            "bc": self.bc,
            "spacing": list(self.spacing),
        }


def _d2_1d(m: int, h: float, bc: str) -> sparse.csr_matrix:
    main = np.full(m, -2.0)
    off = np.ones(m - 1)
    mat = sparse.diags([off, main, off], [-1, 0, 1], format="lil")
    if bc == "periodic":
        mat[0, m - 1] = 1.0
        mat[m - 1, 0] = 1.0
    return (mat / h**2).tocsr()


def _d1_1d(m: int, h: float, bc: str) -> sparse.csr_matrix:
    off = np.ones(m - 1)
    mat = sparse.diags([-off, off], [-1, 1], format="lil")
    if bc == "periodic":
        mat[0, m - 1] = -1.0
        mat[m - 1, 0] = 1.0
    return (mat / (2.0 * h)).tocsr()


def _lift(grid: GridSpec, axis: int, op: sparse.spmatrix) -> sparse.csr_matrix:
    factors = [sparse.identity(grid.m, format="csr") for _ in range(grid.n - 1)]
    factors[axis] = op.tocsr()
    out = factors[0]
    for f in factors[1:]:
        out = sparse.kron(out, f, format="csr")
    return out


def _kinetic(grid: GridSpec) -> sparse.csr_matrix:
    total = None
    for axis, h in enumerate(grid.spacing):
        term = _lift(grid, axis, _d2_1d(grid.m, h, grid.bc))
        total = term if total is None else total + term
    return (-0.5 * total).tocsr()


def _point_blocks(values: np.ndarray) -> sparse.csr_matrix:
    """(p, a, b) stacked blocks to a block-diagonal sparse matrix, point-major."""
    p, da, db = values.shape
    rows = (np.arange(p)[:, None, None] * da + np.arange(da)[None, :, None])
    cols = (np.arange(p)[:, None, None] * db + np.arange(db)[None, None, :])
    rows = np.broadcast_to(rows, values.shape).reshape(-1)
    cols = np.broadcast_to(cols, values.shape).reshape(-1)
    return sparse.coo_matrix(
        (values.reshape(-1), (rows, cols)), shape=(p * da, p * db)
    ).tocsr()


@dataclass(frozen=True)
class DiscreteOperator:
    matrix: sparse.csr_matrix
    grid: GridSpec
    dim_row: int
    dim_col: int
    label: str

    @property
    def shape(self) -> tuple:
        return self.matrix.shape

    @property
    def T(self) -> "DiscreteOperator":
        return DiscreteOperator(
            matrix=self.matrix.T.tocsr(),
            grid=self.grid,
            dim_row=self.dim_col,
            dim_col=self.dim_row,
            label=f"{self.label}^T",
        )


def discretize_block(block: BlockOperatorSpec, grid: GridSpec) -> DiscreteOperator:
    """-(1/2) Laplacian + V on the grid, (points x dim) unknowns point-major.

    The potential is evaluated at particle coordinates with the center of
    mass at zero; pass a block built from a superpotential without a
    center-of-mass term unless the W_C constants on the y_n = 0 plane are
    wanted.
    """
    if block.n != grid.n:
        raise InvalidModeError(f"block has n={block.n}, grid has n={grid.n}")
    pot = block.potential(grid.particle_points())
    mat = sparse.kron(_kinetic(grid), sparse.identity(block.dim), format="csr")
    mat = (mat + _point_blocks(pot)).tocsr()
    return DiscreteOperator(
        matrix=mat, grid=grid, dim_row=block.dim, dim_col=block.dim, label=block.label
    )


def relative_block(sp: Superpotential, sector: int, grid: GridSpec) -> DiscreteOperator:
    """Direct discretization of the center-of-mass-free relative block."""
    return discretize_block(build_block(sp.without_cmm(), sector, "lower"), grid)


def discretize_supercharge(q: SuperchargeSpec, grid: GridSpec) -> DiscreteOperator:
    """Matrix of q+ on the grid; the discrete q- is exactly the transpose.

    The derivative along each relative axis is the antisymmetric central
    difference, so (1/sqrt 2)(d/dy_b + w_b) discretizes to a matrix whose
    transpose is the discretization of (1/sqrt 2)(-d/dy_b + w_b) with the
    transposed coefficient tensors.
    """
    if q.n != grid.n:
        raise InvalidModeError(f"supercharge has n={q.n}, grid has n={grid.n}")
    xs = grid.particle_points()
    mat = _point_blocks(q.zero_order(xs))
    for axis, h in enumerate(grid.spacing):
        d1 = _lift(grid, axis, _d1_1d(grid.m, h, grid.bc))
        cg_b = q.cg.tensor[axis] / math.sqrt(2.0)
        mat = mat + sparse.kron(d1, sparse.csr_matrix(cg_b), format="csr")
    return DiscreteOperator(
        matrix=mat.tocsr(),
        grid=grid,
        dim_row=q.cg.dim_up,
        dim_col=q.cg.dim_lo,
        label=f"{q.sp.name}-q+[M={q.sector}]",
    )


def susy_composed_pair(sp: Superpotential, sector: int, grid: GridSpec):
    """(h_low, h_high, q) with h_low = q^T q and h_high = q q^T.

    Exactly intertwined at any resolution: h_high q = q h_low as matrices,
    so the nonzero spectra coincide identically. When the two sector
    dimensions differ, the wider operator has a structural kernel of
    dimension at least |dim difference| * num_points on top of any physical
    zero modes.
    """
    q = discretize_supercharge(build_supercharge(sp, sector), grid)
    h_low = DiscreteOperator(
        matrix=(q.matrix.T @ q.matrix).tocsr(),
        grid=grid,
        dim_row=q.dim_col,
        dim_col=q.dim_col,
        label=f"{sp.name}-h[M={sector}]",
    )
    h_high = DiscreteOperator(
        matrix=(q.matrix @ q.matrix.T).tocsr(),
        grid=grid,
        dim_row=q.dim_row,
        dim_col=q.dim_row,
        label=f"{sp.name}-h[M={sector + 1}]",
    )
    return h_low, h_high, q


def susy_composed_hamiltonian(
    plus: DiscreteOperator | None, minus: DiscreteOperator | None
) -> DiscreteOperator:
    """Anticommutator block on one sector from its two discrete supercharges.

    plus raises out of the sector (matrix of q+ from M), minus lowers out of
    it (matrix of q- from M, the transpose of the q+ from M-1); the sector
    block of {Q+, Q-} is plus^T plus + minus^T minus. Either operator may be
    None at the edge sectors. Exactly symmetric and positive semidefinite by
    construction.
    """
    if plus is None and minus is None:
        raise InvalidModeError("need at least one supercharge")
    terms = []
    ref = None
    for op in (plus, minus):
        if op is None:
            continue
        terms.append((op.matrix.T @ op.matrix).tocsr())
        ref = op
    if len(terms) == 2 and terms[0].shape != terms[1].shape:
        raise InvalidModeError(
            f"supercharges act on different sectors: {terms[0].shape} vs {terms[1].shape}"
        )
    total = terms[0] if len(terms) == 1 else (terms[0] + terms[1]).tocsr()
    # both supercharges consume the sector, so its dimension is their column count
    dim = plus.dim_col if plus is not None else minus.dim_col
    return DiscreteOperator(
        matrix=total,
        grid=ref.grid,
        dim_row=dim,
        dim_col=dim,
        label="composed-anticommutator",
    )


# ---------------------------------------------------------------------------
# eigenvalues


def _gershgorin_lower(mat: sparse.csr_matrix) -> float:
    diag = mat.diagonal()
    absrow = np.abs(mat).sum(axis=1)
    absrow = np.asarray(absrow).reshape(-1)
    return float(np.min(diag - (absrow - np.abs(diag))))


def _check_eigen_residuals(mat, vals, vecs, residual_tol: float) -> None:
    worst = 0.0
    for i in range(len(vals)):
        r = np.linalg.norm(mat @ vecs[:, i] - vals[i] * vecs[:, i])
        worst = max(worst, r / max(1.0, abs(vals[i])))
    if worst > residual_tol:
        raise ConvergenceError(
            f"eigenpair residual {worst:.3e} exceeds {residual_tol:.1e}"
        )


def eigen_lowest(
    op: DiscreteOperator | sparse.spmatrix,
    k: int,
    seed: int = DEFAULT_SEED,
    residual_tol: float = 1e-7,
    lower_bound: float | None = None,
):
    """Lowest k eigenpairs of a symmetric operator, ascending.

    Dense below DENSE_CUTOFF; otherwise shift-invert Lanczos started just
    below lower_bound when the caller knows one (0.0 for positive
    semidefinite operators; this tightens the spectral ratio enormously),
    else below the Gershgorin bound, falling back to plain
    smallest-algebraic. Every returned pair is residual-checked.
    """
    mat = op.matrix if isinstance(op, DiscreteOperator) else op.tocsr()
    dim = mat.shape[0]
    if not 1 <= k <= dim:
        raise InvalidModeError(f"need 1 <= k <= {dim}, got k={k}")
    if dim <= DENSE_CUTOFF:
        vals, vecs = scipy.linalg.eigh(mat.toarray(), subset_by_index=[0, k - 1])
    else:
        rng = np.random.default_rng(seed)
        v0 = rng.standard_normal(dim)
        g = _gershgorin_lower(mat) if lower_bound is None else lower_bound
        sigma = g - 0.1 * (1.0 + abs(g))
        try:
            vals, vecs = sla.eigsh(mat, k=k, sigma=sigma, which="LM", v0=v0)
        except Exception:
            vals, vecs = sla.eigsh(mat, k=k, which="SA", v0=v0)
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]
    _check_eigen_residuals(mat, vals, vecs, residual_tol)
    return vals, vecs


def eigen_near(
    op: DiscreteOperator | sparse.spmatrix,
    k: int,
    sigma: float,
    seed: int = DEFAULT_SEED,
    residual_tol: float = 1e-7,
):
    """k eigenpairs of a symmetric operator nearest sigma, ascending.

    The workhorse for rank-deficient composed operators: aiming sigma into
    the gap between the structural kernel and the first physical level keeps
    the huge degenerate zero cluster out of the Krylov iteration entirely,
    where a bottom-up solve would stall on it.
    """
    mat = op.matrix if isinstance(op, DiscreteOperator) else op.tocsr()
    dim = mat.shape[0]
    if not 1 <= k <= dim:
        raise InvalidModeError(f"need 1 <= k <= {dim}, got k={k}")
    if dim <= DENSE_CUTOFF:
        allvals, allvecs = scipy.linalg.eigh(mat.toarray())
        idx = np.sort(np.argsort(np.abs(allvals - sigma))[:k])
        vals, vecs = allvals[idx], allvecs[:, idx]
    else:
        rng = np.random.default_rng(seed)
        v0 = rng.standard_normal(dim)
        vals = vecs = None
        for shift in (sigma, sigma * 1.05 + 1e-8):
            try:
                vals, vecs = sla.eigsh(mat, k=k, sigma=shift, which="LM", v0=v0)
                break
            except sla.ArpackNoConvergence as exc:
                # partial results are fine as long as something converged;
                # stragglers are usually members of a huge tied cluster
                if len(exc.eigenvalues):
                    vals, vecs = exc.eigenvalues, exc.eigenvectors
                    break
            except Exception:
                continue
        if vals is None:
            raise ConvergenceError(f"shift-invert failed near sigma={sigma:.6e}")
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]
    _check_eigen_residuals(mat, vals, vecs, residual_tol)
    return vals, vecs


def roughness(grid: GridSpec, dim: int, vec: np.ndarray) -> float:
    """h^2-scaled curvature of a grid eigenvector; near 4 per checkerboard axis.

    Smooth modes give O(h^2); grid doublers picked up by composed central
    differences give O(1) values, so a threshold of 1.5 separates them.
    """
    total = 0.0
    v = vec.reshape(grid.num_points, dim)
    for axis, h in enumerate(grid.spacing):
        d2 = _lift(grid, axis, _d2_1d(grid.m, h, grid.bc))
        w = d2 @ v
        total += -(h**2) * float(np.sum(v * w))
    return total / float(np.sum(vec**2))


def map_eigenfunction(
    q: DiscreteOperator, vec: np.ndarray, threshold: float = 1e-6
):
    """Partner eigenvector q v (normalized), or None when v is annihilated.

    The kernel test is on |q v|^2 / |v|^2, which for a unit eigenvector of
    q^T q equals its eigenvalue.
    """
    w = q.matrix @ vec
    ratio = float(np.sum(w**2) / np.sum(vec**2))
    if ratio < threshold:
        return None
    return w / np.linalg.norm(w)


# ---------------------------------------------------------------------------
# pairing verification


@dataclass(frozen=True)
class SpectrumReport:
    n: int
    sectors: tuple
    model: str
    grid: GridSpec
    eigenvalues_low: np.ndarray
    eigenvalues_high: np.ndarray
    pairs: list
    kernel_candidates: list
    unmatched: list
    doubler_flags_low: list
    doubler_flags_high: list
    kernel_threshold: float
    tol: float | None
    passed: bool

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "sector": list(self.sectors),
            "branch": "relative",
            "model": self.model,
            "grid": self.grid.to_dict(),
            "eigenvalues": {
                "low": [float(v) for v in self.eigenvalues_low],
                "high": [float(v) for v in self.eigenvalues_high],
            },
            "pairs": self.pairs,
            "kernel_candidates": self.kernel_candidates,
            "unmatched": self.unmatched,
            "doubler_flags": {
                "low": self.doubler_flags_low,
                "high": self.doubler_flags_high,
            },
            "kernel_threshold": self.kernel_threshold,
            "tol": self.tol,
            "passed": self.passed,
        }


def _pair_tolerance(e: float, h2: float, tol: float | None) -> float:
    if tol is not None:
        return float(tol)
    return max(1e-3, 5.0 * h2 * max(1.0, abs(e)))


def _nonkernel_eigens(mat, dim_total, k, structural, kernel_threshold, anchor_top, seed):
    """Lowest k above-kernel eigenpairs of one composed operator, ascending.

    structural is a lower bound on the dimension of the exact zero eigenspace
    forced by a sector-dimension mismatch (0 when the operator has full
    structural rank). Rank-deficient dense operators widen the eigh window
    past the kernel. Rank-deficient sparse ones are solved by shift-invert at
    sigma = 0.55 * anchor_top, where anchor_top bounds the wanted window from
    above (the partner's largest computed value): every eigenvalue below
    2 sigma then outranks the kernel cluster in inverted magnitude, so the
    Krylov iteration never has to chew through ~structural exact zeros, which
    is where a bottom-up or badly aimed solve stalls.
    """
    pad = 4
    if dim_total <= DENSE_CUTOFF:
        top = min(dim_total - 1, structural + k + pad - 1)
        vals, vecs = scipy.linalg.eigh(mat.toarray(), subset_by_index=[0, top])
    elif structural == 0:
        vals, vecs = eigen_lowest(
            mat, min(k + pad, dim_total), seed=seed, lower_bound=0.0
        )
    else:
        if anchor_top is None or anchor_top <= kernel_threshold:
            raise ConvergenceError(
                "no partner level above the kernel threshold to aim shift-invert at"
            )
        sigma = 0.55 * anchor_top
        vals, vecs = eigen_near(mat, min(k + pad, dim_total), sigma, seed=seed)
    keep = np.flatnonzero(vals >= kernel_threshold)[:k]
    below = vals[vals < kernel_threshold]
    summary = None
    if below.size:
        summary = {
            "count": int(below.size),
            "min": float(np.min(below)),
            "max": float(np.max(below)),
        }
    return vals[keep], vecs[:, keep], summary


def verify_pairing(
    sp: Superpotential,
    grid: GridSpec,
    sectors=(0, 1),
    k: int = 10,
    tol: float | None = None,
    seed: int = DEFAULT_SEED,
    kernel_threshold: float | None = None,
) -> SpectrumReport:
    """Greedy spectral matching between two adjacent relative sectors.

    Both sector Hamiltonians are the composed products of the discrete
    supercharge between them (q^T q below, q q^T above), so their nonzero
    spectra agree identically and the check exercises the full chain from
    superpotential to supercharge matrix. Eigenvalues below the kernel
    threshold, default max(1e-6, h^2) because a discrete zero mode of a
    composed product sits at O(h^2), are reported as kernel candidates and
    excluded from matching, as are states with a small mapped norm
    |q v|^2 / |v|^2. The surviving lists are matched greedily in ascending
    order with per-pair tolerance max(1e-3, 5 h^2 max(1, |e|)) unless a flat
    tol is given; members of a degenerate cluster match one-to-one in order,
    which pairs the cluster as a set. Matching is only demanded inside the
    window both computed lists cover; an unmatched value inside the window
    fails the check, as does an empty match list.

    Every matched low vector v is pushed through the supercharge and the
    image w = q v is checked as an eigenvector of the upper operator through
    the residual |H w - e w| / |w|, recorded per pair.

    Center-of-mass confinement plays no role here: the supercharge acts on
    relative coordinates only.
    """
    m_lo, m_hi = (int(s) for s in sectors)
    if m_hi != m_lo + 1:
        raise InvalidSectorError(
            f"sectors must be adjacent ascending, got ({m_lo}, {m_hi})"
        )
    h_low, h_high, q = susy_composed_pair(sp, m_lo, grid)
    h2 = grid.max_spacing**2
    if kernel_threshold is None:
        kernel_threshold = max(1e-6, h2)
    p = grid.num_points
    d_lo, d_hi = q.dim_col, q.dim_row
    struct_lo = p * max(0, d_lo - d_hi)
    struct_hi = p * max(0, d_hi - d_lo)

    # solve the structurally full-rank side first; the top of its computed
    # window aims the shift-invert on the deficient side
    anchor_top = None
    if struct_lo == 0:
        vals_lo, vecs_lo, dropped_lo = _nonkernel_eigens(
            h_low.matrix, h_low.shape[0], k, 0, kernel_threshold, None, seed
        )
        if len(vals_lo):
            anchor_top = float(vals_lo[-1])
        vals_hi, vecs_hi, dropped_hi = _nonkernel_eigens(
            h_high.matrix,
            h_high.shape[0],
            k,
            struct_hi,
            kernel_threshold,
            anchor_top,
            seed,
        )
    else:
        vals_hi, vecs_hi, dropped_hi = _nonkernel_eigens(
            h_high.matrix, h_high.shape[0], k, 0, kernel_threshold, None, seed
        )
        if len(vals_hi):
            anchor_top = float(vals_hi[-1])
        vals_lo, vecs_lo, dropped_lo = _nonkernel_eigens(
            h_low.matrix,
            h_low.shape[0],
            k,
            struct_lo,
            kernel_threshold,
            anchor_top,
            seed,
        )

    flags_lo = [
        bool(roughness(grid, d_lo, vecs_lo[:, i]) > 1.5) for i in range(len(vals_lo))
    ]
    flags_hi = [
        bool(roughness(grid, d_hi, vecs_hi[:, i]) > 1.5) for i in range(len(vals_hi))
    ]

    kernel = []
    if dropped_lo is not None:
        kernel.append({"side": "low", **dropped_lo})
    if dropped_hi is not None:
        kernel.append({"side": "high", **dropped_hi})
    # mapped-norm kernel detection on the kept modes: a state annihilated by
    # the supercharge must not be asked to pair across
    lo_live = []
    for i in range(len(vals_lo)):
        vec = vecs_lo[:, i]
        w = q.matrix @ vec
        ratio = float(np.sum(w**2) / np.sum(vec**2))
        if ratio < kernel_threshold:
            kernel.append(
                {"side": "low", "value": float(vals_lo[i]), "mapped_ratio": ratio}
            )
        else:
            lo_live.append(i)
    hi_live = []
    qt = q.matrix.T.tocsr()
    for i in range(len(vals_hi)):
        vec = vecs_hi[:, i]
        w = qt @ vec
        ratio = float(np.sum(w**2) / np.sum(vec**2))
        if ratio < kernel_threshold:
            kernel.append(
                {"side": "high", "value": float(vals_hi[i]), "mapped_ratio": ratio}
            )
        else:
            hi_live.append(i)

    pairs = []
    unmatched = []
    ok = True
    if lo_live and hi_live:
        window = min(float(vals_lo[lo_live[-1]]), float(vals_hi[hi_live[-1]]))
        ii = jj = 0
        while ii < len(lo_live) and jj < len(hi_live):
            e_lo = float(vals_lo[lo_live[ii]])
            e_hi = float(vals_hi[hi_live[jj]])
            tau = _pair_tolerance(e_lo, h2, tol)
            if abs(e_lo - e_hi) <= tau:
                vec = vecs_lo[:, lo_live[ii]]
                w = q.matrix @ vec
                wn = np.linalg.norm(w)
                resid = float(np.linalg.norm(h_high.matrix @ w - e_lo * w) / wn)
                pairs.append({"e_low": e_lo, "e_high": e_hi, "residual": resid})
                if resid > tau:
                    ok = False
                ii += 1
                jj += 1
            elif e_lo < e_hi:
                if e_lo <= window + tau:
                    unmatched.append({"side": "low", "value": e_lo})
                    ok = False
                ii += 1
            else:
                if e_hi <= window + tau:
                    unmatched.append({"side": "high", "value": e_hi})
                    ok = False
                jj += 1
    if not pairs:
        ok = False  # vacuous run: nothing above the kernel on both sides
    return SpectrumReport(
        n=sp.n,
        sectors=(m_lo, m_hi),
        model=sp.name,
        grid=grid,
        eigenvalues_low=vals_lo,
        eigenvalues_high=vals_hi,
        pairs=pairs,
        kernel_candidates=kernel,
        unmatched=unmatched,
        doubler_flags_low=flags_lo,
        doubler_flags_high=flags_hi,
        kernel_threshold=float(kernel_threshold),
        tol=tol,
        passed=ok,
    )


def example3_oscillator_check(
    sp: Superpotential,
    m: int = 64,
    half_width: float = 5.0,
    k: int = 6,
    seed: int = DEFAULT_SEED,
) -> dict:
    """Lowest relative sector-0 levels of the three-particle example.

    The block is a shifted isotropic two-dimensional oscillator: uniform
    level gap equal to the coupling, degeneracies 1, 2, 3, ... Returns the
    computed levels, gap estimates, and degeneracy counts for the caller to
    judge against tolerance.
    """
    a = float(sp.params.get("a", 1.0))
    scale = max(1.0, abs(a)) ** -0.5
    grid = GridSpec.centered(sp.n, m, 0.0, half_width * scale)
    op = relative_block(sp, 0, grid)
    vals, _ = eigen_lowest(op, k, seed=seed)
    gaps = []
    groups = [[float(vals[0])]]
    for v in vals[1:]:
        if v - groups[-1][-1] > 0.25 * abs(a):
            gaps.append(float(v - groups[-1][-1]))
            groups.append([float(v)])
        else:
            groups[-1].append(float(v))
    return {
        "model": sp.name,
        "a": a,
        "grid": grid.to_dict(),
        "eigenvalues": [float(v) for v in vals],
        "level_means": [float(np.mean(g)) for g in groups],
        "gaps": gaps,
        "degeneracies": [len(g) for g in groups],
    }
