"""Grid discretization, eigensolvers, and SUSY pairing verification."""

import math

import numpy as np
import pytest
import scipy.linalg

from susyblocks import (
    ConvergenceError,
    GridSpec,
    InvalidModeError,
    InvalidSectorError,
    build_R,
    eigen_lowest,
    eigen_near,
    example3,
    pair_model,
    pairwise_superpotential,
    relative_block,
    verify_pairing,
)
from susyblocks import spectral
from susyblocks.hamiltonian import BlockOperatorSpec, build_supercharge
from susyblocks.serialize import canonical_json
from susyblocks.spectral import (
    discretize_block,
    discretize_supercharge,
    example3_oscillator_check,
    map_eigenfunction,
    roughness,
    susy_composed_hamiltonian,
    susy_composed_pair,
)


def scalar_block(n, f, label="custom"):
    """Spin-free test block with potential f(particle points)."""
    return BlockOperatorSpec(
        n=n, sector=0, branch="lower", dim=1, label=label,
        scalar_part=f, matrix_part=lambda pts: np.zeros((pts.shape[0], 1, 1)),
    )


# ---------------------------------------------------------------------------
# grids


def test_gridspec_dirichlet_geometry():
    g = GridSpec(n=3, m=5, lo=(-1.0, 0.0), hi=(1.0, 4.0))
    assert g.spacing == (2.0 / 6.0, 4.0 / 6.0)
    assert g.num_points == 25
    ax = g.axes()
    assert ax[0][0] == pytest.approx(-1.0 + 2.0 / 6.0)
    assert ax[0][-1] == pytest.approx(1.0 - 2.0 / 6.0)
    assert g.mesh().shape == (25, 2)
    assert set(g.to_dict()) == {"m", "lo", "hi", "bc", "spacing"}


def test_gridspec_periodic_geometry():
    g = GridSpec(n=2, m=8, lo=0.0, hi=2.0, bc="periodic")
    assert g.spacing == (0.25,)
    ax = g.axes()[0]
    assert ax[0] == 0.0
    assert ax[-1] == pytest.approx(2.0 - 0.25)


def test_gridspec_centered_and_broadcast():
    g = GridSpec.centered(4, 10, 0.0, 6.0)
    assert g.lo == (-6.0, -6.0, -6.0)
    assert g.hi == (6.0, 6.0, 6.0)
    g2 = GridSpec.centered(3, 10, (1.0, -1.0), 2.0)
    assert g2.lo == (-1.0, -3.0)


def test_gridspec_validation():
    with pytest.raises(InvalidModeError):
        GridSpec(n=1, m=10, lo=0.0, hi=1.0)
    with pytest.raises(InvalidModeError):
        GridSpec(n=2, m=2, lo=0.0, hi=1.0)
    with pytest.raises(InvalidModeError):
        GridSpec(n=2, m=10, lo=1.0, hi=1.0)
    with pytest.raises(InvalidModeError):
        GridSpec(n=2, m=10, lo=0.0, hi=1.0, bc="absorbing")


def test_particle_points_have_zero_center_of_mass():
    g = GridSpec.centered(4, 4, 0.3, 2.0)
    xs = g.particle_points()
    assert xs.shape == (64, 4)
    assert np.max(np.abs(xs.sum(axis=1))) < 1e-12
    # round trip: relative coordinates of the particle points are the mesh
    r_rel = build_R(4).entries[:3]
    assert np.max(np.abs(xs @ r_rel.T - g.mesh())) < 1e-12


# ---------------------------------------------------------------------------
# reference spectra


def test_one_dimensional_oscillator():
    g = GridSpec(n=2, m=400, lo=-8.0, hi=8.0)
    # x = particle difference / sqrt 2 is the grid coordinate
    op = discretize_block(
        scalar_block(2, lambda pts: ((pts[:, 0] - pts[:, 1]) / math.sqrt(2.0)) ** 2 / 2.0),
        g,
    )
    vals, vecs = eigen_lowest(op, 3)
    assert np.allclose(vals, [0.5, 1.5, 2.5], atol=1e-3)
    assert roughness(g, 1, vecs[:, 0]) < 0.5


def test_particle_in_a_box():
    L = 1.0
    g = GridSpec(n=2, m=1200, lo=0.0, hi=L)
    op = discretize_block(scalar_block(2, lambda pts: np.zeros(pts.shape[0])), g)
    vals, _ = eigen_lowest(op, 3)
    expect = [math.pi**2 * k**2 / (2 * L**2) for k in (1, 2, 3)]
    assert np.allclose(vals, expect, rtol=1e-4)


def test_periodic_free_particle_has_flat_ground_state():
    g = GridSpec(n=2, m=30, lo=0.0, hi=2.0, bc="periodic")
    op = discretize_block(scalar_block(2, lambda pts: np.zeros(pts.shape[0])), g)
    vals, vecs = eigen_lowest(op, 1)
    assert abs(vals[0]) < 1e-10
    v = vecs[:, 0]
    assert np.max(np.abs(v - v.mean())) < 1e-8


def osc2d_block():
    r_rel = build_R(3).entries[:2]

    def scalar(pts):
        y = pts @ r_rel.T
        return 0.5 * np.sum(y**2, axis=1)

    return scalar_block(3, scalar, label="osc2d")


def test_two_dimensional_oscillator_degeneracies():
    g = GridSpec.centered(3, 50, 0.0, 6.0)
    op = discretize_block(osc2d_block(), g)
    vals, _ = eigen_lowest(op, 6)
    assert abs(vals[0] - 1.0) < 5e-3
    assert np.allclose(vals[1:3], 2.0, atol=2e-2)
    assert np.allclose(vals[3:6], 3.0, atol=3e-2)


def test_dense_and_sparse_paths_agree(monkeypatch):
    g = GridSpec.centered(3, 50, 0.0, 6.0)
    op = discretize_block(osc2d_block(), g)
    dense_vals, _ = eigen_lowest(op, 6)
    dense_near, _ = eigen_near(op, 4, 2.0)
    monkeypatch.setattr(spectral, "DENSE_CUTOFF", 10)
    sparse_vals, _ = eigen_lowest(op, 6, lower_bound=0.0)
    sparse_near, _ = eigen_near(op, 4, 2.0)
    assert np.max(np.abs(dense_vals - sparse_vals)) < 1e-8
    assert np.max(np.abs(dense_near - sparse_near)) < 1e-8


def test_eigen_near_windows_around_sigma():
    g = GridSpec.centered(3, 24, 0.0, 6.0)
    op = discretize_block(osc2d_block(), g)
    allvals = scipy.linalg.eigh(op.matrix.toarray(), eigvals_only=True)
    for sigma in (1.7, 2.6):
        vals, _ = eigen_near(op, 3, sigma)
        want = np.sort(allvals[np.argsort(np.abs(allvals - sigma))[:3]])
        assert np.allclose(vals, want, atol=1e-10)


def test_eigen_argument_validation():
    g = GridSpec.centered(2, 10, 0.0, 3.0)
    op = discretize_block(scalar_block(2, lambda pts: np.zeros(pts.shape[0])), g)
    with pytest.raises(InvalidModeError):
        eigen_lowest(op, 0)
    with pytest.raises(InvalidModeError):
        eigen_lowest(op, 11)
    with pytest.raises(InvalidModeError):
        eigen_near(op, 0, 1.0)


# ---------------------------------------------------------------------------
# composed operators


def two_particle_sp(a=1.0):
    return pairwise_superpotential(pair_model("calogero", a=a), 2)


def test_composed_zero_mode_two_particles():
    g = GridSpec.centered(2, 800, 0.0, 5.0)
    h_low, h_high, q = susy_composed_pair(two_particle_sp(), 0, g)
    vals, vecs = eigen_lowest(h_low, 1)
    assert abs(vals[0]) < 1e-8
    assert map_eigenfunction(q, vecs[:, 0]) is None


def test_composed_pair_matrix_identities():
    g = GridSpec.centered(3, 10, 0.0, 6.0)
    h_low, h_high, q = susy_composed_pair(example3(1.0), 0, g)
    m = q.matrix
    assert np.max(np.abs((h_low.matrix - m.T @ m))) == 0.0
    assert np.max(np.abs((h_high.matrix - m @ m.T))) == 0.0
    # exact intertwining at finite resolution, by construction
    assert np.max(np.abs(h_high.matrix @ m - m @ h_low.matrix)) < 1e-12


def test_composed_hamiltonian_assembly():
    sp = example3(1.0)
    g = GridSpec.centered(3, 8, 0.0, 6.0)
    q0 = discretize_supercharge(build_supercharge(sp, 0), g)
    q1 = discretize_supercharge(build_supercharge(sp, 1), g)
    h_low, _, _ = susy_composed_pair(sp, 0, g)

    single = susy_composed_hamiltonian(q0, None)
    assert np.max(np.abs(single.matrix - h_low.matrix)) == 0.0

    middle = susy_composed_hamiltonian(q1, q0.T)
    want = q1.matrix.T @ q1.matrix + q0.matrix @ q0.matrix.T
    assert np.max(np.abs(middle.matrix - want)) < 1e-14
    assert np.max(np.abs(middle.matrix - middle.matrix.T)) == 0.0
    vals, _ = eigen_lowest(middle, 1)
    assert vals[0] > -1e-9  # positive semidefinite

    with pytest.raises(InvalidModeError):
        susy_composed_hamiltonian(None, None)
    with pytest.raises(InvalidModeError):
        susy_composed_hamiltonian(q1, q1.T)


def test_nonzero_spectra_of_composed_pair_coincide():
    # matrix-level SUSY: away from kernels the two spectra are identical
    sp = example3(1.0)
    g = GridSpec.centered(3, 16, 0.0, 6.0)
    h_low, h_high, q = susy_composed_pair(sp, 0, g)
    p = g.num_points
    lo = scipy.linalg.eigh(h_low.matrix.toarray(), eigvals_only=True)
    hi = scipy.linalg.eigh(h_high.matrix.toarray(), eigvals_only=True)
    structural = p * (q.dim_row - q.dim_col)
    assert structural == p
    kept = hi[structural:]
    assert np.max(np.abs(hi[:structural])) < 1e-10
    assert len(kept) == len(lo)
    assert np.max(np.abs(kept - lo) / np.maximum(1.0, np.abs(lo))) < 1e-10


def test_composed_and_direct_blocks_converge_together():
    # both discretizations are O(h^2); their disagreement must shrink 4x per halving
    sp = two_particle_sp()

    def deviation(m):
        g = GridSpec.centered(2, m, 0.0, 5.0)
        h_low, _, _ = susy_composed_pair(sp, 0, g)
        direct = relative_block(sp, 0, g)
        vc = scipy.linalg.eigh(h_low.matrix.toarray(), eigvals_only=True, subset_by_index=[0, 5])
        vd = scipy.linalg.eigh(direct.matrix.toarray(), eigvals_only=True, subset_by_index=[0, 5])
        return max(float(np.min(np.abs(vd - e))) for e in vc)

    assert deviation(60) / deviation(120) > 3.0


def test_roughness_separates_smooth_from_checkerboard():
    g = GridSpec.centered(3, 20, 0.0, 5.0)
    xs = g.mesh()
    smooth = np.exp(-np.sum(xs**2, axis=1))
    assert roughness(g, 1, smooth) < 0.5
    i, j = np.divmod(np.arange(g.num_points), g.m)
    board = smooth * (-1.0) ** (i + j)
    assert roughness(g, 1, board) > 1.5


def test_map_eigenfunction_on_null_and_generic_vectors():
    g = GridSpec.centered(3, 12, 0.0, 6.0)
    q = discretize_supercharge(build_supercharge(example3(1.0), 0), g)
    u, s, vt = np.linalg.svd(q.matrix.toarray())
    left_null = u[:, -1]  # rows exceed columns, so exact left nulls exist
    assert map_eigenfunction(q.T, left_null) is None
    generic = np.random.default_rng(0).standard_normal(q.matrix.shape[1])
    image = map_eigenfunction(q, generic)
    assert image is not None
    assert np.linalg.norm(image) == pytest.approx(1.0, abs=1e-12)


def test_discretize_validation():
    g = GridSpec.centered(3, 6, 0.0, 5.0)
    with pytest.raises(InvalidModeError):
        discretize_block(scalar_block(2, lambda pts: np.zeros(pts.shape[0])), g)
    with pytest.raises(InvalidModeError):
        discretize_supercharge(build_supercharge(two_particle_sp(), 0), g)


# ---------------------------------------------------------------------------
# pairing verification


def test_verify_pairing_example3_smoke():
    rep = verify_pairing(example3(1.0), GridSpec.centered(3, 24, 0.0, 8.0), (0, 1), k=6)
    assert rep.passed
    assert len(rep.pairs) >= 4
    for p in rep.pairs:
        assert p["residual"] < 1e-6
    assert not rep.unmatched
    d = rep.to_dict()
    assert d["sector"] == [0, 1]
    assert d["branch"] == "relative"
    assert d["passed"] is True
    assert list(d["eigenvalues"]["low"]) == sorted(d["eigenvalues"]["low"])


def test_verify_pairing_upper_adjacent_sectors():
    # deficiency sits on the low side here; exercises the anchored solve order
    rep = verify_pairing(example3(1.0), GridSpec.centered(3, 60, 0.0, 8.0), (1, 2), k=6)
    assert rep.passed
    assert len(rep.pairs) == 6
    assert np.allclose(rep.eigenvalues_low, rep.eigenvalues_high, atol=1e-8)


def test_verify_pairing_two_particles_reports_kernel():
    rep = verify_pairing(two_particle_sp(), GridSpec.centered(2, 800, 0.0, 5.0), (0, 1), k=6)
    assert rep.passed
    sides = {c["side"] for c in rep.kernel_candidates}
    assert "low" in sides
    assert any(f for f in rep.doubler_flags_low + rep.doubler_flags_high)


def test_verify_pairing_sector_validation():
    sp = example3(1.0)
    g = GridSpec.centered(3, 8, 0.0, 6.0)
    with pytest.raises(InvalidSectorError):
        verify_pairing(sp, g, (0, 2))
    with pytest.raises(InvalidSectorError):
        verify_pairing(sp, g, (1, 0))


def test_verify_pairing_teeth_tolerance():
    # an impossible tolerance must fail the match, not silently pass
    rep = verify_pairing(
        example3(1.0), GridSpec.centered(3, 24, 0.0, 8.0), (0, 1), k=6, tol=1e-15
    )
    assert not rep.passed


def test_verify_pairing_teeth_vacuous_kernel():
    # a kernel threshold above the whole window leaves nothing to match: fail
    rep = verify_pairing(
        example3(1.0),
        GridSpec.centered(3, 24, 0.0, 8.0),
        (0, 1),
        k=6,
        kernel_threshold=1e6,
    )
    assert not rep.passed
    assert not rep.pairs


def test_verify_pairing_deterministic():
    sp = example3(1.0)
    g = GridSpec.centered(3, 20, 0.0, 8.0)
    a = canonical_json(verify_pairing(sp, g, (0, 1), k=4).to_dict())
    b = canonical_json(verify_pairing(sp, g, (0, 1), k=4).to_dict())
    assert a == b


def test_example3_oscillator_check_structure():
    d = example3_oscillator_check(example3(1.0), m=48)
    assert d["degeneracies"] == [1, 2, 3]
    assert np.allclose(d["gaps"], 1.0, atol=2e-2)
    assert abs(d["level_means"][0] - 4.0) < 2e-2
