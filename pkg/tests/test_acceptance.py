"""Acceptance gate: eight criteria, one pass/fail line each.

Each test records 'ACCEPTANCE <k>: PASS/FAIL - detail' through the
acceptance_log fixture; conftest prints the collected lines in the terminal
summary so they appear whether or not capture is on.
"""

import itertools
import math
import time

import numpy as np
import scipy.linalg

from susyblocks import (
    GridSpec,
    b_matrix,
    eigen_lowest,
    example3,
    functional_eq_residual,
    get_superpotential,
    hook_dimension,
    identify_tableau,
    pair_model,
    pairwise_superpotential,
    potential_column_diagnostic,
    relative_block,
    rep_matrix_set,
    t_tilde,
    verify_irreducible,
    verify_pairing,
)
from susyblocks.cli import main as cli_main
from susyblocks.hamiltonian import (
    build_block,
    cm_anticommutator_residual,
    hs_form_consistency,
    intertwining_residual,
)
from susyblocks.serialize import canonical_json
from susyblocks.spectral import susy_composed_pair


def announce(log, k: int, ok: bool, detail: str) -> None:
    line = f"ACCEPTANCE {k}: {'PASS' if ok else 'FAIL'} - {detail}"
    print(line)
    log(line)


def test_criterion_1_pair_matrices_three_particles(acceptance_log):
    t0 = time.perf_counter()
    s = math.sqrt(3.0) / 2.0
    expect = {
        (1, 2): np.array([[-1.0, 0.0], [0.0, 1.0]]),
        (2, 3): np.array([[0.5, s], [s, -0.5]]),
        (1, 3): np.array([[0.5, -s], [-s, -0.5]]),
    }
    worst = max(
        float(np.max(np.abs(b_matrix(3, 1, i, j) - mat)))
        for (i, j), mat in expect.items()
    )
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-12 and elapsed < 1.0
    announce(acceptance_log, 1, ok, f"max entry deviation {worst:.2e}, {elapsed:.3f}s")
    assert ok


def test_criterion_2_hook_representations_to_n8(acceptance_log):
    t0 = time.perf_counter()
    worst_alg = 0.0
    worst_ip = 0.0
    failures = []
    for n in range(2, 9):
        for sector in range(n):
            reps = rep_matrix_set(n, sector)
            dim = reps.dim
            if dim != math.comb(n - 1, sector):
                failures.append(f"dim({n},{sector})")
            eye = np.eye(dim)
            for (i, j), B in reps.matrices.items():
                worst_alg = max(worst_alg, float(np.max(np.abs(B @ B.T - eye))))
                worst_alg = max(worst_alg, float(np.max(np.abs(B @ B - eye))))
            for i, j, k in itertools.combinations(range(1, n + 1), 3):
                bij, bjk, bik = reps.pair(i, j), reps.pair(j, k), reps.pair(i, k)
                worst_alg = max(
                    worst_alg, float(np.max(np.abs(bij @ bjk @ bij - bik)))
                )
            for (i, j), (k, l) in itertools.combinations(sorted(reps.matrices), 2):
                if len({i, j, k, l}) == 4:
                    a, b = reps.matrices[(i, j)], reps.matrices[(k, l)]
                    worst_alg = max(worst_alg, float(np.max(np.abs(a @ b - b @ a))))
            rep_report = verify_irreducible(n, sector)
            worst_ip = max(worst_ip, abs(rep_report.inner_product - 1.0))
            if not rep_report.passed:
                failures.append(f"irrep({n},{sector})")
            hook = (n - sector,) + (1,) * sector
            if identify_tableau(n, sector) != hook:
                failures.append(f"tableau({n},{sector})")
            if hook_dimension(hook) != dim:
                failures.append(f"hookdim({n},{sector})")
    elapsed = time.perf_counter() - t0
    ok = worst_alg <= 1e-12 and worst_ip <= 1e-9 and not failures and elapsed < 60.0
    announce(
        acceptance_log,
        2,
        ok,
        f"algebra {worst_alg:.2e}, <chi,chi> off by {worst_ip:.2e}, "
        f"{len(failures)} identity failures, {elapsed:.1f}s",
    )
    assert ok, failures


def test_criterion_3_rotated_last_transposition(acceptance_log):
    worst = 0.0
    for n in range(3, 9):
        T = t_tilde(n, n - 1, n)
        expect = np.eye(n)
        c = 1.0 / (n - 1)
        s = math.sqrt(n * (n - 2)) / (n - 1)
        expect[n - 3 : n - 1, n - 3 : n - 1] = [[c, s], [s, -c]]
        worst = max(worst, float(np.max(np.abs(T - expect))))
    ok = worst <= 1e-12
    announce(acceptance_log, 3, ok, f"max deviation from explicit block form {worst:.2e}")
    assert ok


def test_criterion_4_functional_equation_thousand_triples(acceptance_log):
    rng = np.random.default_rng(1729)
    details = []
    worst = 0.0
    cases = {
        "calogero": (1.3, 0.4, (0.3, 2.0)),
        "linear": (0.9, 0.0, (0.3, 2.0)),
        "sutherland": (1.2, 0.0, (0.2, 1.3)),
        "hyperbolic": (1.1, 0.0, (0.3, 2.0)),
    }
    v0_ok = True
    xs = np.array([0.5, 1.0, 1.7])
    for name, (a, b, box) in cases.items():
        m = pair_model(name, a=a, b=b)
        A = rng.uniform(*box, size=1000)
        B = rng.uniform(*box, size=1000)
        res = float(np.max(functional_eq_residual(m, A, B)))
        worst = max(worst, res)
        if name == "calogero":
            v0_ok &= bool(np.allclose(m.v0(xs), -0.5 * a**2 * xs**2 - a * b, atol=1e-14))
        elif name == "sutherland":
            v0_ok &= bool(np.allclose(m.v0(xs), a**2 / 3.0, atol=1e-14))
        else:
            v0_ok &= bool(np.allclose(m.v0(xs), -(a**2) / 3.0, atol=1e-14))
        diag = potential_column_diagnostic(m, np.linspace(0.4, 1.2, 9))
        details.append(f"{name} res {res:.1e} (column offset {diag['max_abs_diff']:.2e})")
    ok = worst <= 1e-12 and v0_ok
    announce(acceptance_log, 4, ok, "; ".join(details))
    assert ok


def test_criterion_5_block_structure_and_algebra(acceptance_log):
    cases = [
        example3(1.0),
        pairwise_superpotential(pair_model("sutherland", a=1.1), 3),
        pairwise_superpotential(pair_model("sutherland", a=1.1), 4),
    ]
    worst_off = 0.0
    worst_route = 0.0
    worst_resid = 0.0
    for sp in cases:
        hs = hs_form_consistency(sp, count=5)
        assert hs.passed, hs
        worst_off = max(worst_off, hs.max_off_block / hs.scale)
        worst_route = max(
            worst_route, hs.max_route_diff / hs.scale, hs.max_block_diff / hs.scale
        )
        for sector in range(sp.n - 1):
            it = intertwining_residual(sp, sector, "lower", count=5)
            worst_resid = max(worst_resid, it.relative)
            assert it.passed, it
            cm = cm_anticommutator_residual(sp, sector, count=5)
            worst_resid = max(worst_resid, cm.relative)
            assert cm.passed, cm
    ok = worst_off <= 1e-12 and worst_route <= 1e-9 and worst_resid <= 1e-6
    announce(
        acceptance_log,
        5,
        ok,
        f"off-block {worst_off:.1e}, route disagreement {worst_route:.1e}, "
        f"operator residuals {worst_resid:.1e}",
    )
    assert ok


def test_criterion_6_desk_scale_spectrum_pairing(acceptance_log):
    sp = example3(1.0)
    grid = GridSpec.centered(3, 128, 0.0, 8.0)

    block = build_block(sp.without_cmm(), 0, "lower")
    vmin = float(np.min(block.potential(grid.particle_points())))
    assert vmin > 0.0  # operator is positive definite, so 0 bounds it below
    op = relative_block(sp, 0, grid)
    vals, _ = eigen_lowest(op, 6, lower_bound=0.0)

    groups = [[float(vals[0])]]
    for v in vals[1:]:
        if v - groups[-1][-1] > 0.25:
            groups.append([float(v)])
        else:
            groups[-1].append(float(v))
    degs = [len(g) for g in groups]
    means = [float(np.mean(g)) for g in groups]
    gaps = [b - a for a, b in zip(means, means[1:])]
    gaps_ok = all(abs(g - 1.0) <= 0.02 for g in gaps)
    degs_ok = degs == [1, 2, 3]

    rep = verify_pairing(sp, grid, (0, 1), k=8, tol=5e-3)
    resid_ok = all(p["residual"] < 5e-3 for p in rep.pairs)
    pair_ok = rep.passed and resid_ok and not rep.unmatched and len(rep.pairs) == 8
    ok = gaps_ok and degs_ok and pair_ok
    announce(
        acceptance_log,
        6,
        ok,
        f"gaps {[round(g, 4) for g in gaps]}, degeneracies {degs}, "
        f"{len(rep.pairs)} pairs, worst residual "
        f"{max(p['residual'] for p in rep.pairs):.1e}, unmatched {len(rep.unmatched)}",
    )
    assert ok


def test_criterion_7_composed_products_share_nonzero_spectra(acceptance_log):
    sp = example3(1.0)
    grid = GridSpec.centered(3, 20, 0.0, 6.0)
    h_low, h_high, q = susy_composed_pair(sp, 0, grid)
    lo = scipy.linalg.eigh(h_low.matrix.toarray(), eigvals_only=True)
    hi = scipy.linalg.eigh(h_high.matrix.toarray(), eigvals_only=True)
    structural = grid.num_points * (q.dim_row - q.dim_col)
    kept = hi[structural:]
    kernel_top = float(np.max(np.abs(hi[:structural])))
    dev = float(np.max(np.abs(kept - lo) / np.maximum(1.0, np.abs(lo))))
    ok = dev <= 1e-10 and kernel_top <= 1e-10 and len(kept) == len(lo)
    announce(
        acceptance_log,
        7,
        ok,
        f"{len(lo)} nonzero levels agree to {dev:.1e} "
        f"(structural kernel {structural}, top |zero| {kernel_top:.1e})",
    )
    assert ok


def test_criterion_8_byte_determinism(tmp_path, acceptance_log):
    sp = example3(1.0)
    grid = GridSpec.centered(3, 24, 0.0, 8.0)
    r1 = canonical_json(verify_pairing(sp, grid, (0, 1), k=6).to_dict())
    r2 = canonical_json(verify_pairing(sp, grid, (0, 1), k=6).to_dict())
    lib_ok = r1 == r2

    outs = []
    for run in ("a", "b"):
        out = tmp_path / run
        code = cli_main(
            ["susy", "verify", "--model", "example3", "--m", "16", "--k", "4",
             "--seed", "1729", "--out", str(out)]
        )
        assert code == 0
        outs.append((out / "susy_example3_M0.json").read_bytes())
    cli_ok = outs[0] == outs[1]
    ok = lib_ok and cli_ok
    announce(
        acceptance_log,
        8,
        ok,
        f"library report {'identical' if lib_ok else 'DIFFERS'}, "
        f"CLI file bytes {'identical' if cli_ok else 'DIFFER'}",
    )
    assert ok
