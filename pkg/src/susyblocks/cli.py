"""Command-line interface.

Subcommands:
  rep [show|verify]   block representation matrices, characters, irrep id
  model check         pair-model functional equation and separability checks
  spectrum            direct eigenvalues of a relative block on a grid
  susy verify         composed-pair spectrum pairing report

Options may come from --config (flat key=value lines, '#' comments);
explicit flags win. Output directory: --out, else SUSYBLOCKS_OUT, else the
working directory. Exit codes: 0 ok, 2 invalid input, 3 a verification ran
and failed.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

import numpy as np

from .errors import SusyBlocksError
from .serialize import eigentable_csv, write_json
from .spectral import (
    DEFAULT_SEED,
    GridSpec,
    eigen_lowest,
    relative_block,
    verify_pairing,
)
from .superpotential import (
    MODEL_NAMES,
    check_separability,
    default_sample_points,
    functional_eq_residual,
    get_superpotential,
    pair_model,
    potential_column_diagnostic,
)
from .symrep import identify_tableau, partitions, rep_matrix_set, verify_irreducible

ALL_MODELS = MODEL_NAMES + ("example3",)


def _parse_config(path: str) -> dict:
    cfg = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SusyBlocksError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, val = line.split("=", 1)
        cfg[key.strip().replace("-", "_")] = val.strip()
    return cfg


def _pick(args, cfg: dict, key: str, default, cast):
    val = getattr(args, key, None)
    if val is not None:
        return val
    if key in cfg:
        try:
            return cast(cfg[key])
        except ValueError as exc:
            raise SusyBlocksError(f"config key {key}: {exc}") from exc
    return default


def _out_dir(args, cfg) -> Path:
    out = _pick(args, cfg, "out", None, str)
    if out is None:
        out = os.environ.get("SUSYBLOCKS_OUT", ".")
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _bool_cast(s: str) -> bool:
    if s.lower() in ("1", "true", "yes", "on"):
        return True
    if s.lower() in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _superpotential(args, cfg):
    model = _pick(args, cfg, "model", None, str)
    if model is None:
        raise SusyBlocksError("a model name is required (--model)")
    n = _pick(args, cfg, "n", 3, int)
    a = _pick(args, cfg, "a", 1.0, float)
    b = _pick(args, cfg, "b", 0.0, float)
    confine = _pick(args, cfg, "confine_cmm", False, _bool_cast)
    return get_superpotential(model, n, a=a, b=b, confine_cmm=confine)


def _default_grid(sp, args, cfg) -> GridSpec:
    m = _pick(args, cfg, "m", None, int)
    if m is None:
        m = _pick(args, cfg, "grid", 48, int)  # config-file synonym
    bc = _pick(args, cfg, "bc", "dirichlet", str)
    hw = _pick(args, cfg, "half_width", None, float)
    center = _pick(args, cfg, "center", None, str)
    if center is not None:
        cvec = np.array([float(t) for t in str(center).split(",")], dtype=float)
    elif sp.name == "sutherland":
        # equally spaced chamber point, pair separations at pi/n
        x = np.arange(sp.n - 1, -1, -1, dtype=float) * (math.pi / sp.n)
        x -= x.mean()
        from .jacobi import build_R

        cvec = (build_R(sp.n).entries[: sp.n - 1] @ x).astype(float)
    else:
        cvec = np.zeros(sp.n - 1)
    if hw is None:
        hw = 0.45 if sp.name == "sutherland" else 4.5
    return GridSpec.centered(sp.n, m, cvec, hw, bc=bc)


def cmd_rep(args, cfg) -> int:
    n = _pick(args, cfg, "n", 3, int)
    sector = _pick(args, cfg, "sector", 1, int)
    tol = _pick(args, cfg, "tol", 1e-9, float)
    reps = rep_matrix_set(n, sector)
    payload = {
        "n": n,
        "sector": sector,
        "dim": reps.dim,
        "matrices": {
            f"{i},{j}": reps.matrices[(i, j)] for (i, j) in sorted(reps.matrices)
        },
    }
    print(f"rep n={n} sector={sector} dim={reps.dim}")
    status = 0
    if args.action == "verify":
        report = verify_irreducible(n, sector, tol=tol)
        part = identify_tableau(n, sector, tol=tol)
        payload["characters"] = {
            "-".join(str(c) for c in ct): val
            for ct, val in report.characters.items()
        }
        payload["inner_product"] = report.inner_product
        payload["irreducible"] = report.passed
        payload["partition"] = list(part)
        marker = "ok" if report.passed else "FAIL"
        print(
            f"  irreducibility <chi,chi> = {report.inner_product:.12f} [{marker}]"
        )
        print(f"  partition: {part}")
        if not report.passed:
            status = 3
    out = _out_dir(args, cfg) / f"rep_n{n}_M{sector}.json"
    write_json(out, payload)
    print(f"  wrote {out}")
    return status


def cmd_model(args, cfg) -> int:
    name = _pick(args, cfg, "model", None, str)
    if name is None:
        raise SusyBlocksError("a model name is required (--model)")
    a = _pick(args, cfg, "a", 1.0, float)
    b = _pick(args, cfg, "b", 0.0, float)
    n = _pick(args, cfg, "n", 3, int)
    seed = _pick(args, cfg, "seed", DEFAULT_SEED, int)
    tol = _pick(args, cfg, "tol", 1e-9, float)
    sp = get_superpotential(name, n, a=a, b=b)
    sep = check_separability(sp, count=64, seed=seed)
    payload = {
        "model": name,
        "n": n,
        "a": a,
        "b": b,
        "separability": {
            "max_divergence": sep.max_divergence,
            "max_grad_fd_error": sep.max_grad_fd_error,
            "max_hess_fd_error": sep.max_hess_fd_error,
            "passed": sep.passed,
        },
    }
    ok = sep.passed
    print(f"model {name} n={n}: separability max |sum grad| = {sep.max_divergence:.3e}"
          f" [{'ok' if sep.passed else 'FAIL'}]")
    if name != "example3":
        pm = pair_model(name, a=a, b=b)
        rng = np.random.default_rng(seed)
        if name == "sutherland":
            pa = rng.uniform(0.2, 1.2, size=256)
            pb = rng.uniform(0.2, 1.2, size=256)
            keep = np.abs(pa + pb) < math.pi - 0.2
            pa, pb = pa[keep], pb[keep]
        else:
            pa = rng.uniform(0.3, 2.5, size=256)
            pb = rng.uniform(0.3, 2.5, size=256)
        resid = float(np.max(functional_eq_residual(pm, pa, pb)))
        diag_x = np.linspace(0.3, 1.2, 7)
        diag = potential_column_diagnostic(pm, diag_x)
        payload["functional_equation"] = {"max_residual": resid, "samples": int(pa.size)}
        payload["potential_column"] = diag
        feq_ok = resid <= tol
        ok = ok and feq_ok
        print(f"  functional equation max residual = {resid:.3e}"
              f" [{'ok' if feq_ok else 'FAIL'}]")
        print(f"  published potential column offset (diagnostic): "
              f"max |diff| = {diag['max_abs_diff']:.3e}")
    out = _out_dir(args, cfg) / f"model_{name}.json"
    write_json(out, payload)
    print(f"  wrote {out}")
    return 0 if ok else 3


def cmd_spectrum(args, cfg) -> int:
    sp = _superpotential(args, cfg)
    sector = _pick(args, cfg, "sector", 0, int)
    k = _pick(args, cfg, "k", 8, int)
    seed = _pick(args, cfg, "seed", DEFAULT_SEED, int)
    grid = _default_grid(sp, args, cfg)
    op = relative_block(sp, sector, grid)
    vals, _ = eigen_lowest(op, k, seed=seed)
    table = eigentable_csv(
        {
            "index": list(range(1, k + 1)),
            "eigenvalue": [float(v) for v in vals],
        }
    )
    outdir = _out_dir(args, cfg)
    csv_path = outdir / f"spectrum_{sp.name}_M{sector}.csv"
    csv_path.write_text(table, encoding="utf-8")
    json_path = outdir / f"spectrum_{sp.name}_M{sector}.json"
    write_json(
        json_path,
        {
            "model": sp.name,
            "params": sp.params,
            "n": sp.n,
            "sector": sector,
            "grid": grid.to_dict(),
            "eigenvalues": [float(v) for v in vals],
        },
    )
    print(f"spectrum {sp.name} n={sp.n} M={sector} grid m={grid.m}")
    for i, v in enumerate(vals, start=1):
        print(f"  {i:3d}  {v:.12e}")
    print(f"  wrote {csv_path}")
    print(f"  wrote {json_path}")
    return 0


def cmd_susy(args, cfg) -> int:
    sp = _superpotential(args, cfg)
    sector = _pick(args, cfg, "sector", 0, int)
    k = _pick(args, cfg, "k", 8, int)
    seed = _pick(args, cfg, "seed", DEFAULT_SEED, int)
    tol = _pick(args, cfg, "tol", None, float)
    grid = _default_grid(sp, args, cfg)
    report = verify_pairing(
        sp, grid, sectors=(sector, sector + 1), k=k, tol=tol, seed=seed
    )
    out = _out_dir(args, cfg) / f"susy_{sp.name}_M{sector}.json"
    write_json(out, report.to_dict())
    print(
        f"susy {sp.name} n={sp.n} M={sector}->{sector + 1}: "
        f"{len(report.pairs)} paired, {len(report.kernel_candidates)} kernel"
        f" candidates, {len(report.unmatched)} unmatched"
        f" [{'ok' if report.passed else 'FAIL'}]"
    )
    for p in report.pairs:
        print(
            f"  {p['e_low']:.9e} <-> {p['e_high']:.9e}"
            f"  residual {p['residual']:.2e}"
        )
    for kc in report.kernel_candidates:
        if "count" in kc:
            print(
                f"  kernel[{kc['side']}] {kc['count']} below threshold"
                f" in [{kc['min']:.3e}, {kc['max']:.3e}]"
            )
        else:
            print(
                f"  kernel[{kc['side']}] value {kc['value']:.3e}"
                f" |qv|^2/|v|^2 = {kc['mapped_ratio']:.3e}"
            )
    for um in report.unmatched:
        print(f"  UNMATCHED[{um['side']}] value {um['value']:.9e}")
    print(f"  wrote {out}")
    return 0 if report.passed else 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="susyblocks",
        description="block-diagonal many-body SUSY Hamiltonians: "
        "representation matrices, pair models, spectra, pairing checks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key=value option file")
    common.add_argument("--out", help="output directory (else SUSYBLOCKS_OUT)")
    common.add_argument("--seed", type=int, help="rng seed (default 1729)")
    common.add_argument("--tol", type=float, help="verification tolerance")

    p_rep = sub.add_parser("rep", parents=[common], help="representation matrices")
    p_rep.add_argument("action", nargs="?", choices=("show", "verify"), default="show")
    p_rep.add_argument("--n", type=int, help="particle count (default 3)")
    p_rep.add_argument("--sector", type=int, help="relative fermion number")
    p_rep.set_defaults(func=cmd_rep)

    p_model = sub.add_parser("model", parents=[common], help="pair-model checks")
    p_model.add_argument("action", choices=("check",))
    p_model.add_argument("--model", choices=ALL_MODELS)
    p_model.add_argument("--n", type=int)
    p_model.add_argument("--a", type=float)
    p_model.add_argument("--b", type=float)
    p_model.set_defaults(func=cmd_model)

    grid_opts = argparse.ArgumentParser(add_help=False)
    grid_opts.add_argument("--model", choices=ALL_MODELS)
    grid_opts.add_argument("--n", type=int)
    grid_opts.add_argument("--a", type=float)
    grid_opts.add_argument("--b", type=float)
    grid_opts.add_argument("--confine-cmm", dest="confine_cmm", action="store_const",
                           const=True, help="confine the center of mass (calogero)")
    grid_opts.add_argument("--sector", type=int, help="relative fermion number")
    grid_opts.add_argument("--m", "--grid", dest="m", type=int,
                           help="grid nodes per axis")
    grid_opts.add_argument("--half-width", dest="half_width", type=float)
    grid_opts.add_argument("--center", help="comma-separated grid center")
    grid_opts.add_argument("--bc", choices=("dirichlet", "periodic"))
    grid_opts.add_argument("--k", type=int, help="number of eigenvalues")

    p_spec = sub.add_parser(
        "spectrum", parents=[common, grid_opts], help="relative block eigenvalues"
    )
    p_spec.set_defaults(func=cmd_spectrum)

    p_susy = sub.add_parser(
        "susy", parents=[common, grid_opts], help="spectrum pairing verification"
    )
    p_susy.add_argument("action", choices=("verify",))
    p_susy.set_defaults(func=cmd_susy)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage already; normalize other codes
        return int(exc.code or 0)
    try:
        cfg = _parse_config(args.config) if args.config else {}
        return args.func(args, cfg)
    except SusyBlocksError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
