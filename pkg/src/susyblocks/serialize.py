"""Deterministic text output: canonical JSON, sparse triplets, CSV tables.

Reruns with the same inputs must produce byte-identical files, so floats
are always written through one fixed format (%.12e), keys are sorted, and
no timestamps or environment details leak into the output.
"""

from __future__ import annotations

import io
from typing import Iterable

import numpy as np

from .fock import SparseOperator

__all__ = ["canonical_json", "write_json", "coo_text", "eigentable_csv", "FLOAT_FMT"]

FLOAT_FMT = "%.12e"


def _fmt_float(x: float) -> str:
    if x != x:
        return '"nan"'
    if x in (float("inf"), float("-inf")):
        return f'"{x}"'
    return FLOAT_FMT % x


def _emit(obj, out: io.StringIO, indent: int) -> None:
    pad = "  " * indent
    if obj is None:
        out.write("null")
    elif obj is True:
        out.write("true")
    elif obj is False:
        out.write("false")
    elif isinstance(obj, (int, np.integer)):
        out.write(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.write(_fmt_float(float(obj)))
    elif isinstance(obj, str):
        out.write('"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"')
    elif isinstance(obj, np.ndarray):
        _emit(obj.tolist(), out, indent)
    elif isinstance(obj, dict):
        if not obj:
            out.write("{}")
            return
        out.write("{\n")
        keys = sorted(str(k) for k in obj)
        lookup = {str(k): v for k, v in obj.items()}
        for pos, k in enumerate(keys):
            out.write(pad + "  " + '"' + k + '": ')
            _emit(lookup[k], out, indent + 1)
            out.write(",\n" if pos < len(keys) - 1 else "\n")
        out.write(pad + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.write("[]")
            return
        out.write("[\n")
        for pos, v in enumerate(obj):
            out.write(pad + "  ")
            _emit(v, out, indent + 1)
            out.write(",\n" if pos < len(obj) - 1 else "\n")
        out.write(pad + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def canonical_json(obj) -> str:
    out = io.StringIO()
    _emit(obj, out, 0)
    out.write("\n")
    return out.getvalue()


def write_json(path, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_json(obj))


def coo_text(op: SparseOperator, header: str = "") -> str:
    """One-based 'row col value' triplets in canonical (row, col) order."""
    lines = []
    if header:
        lines.append(f"# {header}")
    lines.append(f"# shape {op.n_rows} {op.n_cols} nnz {op.nnz}")
    for r, c, v in zip(op.row, op.col, op.val):
        if float(v) == int(v):
            lines.append(f"{r + 1} {c + 1} {int(v)}")
        else:
            lines.append(f"{r + 1} {c + 1} {FLOAT_FMT % v}")
    return "\n".join(lines) + "\n"


def eigentable_csv(columns: dict[str, Iterable]) -> str:
    """CSV with sorted column names; floats through the canonical format."""
    names = sorted(columns)
    cols = [list(columns[name]) for name in names]
    length = len(cols[0]) if cols else 0
    if any(len(c) != length for c in cols):
        raise ValueError("columns differ in length")
    lines = [",".join(names)]
    for row in range(length):
        cells = []
        for c in cols:
            v = c[row]
            if isinstance(v, (float, np.floating)):
                cells.append(FLOAT_FMT % float(v))
            else:
                cells.append(str(v))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
