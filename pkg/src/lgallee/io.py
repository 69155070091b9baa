"""Serialization: parameter documents, CSV tables and flat JSON reports.

Floats are written with ``repr`` (shortest round-trip decimal) so repeated
runs produce byte-identical files.
"""
from __future__ import annotations

import contextlib
import csv
import io
import json
import os
import tempfile
from pathlib import Path

from .errors import ParameterError
from .model import RAW_KEYS, SCALED_KEYS, RawParams, ScaledParams, nondimensionalize

OUTPUT_DIR_ENV = "LGALLEE_OUTPUT_DIR"

TRAJECTORY_COLUMNS = ("t", "x", "y")
EQUILIBRIA_COLUMNS = ("x", "y", "multiplicity", "kind", "trace", "det", "s1")
SWEEP_COLUMNS = ("a", "h", "n_roots", "eta1", "eta2", "kinds")
FOLD_COLUMNS = ("branch", "a", "h")


def fmt(value) -> str:
    if hasattr(value, "dtype"):
        value = value.item()
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return ";".join(fmt(v) for v in value)
    return str(value)


def default_output_dir() -> Path:
    return Path(os.environ.get(OUTPUT_DIR_ENV, "."))


def read_param_document(path) -> dict:
    """Load a flat JSON object of parameter values."""
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParameterError(f"cannot read parameter document {path}: {exc}") from exc
    if not isinstance(doc, dict) or any(isinstance(v, (dict, list)) for v in doc.values()):
        raise ParameterError(f"{path}: parameter document must be a flat key/value object")
    unknown = set(doc) - set(SCALED_KEYS) - set(RAW_KEYS)
    if unknown:
        raise ParameterError(f"{path}: unknown parameter key(s) {sorted(unknown)}")
    return doc


def params_from_mapping(doc: dict) -> ScaledParams:
    """Scaled parameters from either the five scaled or the eight raw keys."""
    has_raw = any(k in doc for k in RAW_KEYS)
    if has_raw:
        mixed = [k for k in SCALED_KEYS if k in doc]
        if mixed:
            raise ParameterError(f"scaled key(s) {mixed} mixed with raw parameters")
        missing = [k for k in RAW_KEYS if k not in doc]
        if missing:
            raise ParameterError(f"missing raw parameter(s): {', '.join(missing)}")
        return nondimensionalize(RawParams(*(float(doc[k]) for k in RAW_KEYS)))
    return ScaledParams.from_dict(doc)


def write_param_document(p: ScaledParams, path) -> None:
    atomic_write(path, json.dumps(p.to_dict(), indent=2) + "\n")


def csv_text(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _json_default(value):
    if hasattr(value, "dtype"):
        return value.item()
    raise TypeError(f"cannot serialize {type(value).__name__}")


def document_text(doc: dict) -> str:
    return json.dumps(doc, indent=2, default=_json_default) + "\n"


def atomic_write(path, text: str) -> None:
    """Write ``text`` to ``path`` through a temporary file in the same directory."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        with contextlib.suppress(FileNotFoundError):
            os.unlink(tmp)
        raise


def equilibria_rows(pairs):
    """Rows for ``(Equilibrium, Classification)`` pairs."""
    for eq, cl in pairs:
        yield (eq.x, eq.y, eq.multiplicity, cl.kind, cl.trace, cl.det, cl.s1)


def trajectory_rows(traj):
    for t, x, y in traj.samples:
        yield (float(t), float(x), float(y))


def sweep_rows(grid):
    for row in grid:
        for cell in row:
            yield (cell.a, cell.h, cell.n_positive_roots, cell.eta.eta1, cell.eta.eta2, cell.kinds)


def fold_rows(folds):
    for name, branch in (("lower", folds.lower), ("upper", folds.upper)):
        for a, h in branch:
            yield (name, float(a), float(h))
