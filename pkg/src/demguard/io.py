"""File formats: efficiency-curve CSV, block-model JSON, region CSV and
key=value run manifests.

Floats are written with 17 significant digits so that every file reloads
to the identical doubles.
"""

from __future__ import annotations

import csv
import datetime as _dt
import json
import math
import shlex
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from . import __version__
from .channels import BlockModel, EfficiencyCurve, EfficiencySample
from .errors import DomainError, InputFormatError

CURVE_HEADER = ["t", "eta_z0", "eta_z1", "eta_x0", "eta_x1"]
REGION_HEADER = ["qber", "eta_combined", "eta_improved", "eta_bound_general", "eta_bound_single_photon"]
REGION_COLUMNS = dict(zip(REGION_HEADER[1:], ["combined", "improved", "general", "single_photon"]))


def fmt(x: float | None) -> str:
    return "" if x is None else format(float(x), ".17g")


def _parse_float(text: str, line: int, what: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise InputFormatError(f"cannot parse {what} {text!r} as a number", line) from None
    if not math.isfinite(value):
        raise InputFormatError(f"{what} is not finite", line)
    return value


def load_efficiency_csv(path) -> EfficiencyCurve:
    """Read ``t,eta_z0,eta_z1,eta_x0,eta_x1`` rows; ``#`` lines are comments."""
    rows = []
    header_seen = False
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            text = raw.strip()
            if not text or text.startswith("#"):
                continue
            fields = [f.strip() for f in next(csv.reader([text]))]
            if not header_seen:
                if fields != CURVE_HEADER:
                    raise InputFormatError(f"expected header {','.join(CURVE_HEADER)}", lineno)
                header_seen = True
                continue
            if len(fields) != len(CURVE_HEADER):
                raise InputFormatError(f"expected {len(CURVE_HEADER)} fields, got {len(fields)}", lineno)
            vals = [_parse_float(f, lineno, name) for f, name in zip(fields, CURVE_HEADER)]
            if any(v < 0 for v in vals[1:]):
                raise DomainError(f"line {lineno}: negative efficiency")
            rows.append(EfficiencySample(*vals))
    if not header_seen:
        raise InputFormatError("missing header line")
    if not rows:
        raise InputFormatError("no data rows")
    return EfficiencyCurve(tuple(rows))


def write_efficiency_csv(curve: EfficiencyCurve, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(",".join(CURVE_HEADER) + "\n")
        for s in curve.samples:
            fh.write(",".join(fmt(v) for v in s) + "\n")


def _parse_matrix(obj, n: int, name: str) -> np.ndarray:
    if not isinstance(obj, list) or len(obj) != n:
        raise InputFormatError(f"{name} must have {n} rows")
    out = np.zeros((n, n), dtype=complex)
    for i, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != n:
            raise InputFormatError(f"{name} row {i} must have {n} entries")
        for j, entry in enumerate(row):
            if (not isinstance(entry, list) or len(entry) != 2
                    or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in entry)):
                raise InputFormatError(f"{name}[{i}][{j}] must be a [re, im] pair of numbers")
            if not all(math.isfinite(v) for v in entry):
                raise InputFormatError(f"{name}[{i}][{j}] is not finite")
            out[i, j] = complex(entry[0], entry[1])
    return out


def load_block_model(path) -> BlockModel:
    """Read ``{"n": int, "c0": [[[re, im], ...], ...], "c1": ...}``."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    if not isinstance(doc, dict) or not {"n", "c0", "c1"} <= doc.keys():
        raise InputFormatError('block model needs keys "n", "c0", "c1"')
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InputFormatError('"n" must be a positive integer')
    return BlockModel(_parse_matrix(doc["c0"], n, "c0"), _parse_matrix(doc["c1"], n, "c1"))


def write_block_model(model: BlockModel, path) -> None:
    def enc(m):
        return [[[float(z.real), float(z.imag)] for z in row] for row in m]

    # json emits the shortest round-tripping repr for floats
    Path(path).write_text(
        json.dumps({"n": model.n, "c0": enc(model.c0), "c1": enc(model.c1)}) + "\n",
        encoding="utf-8",
    )


def region_csv_text(curves: Mapping[str, Sequence[tuple[float, float | None]]]) -> str:
    """Format boundary curves keyed ``combined``, ``improved``, ``general``,
    ``single_photon``; missing roots become empty fields."""
    series = [curves[key] for key in REGION_COLUMNS.values()]
    grid = [e for e, _ in series[0]]
    for s in series[1:]:
        if [e for e, _ in s] != grid:
            raise DomainError("boundary curves must share the same QBER grid")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError("QBER grid must be strictly increasing")
    lines = [",".join(REGION_HEADER)]
    for i, e in enumerate(grid):
        lines.append(",".join([fmt(e)] + [fmt(s[i][1]) for s in series]))
    return "\n".join(lines) + "\n"


def emit_region_csv(curves: Mapping[str, Sequence[tuple[float, float | None]]], path) -> None:
    text = region_csv_text(curves)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(text)


def load_region_csv(path) -> list[dict[str, float | None]]:
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != REGION_HEADER:
            raise InputFormatError(f"expected header {','.join(REGION_HEADER)}", 1)
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(REGION_HEADER):
                raise InputFormatError("wrong number of fields", lineno)
            out.append({k: (None if v == "" else _parse_float(v, lineno, k)) for k, v in zip(REGION_HEADER, row)})
    return out


def manifest_path(path) -> Path:
    p = Path(path)
    return p.with_name(p.name + ".manifest")


def write_manifest(path, subcommand: str, argv: Sequence[str], params: Mapping[str, object]) -> Path:
    """Write the flat key=value manifest next to ``path`` and return its path."""
    lines = {
        "tool_version": __version__,
        "subcommand": subcommand,
        "argv": shlex.join(["demguard", *argv]),
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }
    for k, v in params.items():
        lines[k] = fmt(v) if isinstance(v, float) else ("" if v is None else str(v))
    target = manifest_path(path)
    with open(target, "w", encoding="utf-8") as fh:
        for k, v in lines.items():
            fh.write(f"{k}={v}\n")
    return target


def read_manifest(path) -> dict[str, str]:
    out = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line and "=" in line:
            k, v = line.split("=", 1)
            out[k] = v
    return out


def write_report(path, values: Mapping[str, object]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for k, v in values.items():
            fh.write(f"{k}={fmt(v) if isinstance(v, float) else ('' if v is None else v)}\n")
