"""Deterministic JSON/CSV serialisation of reports.

Floats are always written as ``%.12e`` and JSON keys are sorted, so the same
report always produces the same bytes.  Complex numbers become
``{"re": ..., "im": ...}``; Gaussian integers and fractions become strings.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

import numpy as np

from .gaussian import GaussianInteger
from .symbol import QuarticSymbolValue

FLOAT_FMT = "%.12e"
OUT_ENV = "QUARTIC_SIEVE_OUT"


class ReportError(RuntimeError):
    pass


def format_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return FLOAT_FMT % x


def plain(obj: Any) -> Any:
    """Reduce a report (or anything inside one) to dicts, lists and scalars."""
    if hasattr(obj, "to_dict"):
        return plain(obj.to_dict())
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [plain(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, (GaussianInteger, Fraction, QuarticSymbolValue)):
        return str(obj)
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _emit(obj: Any, indent: int, depth: int, out: list[str]) -> None:
    pad = " " * (indent * (depth + 1))
    end = " " * (indent * depth)
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for j, key in enumerate(sorted(obj)):
            out.append(f"{pad}{json.dumps(key)}: ")
            _emit(obj[key], indent, depth + 1, out)
            out.append(",\n" if j < len(obj) - 1 else "\n")
        out.append(end + "}")
    elif isinstance(obj, list):
        if not obj:
            out.append("[]")
            return
        out.append("[\n")
        for j, v in enumerate(obj):
            out.append(pad)
            _emit(v, indent, depth + 1, out)
            out.append(",\n" if j < len(obj) - 1 else "\n")
        out.append(end + "]")
    elif isinstance(obj, float):
        out.append(format_float(obj))
    else:
        out.append(json.dumps(obj))


def to_json(report: Any, indent: int = 2) -> str:
    out: list[str] = []
    _emit(plain(report), indent, 0, out)
    return "".join(out) + "\n"


def _cell(v: Any) -> str:
    if isinstance(v, float):
        return format_float(v)
    if isinstance(v, bool) or v is None:
        return json.dumps(v)
    if isinstance(v, (dict, list)):
        return to_json(v, indent=0).replace("\n", "")
    return str(v)


def _csv_rows(report: Any) -> list[dict]:
    items = report if isinstance(report, (list, tuple)) else [report]
    rows = []
    for item in items:
        row = item.csv_row() if hasattr(item, "csv_row") else item.to_dict()
        rows.append(plain(row))
    return rows


def to_csv(report: Any) -> str:
    """One row per report; columns in first-seen order across all rows."""
    rows = _csv_rows(report)
    header: list[str] = []
    for row in rows:
        header.extend(k for k in row if k not in header)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(row[k]) if k in row else "" for k in header])
    return buf.getvalue()


def render(report: Any, fmt: str) -> str:
    if fmt == "json":
        return to_json(report)
    if fmt == "csv":
        return to_csv(report)
    raise ValueError(f"unknown format {fmt!r}")


def default_out_dir() -> Optional[Path]:
    d = os.environ.get(OUT_ENV)
    return Path(d) if d else None


def write_report(report: Any, fmt: str, path: str | os.PathLike) -> Path:
    text = render(report, fmt)
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise ReportError(f"cannot write report to {path}: {exc}") from exc
    return path


def read_json_report(path: str | os.PathLike) -> Any:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def read_coefficients(path: str | os.PathLike) -> dict[GaussianInteger, complex]:
    """Coefficient file: CSV ``index,re,im``; a header row is optional."""
    coeffs: dict[GaussianInteger, complex] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            if not row or all(not c.strip() for c in row):
                continue
            if lineno == 1 and row[0].strip().lower() == "index":
                continue
            if len(row) != 3:
                raise ValueError(f"line {lineno}: expected index,re,im")
            key = GaussianInteger.parse(row[0])
            coeffs[key] = coeffs.get(key, 0j) + complex(float(row[1]), float(row[2]))
    return coeffs

