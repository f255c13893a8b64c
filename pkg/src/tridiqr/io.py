"""Text formats for matrices and traces.

Matrix files hold three lines: ``n``, the ``n`` diagonal entries and the
``n - 1`` subdiagonal entries, written with 17 significant digits so a
write/read round trip is exact.
"""
from __future__ import annotations

import csv
import io
import json
import sys
from pathlib import Path
from typing import TextIO, Union

from .core import SymTridiagonal, make_tridiagonal
from .errors import DimensionMismatch

PathLike = Union[str, Path]

TRACE_COLUMNS = ["k", "shift", "b1", "b2", "corner", "secondCorner", "singularGap", "height"]


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def format_matrix(T: SymTridiagonal) -> str:
    lines = [str(T.n), " ".join(_fmt(x) for x in T.diag), " ".join(_fmt(x) for x in T.sub)]
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> SymTridiagonal:
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise ValueError("empty matrix file")
    n = int(lines[0].strip())
    if n < 1:
        raise DimensionMismatch("n must be >= 1")
    diag = [float(x) for x in lines[1].split()] if len(lines) > 1 else []
    sub = [float(x) for x in lines[2].split()] if len(lines) > 2 else []
    if len(diag) != n:
        raise DimensionMismatch(f"expected {n} diagonal entries, got {len(diag)}")
    return make_tridiagonal(diag, sub)


def write_matrix(T: SymTridiagonal, path: PathLike) -> None:
    Path(path).write_text(format_matrix(T))


def read_matrix(path: PathLike) -> SymTridiagonal:
    return parse_matrix(Path(path).read_text())


def trace_to_json(trace_dict: dict) -> str:
    return json.dumps(trace_dict, indent=2, sort_keys=False) + "\n"


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, int):
        return str(v)
    return _fmt(v)


def trace_to_csv(trace_dict: dict) -> str:
    buf = io.StringIO()
    has_height = any("height" in s for s in trace_dict["steps"])
    cols = TRACE_COLUMNS if has_height else TRACE_COLUMNS[:-1]
    w = csv.DictWriter(buf, fieldnames=cols, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for s in trace_dict["steps"]:
        w.writerow({c: _cell(s.get(c)) for c in cols})
    return buf.getvalue()


def write_text(text: str, path: PathLike = None, stream: TextIO = None) -> None:
    """Write to ``path``, or to ``stream`` when no path is given."""
    if path is None or str(path) == "-":
        (stream if stream is not None else sys.stdout).write(text)
    else:
        Path(path).write_text(text)
