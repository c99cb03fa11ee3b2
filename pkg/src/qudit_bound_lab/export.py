"""CSV and JSON writers with fixed, versioned schemas.

Floats are written with 17 significant digits so that files round-trip
exactly and reruns produce byte-identical output.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import __version__

HEADER = f"# qudit-bound-lab v{__version__}"

BOUNDARY_COLUMNS = ("phi", "r_max", "Phi", "theta", "Lambda", "branch")
SAMPLE_COLUMNS = ("index", "re", "im", "r", "phi")
HISTOGRAM_COLUMNS = ("bin_center", "count")


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    return format(x, ".17g")


def _plain(x):
    """Turn numpy scalars and NaN into JSON-friendly values."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return [_plain(v) for v in x.tolist()]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return None if math.isnan(x) or math.isinf(x) else x
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    return x


def csv_text(columns: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    buf.write(HEADER + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def json_text(obj) -> str:
    return json.dumps(_plain(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def table_json(columns: Sequence[str], rows: Iterable[Sequence]) -> str:
    records = [dict(zip(columns, row)) for row in rows]
    return json_text({"schema": HEADER.lstrip("# "), "columns": list(columns), "rows": records})


def write_table(path: Path, columns: Sequence[str], rows: Iterable[Sequence], fmt: str = "csv") -> Path:
    rows = list(rows)
    path = Path(path).with_suffix("." + fmt)
    text = csv_text(columns, rows) if fmt == "csv" else table_json(columns, rows)
    path.write_text(text)
    return path


def write_json(path: Path, obj) -> Path:
    path = Path(path)
    path.write_text(json_text(obj))
    return path


def read_table(path: Path) -> tuple[list[str], np.ndarray]:
    """Read back a CSV written by :func:`write_table`."""
    lines = [ln for ln in Path(path).read_text().splitlines() if not ln.startswith("#")]
    reader = csv.reader(lines)
    columns = next(reader)
    data = np.array([[float(v) if v else np.nan for v in row] for row in reader], dtype=float)
    return columns, data.reshape(-1, len(columns))


def boundary_rows(curve) -> list[tuple]:
    return [
        (p.phi, p.r_max, p.Phi, p.theta, p.Lambda, b) for p, b in zip(curve.points, curve.branches)
    ]


def sample_rows(samples) -> list[tuple]:
    return [(s.index, s.O.real, s.O.imag, s.R, s.Phi) for s in samples]
