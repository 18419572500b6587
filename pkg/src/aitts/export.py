"""Deterministic CSV / JSON / plain-table rendering."""
from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

CSV_DIGITS = 9
ZERO_CUTOFF = 1e-15


def clean(value: float) -> float:
    """Round-off residue below 1e-15 is written as 0."""
    value = float(value)
    return 0.0 if abs(value) < ZERO_CUTOFF else value


def fmt(value, digits: int = CSV_DIGITS) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(clean(value), f".{digits}g")
    return str(value)


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(fmt(v) for v in row)
    return buf.getvalue()


def jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if not math.isfinite(v):
            return None
        return clean(v)
    return obj


def to_json(meta: dict, data: list) -> str:
    """``{"meta": ..., "data": [...]}`` with sorted keys; re-serializing parsed output is byte-identical."""
    return json.dumps({"meta": jsonable(meta), "data": jsonable(data)}, indent=2, sort_keys=True) + "\n"


def _numeric(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def to_table(header, rows) -> str:
    """Aligned plain-text columns; numeric columns right-aligned, text left-aligned."""
    body = [[fmt(v, 6) for v in row] for row in rows]
    cells = [[str(h) for h in header]] + body
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    right = [all(_numeric(r[i]) for r in body) for i in range(len(header))]

    def line(r):
        return "  ".join((c.rjust(w) if ra else c.ljust(w)) for c, w, ra in zip(r, widths, right)).rstrip()

    lines = [line(r) for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"
