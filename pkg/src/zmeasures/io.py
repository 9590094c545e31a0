"""Result serialization: JSON with exact strings and 17-digit floats, plus CSV."""

from __future__ import annotations

import csv
import io as _io
import math
from fractions import Fraction
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from .exact import GaussianRational, format_exact

FLOAT_DIGITS = 17
PRECISION_TAG = "binary64, 17 significant digits"


def format_float(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, f".{FLOAT_DIGITS}g")


def json_scalar(x):
    """Plain JSON-ready value: exact numbers as strings, complex as {re, im}."""
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (Fraction, GaussianRational)):
        return format_exact(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(x)
    if isinstance(x, (complex, np.complexfloating)):
        return {"re": float(x.real), "im": float(x.imag)}
    return x


def to_plain(obj) -> Any:
    """Recursively convert results (dataclasses with to_json, tuples, arrays) to JSON-ready data."""
    if hasattr(obj, "to_json") and callable(obj.to_json):
        return to_plain(obj.to_json())
    if isinstance(obj, Mapping):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, np.ndarray):
        return [to_plain(v) for v in obj.tolist()]
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    return json_scalar(obj)


def _dump(obj, out: list) -> None:
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        s = format_float(obj)
        out.append(s if math.isfinite(obj) else f'"{s}"')
    elif isinstance(obj, str):
        import json

        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, dict):
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(", ")
            _dump(str(k), out)
            out.append(": ")
            _dump(v, out)
        out.append("}")
    elif isinstance(obj, list):
        out.append("[")
        for i, v in enumerate(obj):
            if i:
                out.append(", ")
            _dump(v, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_json(result) -> str:
    """Deterministic JSON text (insertion-ordered keys, 17-digit floats)."""
    out: list = []
    _dump(to_plain(result), out)
    return "".join(out) + "\n"


def emit(result, fmt: str = "json", columns: Sequence[str] | None = None) -> bytes:
    """Serialize a result to UTF-8 bytes.

    JSON output wraps the result as {"float_precision": ..., "result": ...}.
    CSV output expects a sequence of row mappings; ``columns`` fixes the
    column order (default: keys of the first row in insertion order).
    """
    if fmt == "json":
        return dumps_json({"float_precision": PRECISION_TAG, "result": result}).encode("utf-8")
    if fmt == "csv":
        return emit_csv(result, columns).encode("utf-8")
    raise ValueError(f"unknown output format {fmt!r}")


def _csv_cell(v) -> str:
    v = to_plain(v)
    if isinstance(v, float):
        return format_float(v)
    if isinstance(v, dict) and set(v) == {"re", "im"}:
        return f"{format_float(v['re'])}{'+' if v['im'] >= 0 else '-'}{format_float(abs(v['im']))}i"
    if isinstance(v, (list, dict)):
        return dumps_json(v).strip()
    return "" if v is None else str(v)


def emit_csv(rows: Iterable[Mapping], columns: Sequence[str] | None = None) -> str:
    rows = list(rows)
    if columns is None:
        columns = list(rows[0].keys()) if rows else []
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_csv_cell(r.get(c)) for c in columns])
    return buf.getvalue()
