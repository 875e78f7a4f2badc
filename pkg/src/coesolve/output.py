"""Deterministic text serialization for result files.

Both CSV and JSON writers format floats with %.17g so repeated runs of the
same configuration produce byte-identical files.  The JSON writer is a
small local emitter because the stdlib encoder hard-codes repr for floats.
"""

from __future__ import annotations

import math


def fmt_float(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def _json_emit(obj, parts):
    if obj is None:
        parts.append("null")
    elif obj is True:
        parts.append("true")
    elif obj is False:
        parts.append("false")
    elif isinstance(obj, str):
        escaped = obj.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
        parts.append(f'"{escaped}"')
    elif isinstance(obj, int):
        parts.append(str(obj))
    elif isinstance(obj, float):
        if math.isfinite(obj):
            parts.append(fmt_float(obj))
        else:
            parts.append(f'"{fmt_float(obj)}"')
    elif isinstance(obj, complex):
        _json_emit([obj.real, obj.imag], parts)
    elif isinstance(obj, dict):
        parts.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                parts.append(", ")
            _json_emit(str(k), parts)
            parts.append(": ")
            _json_emit(v, parts)
        parts.append("}")
    elif isinstance(obj, (list, tuple)):
        parts.append("[")
        for i, v in enumerate(obj):
            if i:
                parts.append(", ")
            _json_emit(v, parts)
        parts.append("]")
    else:
        try:
            _json_emit(obj.item(), parts)  # numpy scalars
        except AttributeError:
            raise TypeError(f"cannot serialize {type(obj).__name__}")


def to_json_text(obj) -> str:
    parts = []
    _json_emit(obj, parts)
    return "".join(parts) + "\n"


def write_json(path, obj):
    with open(path, "w") as fh:
        fh.write(to_json_text(obj))


def write_csv(path, header, rows):
    """Write rows of floats under a fixed header, %.17g formatted."""
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt_float(v) for v in row) + "\n")
