"""Deterministic JSON and CSV writers.

Floats use 17 significant digits so every value round-trips exactly. Infinite
values become the strings ``"inf"`` / ``"-inf"``, NaN becomes ``null``.
Complex scalars are ``[re, im]`` pairs; complex arrays are split into
``{"re": ..., "im": ...}``. Mapping order is preserved as built, so the
producer fixes the field order.
"""

from __future__ import annotations

import io
import json
import math
from enum import Enum

import numpy as np


def fmt_float(x):
    x = float(x)
    if math.isnan(x):
        return "null"
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    if x == int(x) and abs(x) < 1e16:
        return repr(x)  # integral values keep their float marker, e.g. 4.0
    return format(x, ".17g")


def to_plain(obj):
    """Convert report objects into JSON-ready containers (floats kept as floats)."""
    if hasattr(obj, "as_dict"):
        return to_plain(obj.as_dict())
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return {"re": obj.real.tolist(), "im": obj.imag.tolist()}
        return obj.tolist()
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (set, frozenset)):
        return sorted(to_plain(v) for v in obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _emit(obj, out, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        out.write("null")
    elif obj is True:
        out.write("true")
    elif obj is False:
        out.write("false")
    elif isinstance(obj, int):
        out.write(str(obj))
    elif isinstance(obj, float):
        out.write(fmt_float(obj))
    elif isinstance(obj, str):
        out.write(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, list):
        if not obj:
            out.write("[]")
        elif all(not isinstance(v, (list, dict)) for v in obj):
            out.write("[")
            for i, v in enumerate(obj):
                if i:
                    out.write(", ")
                _emit(v, out, indent, level + 1)
            out.write("]")
        else:
            out.write("[\n")
            for i, v in enumerate(obj):
                out.write(pad)
                _emit(v, out, indent, level + 1)
                out.write(",\n" if i < len(obj) - 1 else "\n")
            out.write(end + "]")
    elif isinstance(obj, dict):
        if not obj:
            out.write("{}")
            return
        out.write("{\n")
        items = list(obj.items())
        for i, (k, v) in enumerate(items):
            out.write(pad + json.dumps(k) + ": ")
            _emit(v, out, indent, level + 1)
            out.write(",\n" if i < len(items) - 1 else "\n")
        out.write(end + "}")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent=2):
    buf = io.StringIO()
    _emit(to_plain(obj), buf, indent, 0)
    buf.write("\n")
    return buf.getvalue()


def csv_cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        s = fmt_float(v)
        return "" if s == "null" else s.strip('"')
    return str(v)


def to_csv(header, rows):
    """Rows are mappings or sequences aligned with ``header``; newline is ``\\n``."""
    lines = [",".join(header)]
    for row in rows:
        vals = [row.get(h) for h in header] if isinstance(row, dict) else list(row)
        lines.append(",".join(_quote(csv_cell(v)) for v in vals))
    return "\n".join(lines) + "\n"


def _quote(cell):
    if any(c in cell for c in ',"\n'):
        return '"' + cell.replace('"', '""') + '"'
    return cell
