"""Reading credal sets and groupings, and writing JSON/CSV at full precision."""

import csv
import io
import json
import math
from dataclasses import asdict, is_dataclass

import numpy as np

from .errors import CredalError, DimensionMismatch, EmptyInput, InvalidGrouping
from .simplex import Event, Grouping, make_credal_polytope


class InputError(CredalError):
    """Malformed input file."""


def format_float(x):
    """17 significant digits (round-trip safe); non-finite values become null."""
    x = float(x)
    if not math.isfinite(x):
        return "null"
    s = "%.17g" % x
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


def _plain(obj):
    if is_dataclass(obj) and not isinstance(obj, type):
        return asdict(obj) if not hasattr(obj, "as_dict") else obj.as_dict()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, Event):
        return obj.mask
    return obj


def dumps(obj, indent=2, _level=0):
    """JSON text with floats written to 17 significant digits, keys in insertion order."""
    obj = _plain(obj)
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if not any(isinstance(_plain(v), (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def csv_text(header, rows, comments=()):
    """CSV with full-precision floats, preceded by ``comments`` as '# ' lines."""
    buf = io.StringIO()
    for line in comments:
        buf.write("# " + line + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_csv_cell(v) for v in row])
    return buf.getvalue()


def _csv_cell(v):
    v = _plain(v)
    if isinstance(v, bool) or v is None:
        return "" if v is None else str(v).lower()
    if isinstance(v, float):
        return format_float(v) if math.isfinite(v) else "nan"
    return v


def _load(source):
    if isinstance(source, (dict, list)):
        return source
    try:
        with open(source) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}: not valid JSON ({exc})") from None


def credal_set_from_json(data):
    """Parse ``{"d": int, "vertices": [[p_1, ..., p_d], ...]}``; ``d`` is optional."""
    if not isinstance(data, dict) or "vertices" not in data:
        raise InputError('credal set must be an object with a "vertices" array')
    verts = data["vertices"]
    if not isinstance(verts, list) or not verts:
        raise EmptyInput("vertex list is empty")
    if not all(isinstance(v, list) and v and all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in v) for v in verts):
        raise InputError("each vertex must be a nonempty list of numbers")
    P = make_credal_polytope(verts)
    if "d" in data and data["d"] != P.d:
        raise DimensionMismatch(f'"d" is {data["d"]} but vertices have {P.d} entries')
    return P


def read_credal_set(path):
    return credal_set_from_json(_load(path))


def credal_set_to_json(P):
    return {"d": P.d, "vertices": P.vertices.tolist()}


def grouping_from_json(data):
    """Parse ``{"d1": int, "d2": int, "pairs": [[i1, i2], ...]}``."""
    if not isinstance(data, dict) or not {"d1", "d2", "pairs"} <= set(data):
        raise InvalidGrouping('grouping must have "d1", "d2" and "pairs"')
    return Grouping(tuple(tuple(p) for p in data["pairs"]), int(data["d1"]), int(data["d2"]))


def read_grouping(path):
    return grouping_from_json(_load(path))


def load_schema(name):
    """JSON schema shipped for a subcommand's output (``"table"`` for tabular JSON)."""
    from importlib.resources import files

    return json.loads((files("credalvol") / "schemas" / f"{name}.schema.json").read_text())
