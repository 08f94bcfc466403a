"""JSON and CSV formats for matrices, vectors, models and series.

Matrix: ``{"dim": n, "entries": [[re, im], ...]}`` with ``n * n`` entries in
row major order. A vector uses the same layout with ``n`` entries. Every
float is written with 17 significant digits, which round trips binary64
exactly.
"""

from __future__ import annotations

import csv
import io as _io
import json
import math

import numpy as np

from .errors import InputError
from .funcalc import LocalFunctionData
from .specdensity import DeltaEmission, DiscreteEmission, HiddenMarkovModel, NormalEmission

__all__ = [
    "format_float",
    "dumps",
    "load_json",
    "complex_from_json",
    "complex_to_json",
    "matrix_to_json",
    "matrix_from_json",
    "vector_to_json",
    "vector_from_json",
    "hmm_from_json",
    "hmm_to_json",
    "laurent_from_json",
    "write_csv",
    "read_series_csv",
]


def format_float(x):
    """Shortest locale independent text with 17 significant digits."""
    x = float(x)
    if not math.isfinite(x):
        raise InputError(f"cannot serialize non-finite value {x}")
    text = format(x, ".17g")
    # keep the float type (and the sign of zero) through a JSON parse
    return text if any(c in text for c in ".en") else text + ".0"


def _emit(obj, out):
    if isinstance(obj, bool) or obj is None:
        out.append(json.dumps(obj))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(format_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(", ")
            out.append(json.dumps(str(k)))
            out.append(": ")
            _emit(v, out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, v in enumerate(obj):
            if i:
                out.append(", ")
            _emit(v, out)
        out.append("]")
    else:
        raise InputError(f"cannot serialize {type(obj).__name__}")


def dumps(obj):
    """JSON text with every float at 17 significant digits."""
    out = []
    _emit(obj, out)
    return "".join(out)


def load_json(path):
    """Parse a JSON file, raising `InputError` on any failure."""
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot read JSON from {path}: {exc}") from exc


def complex_to_json(z):
    z = complex(z)
    return [z.real, z.imag]


def complex_from_json(v):
    """Accepts ``[re, im]`` or a bare real number."""
    if isinstance(v, bool):
        raise InputError("expected a number")
    if isinstance(v, (int, float)):
        return complex(float(v), 0.0)
    if isinstance(v, (list, tuple)) and len(v) == 2 and all(
            isinstance(p, (int, float)) and not isinstance(p, bool) for p in v):
        return complex(float(v[0]), float(v[1]))
    raise InputError(f"expected [re, im], got {v!r}")


def _entries(obj, count, what):
    if not isinstance(obj, dict) or "entries" not in obj:
        raise InputError(f"{what} JSON needs an 'entries' field")
    ent = obj["entries"]
    if not isinstance(ent, list) or len(ent) != count:
        raise InputError(f"{what} needs {count} entries")
    return np.array([complex_from_json(v) for v in ent], dtype=complex)


def matrix_to_json(M):
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InputError("only square matrices are serialized")
    return {"dim": int(M.shape[0]), "entries": [complex_to_json(z) for z in M.reshape(-1)]}


def matrix_from_json(obj):
    if not isinstance(obj, dict) or not isinstance(obj.get("dim"), int) or isinstance(obj.get("dim"), bool):
        raise InputError("matrix JSON needs an integer 'dim'")
    n = obj["dim"]
    if n < 1:
        raise InputError("matrix dimension must be positive")
    return _entries(obj, n * n, "matrix").reshape(n, n)


def vector_to_json(v):
    v = np.asarray(v, dtype=complex).reshape(-1)
    return {"dim": int(v.size), "entries": [complex_to_json(z) for z in v]}


def vector_from_json(obj):
    if isinstance(obj, list):
        return np.array([complex_from_json(v) for v in obj], dtype=complex)
    if not isinstance(obj, dict) or not isinstance(obj.get("dim"), int):
        raise InputError("vector JSON needs an integer 'dim'")
    return _entries(obj, obj["dim"], "vector")


def _emission_from_json(e):
    if not isinstance(e, dict) or "kind" not in e:
        raise InputError("emission needs a 'kind'")
    kind = e["kind"]
    try:
        if kind == "delta":
            return DeltaEmission(complex_from_json(e["value"]))
        if kind == "normal":
            return NormalEmission(complex_from_json(e["mean"]), float(e["variance"]))
        if kind == "discrete":
            return DiscreteEmission(tuple(complex_from_json(v) for v in e["values"]),
                                    tuple(float(p) for p in e["probs"]))
    except KeyError as exc:
        raise InputError(f"emission of kind {kind!r} is missing {exc}") from exc
    raise InputError(f"unknown emission kind {kind!r}")


def _emission_to_json(e):
    if isinstance(e, DeltaEmission):
        return {"kind": "delta", "value": complex_to_json(e.value)}
    if isinstance(e, NormalEmission):
        return {"kind": "normal", "mean": complex_to_json(e.mean_value), "variance": float(e.variance)}
    return {"kind": "discrete", "values": [complex_to_json(v) for v in e.values],
            "probs": [float(p) for p in e.probs]}


def hmm_from_json(obj):
    """``{"T": matrix, "means": [...], "second_moments": [...], "emissions": [...]}``.

    With `emissions` present the moments may be omitted and are then read
    from the samplers.
    """
    if not isinstance(obj, dict) or "T" not in obj:
        raise InputError("HMM JSON needs a 'T' matrix")
    T = matrix_from_json(obj["T"])
    emissions = None
    if obj.get("emissions") is not None:
        if not isinstance(obj["emissions"], list):
            raise InputError("'emissions' must be a list")
        emissions = tuple(_emission_from_json(e) for e in obj["emissions"])
    if "means" in obj:
        means = vector_from_json(obj["means"])
    elif emissions is not None:
        means = [e.mean for e in emissions]
    else:
        raise InputError("HMM JSON needs 'means'")
    if "second_moments" in obj:
        sec = obj["second_moments"]
        sec = vector_from_json(sec)
    elif emissions is not None:
        sec = [e.second_moment for e in emissions]
    else:
        sec = np.abs(np.asarray(means)) ** 2
    return HiddenMarkovModel(T, means, sec, emissions)


def hmm_to_json(hmm):
    out = {
        "T": matrix_to_json(hmm.T),
        "means": [complex_to_json(m) for m in hmm.means],
        "second_moments": [float(s) for s in hmm.second_moments],
    }
    if hmm.emissions is not None:
        out["emissions"] = [_emission_to_json(e) for e in hmm.emissions]
    return out


def laurent_from_json(obj):
    """One ``{"lambda": [re, im], "coeffs": [...]}`` object or a list of them."""
    items = obj if isinstance(obj, list) else [obj]
    out = []
    for it in items:
        if not isinstance(it, dict) or "lambda" not in it or "coeffs" not in it:
            raise InputError("Laurent JSON needs 'lambda' and 'coeffs'")
        if not isinstance(it["coeffs"], list):
            raise InputError("'coeffs' must be a list")
        out.append((complex_from_json(it["lambda"]), [complex_from_json(c) for c in it["coeffs"]]))
    return LocalFunctionData(out)


def write_csv(stream, header, rows):
    """Write rows of numbers to a text stream, floats at 17 digits."""
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([v if isinstance(v, (int, np.integer, str)) else format_float(v) for v in row])


def read_series_csv(path):
    """Read a series from CSV with columns ``x_re`` and optionally ``x_im``.

    A file without a header row is read as one or two numeric columns.
    """
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    rows = [r for r in csv.reader(_io.StringIO(text)) if r]
    if not rows:
        raise InputError("series file is empty")
    head = [h.strip() for h in rows[0]]
    try:
        float(head[0])
        body, re_i, im_i = rows, 0, (1 if len(head) > 1 else None)
    except ValueError:
        if "x_re" not in head:
            raise InputError("series CSV needs an 'x_re' column") from None
        body, re_i = rows[1:], head.index("x_re")
        im_i = head.index("x_im") if "x_im" in head else None
    try:
        re = np.array([float(r[re_i]) for r in body])
        im = np.array([float(r[im_i]) for r in body]) if im_i is not None else np.zeros(len(body))
    except (ValueError, IndexError) as exc:
        raise InputError(f"malformed series CSV: {exc}") from exc
    return re + 1j * im
