"""Frame documents on disk and deterministic JSON output.

A document is UTF-8 JSON::

    {"signature": {"p": 2, "q": 1},
     "vectors": [[1, 0, 0.7071067811865476], [0, 1, [0.5, -0.5]]]}

Each coordinate is a real number or an ``[re, im]`` pair. Documents written
by ``split`` additionally carry ``"mask"`` (0/1 per parent coordinate) and
``"parent_signature"`` so that ``merge`` can put the pieces back.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from numbers import Integral, Real
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import ParseError
from .frames import Frame
from .kspace import KreinSpace


@dataclass(frozen=True, eq=False)
class FrameDocument:
    space: KreinSpace
    vectors: np.ndarray
    mask: Optional[np.ndarray] = None
    parent: Optional[KreinSpace] = None

    def frame(self) -> Frame:
        return Frame(self.space, self.vectors)


def parse_scalar(value, where: str) -> complex:
    if isinstance(value, bool):
        raise ParseError(f"{where}: expected a number, got a boolean")
    if isinstance(value, Real):
        z = complex(float(value))
    elif isinstance(value, (list, tuple)) and len(value) == 2 and all(
        isinstance(v, Real) and not isinstance(v, bool) for v in value
    ):
        z = complex(float(value[0]), float(value[1]))
    else:
        raise ParseError(f"{where}: expected a number or an [re, im] pair, got {value!r}")
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ParseError(f"{where}: non-finite value")
    return z


def parse_coords(values, where: str) -> np.ndarray:
    if not isinstance(values, list):
        raise ParseError(f"{where}: expected a list of coordinates")
    return np.array([parse_scalar(v, f"{where}[{j}]") for j, v in enumerate(values)], dtype=complex)


def _parse_signature(obj, where: str) -> KreinSpace:
    if not isinstance(obj, dict) or "p" not in obj or "q" not in obj:
        raise ParseError(f"{where}: expected an object with keys 'p' and 'q'")
    p, q = obj["p"], obj["q"]
    for name, v in (("p", p), ("q", q)):
        if isinstance(v, bool) or not isinstance(v, Integral) or v < 0:
            raise ParseError(f"{where}.{name}: expected a non-negative integer, got {v!r}")
    if p + q < 1:
        raise ParseError(f"{where}: p + q must be at least 1")
    return KreinSpace(int(p), int(q))


def parse_document(obj) -> FrameDocument:
    if not isinstance(obj, dict):
        raise ParseError("document: expected a JSON object")
    if "signature" not in obj:
        raise ParseError("signature: missing")
    if "vectors" not in obj:
        raise ParseError("vectors: missing")
    space = _parse_signature(obj["signature"], "signature")
    vecs = obj["vectors"]
    if not isinstance(vecs, list) or not vecs:
        raise ParseError("vectors: expected a non-empty list")
    rows = []
    for i, v in enumerate(vecs):
        row = parse_coords(v, f"vectors[{i}]")
        if row.shape[0] != space.n:
            raise ParseError(f"vectors[{i}]: has {row.shape[0]} coordinates, signature needs {space.n}")
        rows.append(row)
    mask = parent = None
    if "parent_signature" in obj:
        parent = _parse_signature(obj["parent_signature"], "parent_signature")
    if "mask" in obj:
        m = obj["mask"]
        if parent is None:
            raise ParseError("mask: requires parent_signature")
        if not isinstance(m, list) or len(m) != parent.n or any(v not in (0, 1) or isinstance(v, float) for v in m):
            raise ParseError(f"mask: expected {parent.n} entries of 0 or 1")
        mask = np.array(m, dtype=bool)
        if (int(mask[: parent.p].sum()), int(mask[parent.p :].sum())) != (space.p, space.q):
            raise ParseError("mask: selected coordinates do not match signature")
    return FrameDocument(space, np.vstack(rows), mask, parent)


def load_document(path) -> FrameDocument:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror or exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc
    return parse_document(obj)


def encode_scalar(z):
    z = complex(z)
    return z.real if z.imag == 0.0 else [z.real, z.imag]


def encode_matrix(M) -> list:
    return [[encode_scalar(z) for z in row] for row in np.atleast_2d(M)]


def frame_document(F: Frame, mask=None, parent: Optional[KreinSpace] = None) -> dict:
    doc = {"signature": {"p": F.space.p, "q": F.space.q}, "vectors": encode_matrix(F.vectors)}
    if mask is not None:
        doc["mask"] = [int(b) for b in mask]
        doc["parent_signature"] = {"p": parent.p, "q": parent.q}
    return doc


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    return format(x, ".17g")


def _is_scalar(v) -> bool:
    return v is None or isinstance(v, (bool, str, Real, np.generic))


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with floats at 17 significant digits and stable key order.

    Lists of scalars (and lists of such lists one level deep) stay on one
    line so matrices read row by row.
    """
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (Integral, np.integer)):
        return str(int(obj))
    if isinstance(obj, (Real, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, complex):
        return dumps(encode_scalar(obj), indent, _level)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if all(_is_scalar(v) or (isinstance(v, (list, tuple)) and all(_is_scalar(w) for w in v)) for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")
