"""Body specification documents.

A document is a JSON object::

    {"kind": "ellipsoid", "dimension": 3, "name": "egg",
     "center": [0, 0, 0], "matrix": [[1, 0, 0], [0, 4, 0], [0, 0, 9]]}

Per kind: ``ellipsoid`` takes ``center`` and ``matrix`` (or ``radius`` for a
ball); ``pball`` takes ``exponent`` with ``semi_axes`` (or ``radius``) and an
optional ``center``; ``polytope`` takes ``vertices``; ``affine_image`` takes
``matrix``, an optional ``offset`` and a nested ``inner`` document.

Serialization writes floats with ``repr`` precision, so
``parse(dump(parse(text)))`` reproduces the same body bit for bit.
"""

from __future__ import annotations

import json
import logging
import math
from typing import Any, Dict, Mapping, Optional, Tuple

import numpy as np

from apps.common.functions.files import dumps_json, read_text
from apps.convex.errors import BodySpecError, GeometryError
from apps.convex.geometry.projective import AffineMap

from .affine import AffineImage
from .base import ConvexBody
from .ellipsoid import Ellipsoid
from .pball import PBall
from .polytope import Polytope
from .registry import body_registry

logger = logging.getLogger(__name__)

_COMMON_KEYS = {"kind", "dimension", "name"}
_KIND_KEYS = {
    "ellipsoid": {"center", "matrix", "radius"},
    "pball": {"center", "exponent", "semi_axes", "radius"},
    "polytope": {"vertices"},
    "affine_image": {"matrix", "offset", "inner"},
}


class _Document:
    """Decoded mapping plus the source text, for line-aware errors.

    ``start`` is the offset of the object's opening brace in ``text``.
    """

    def __init__(self, data: Mapping[str, Any], text: str, prefix: str = "", start: int = 0):
        self.data = data
        self.text = text
        self.prefix = prefix
        self.start = start
        self._keys: Optional[Dict[str, Tuple[int, int]]] = None

    @property
    def keys(self) -> Dict[str, Tuple[int, int]]:
        if self._keys is None:
            self._keys = _object_keys(self.text, self.start)
        return self._keys

    def error(self, message: str, key: Optional[str] = None) -> BodySpecError:
        field = f"{self.prefix}{key}" if key else (self.prefix.rstrip(".") or None)
        line = self.keys[key][0] if key in self.keys else None
        return BodySpecError(message, field=field, line=line)

    def require(self, key: str):
        if key not in self.data:
            raise self.error("missing required field", key)
        return self.data[key]

    def number(self, key: str, default=None) -> float:
        value = self.data.get(key, default) if default is not None else self.require(key)
        if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
            raise self.error("expected a finite number", key)
        return float(value)

    def vector(self, key: str, dim: int, default=None) -> np.ndarray:
        if key not in self.data and default is not None:
            return np.asarray(default, dtype=float)
        value = self.require(key)
        try:
            arr = np.array(value, dtype=float)
        except (TypeError, ValueError):
            raise self.error("expected a list of numbers", key)
        if arr.shape != (dim,) or not np.all(np.isfinite(arr)):
            raise self.error(f"expected {dim} finite numbers", key)
        return arr

    def matrix(self, key: str, rows: Optional[int], cols: int) -> np.ndarray:
        value = self.require(key)
        try:
            arr = np.array(value, dtype=float)
        except (TypeError, ValueError):
            raise self.error("expected a list of rows", key)
        if arr.ndim != 2 or arr.shape[1] != cols or (rows is not None and arr.shape[0] != rows):
            shape = f"{rows}x{cols}" if rows is not None else f"mx{cols}"
            raise self.error(f"expected a {shape} matrix", key)
        if not np.all(np.isfinite(arr)):
            raise self.error("matrix entries must be finite", key)
        return arr

    def nested(self, key: str) -> "_Document":
        value = self.require(key)
        if not isinstance(value, dict):
            raise self.error("expected a body document", key)
        start = self.keys[key][1] if key in self.keys else 0
        return _Document(value, self.text, f"{self.prefix}{key}.", start)


def _skip_blank(text: str, i: int) -> int:
    while i < len(text) and text[i] in " \t\r\n":
        i += 1
    return i


def _object_keys(text: str, start: int) -> Dict[str, Tuple[int, int]]:
    """Line and value offset of each key of the JSON object opening at ``start``.

    Keys of nested objects and arrays are not included.
    """

    keys: Dict[str, Tuple[int, int]] = {}
    depth = 0
    i = text.find("{", start)
    while 0 <= i < len(text):
        ch = text[i]
        if ch == '"':
            j = i + 1
            while j < len(text) and text[j] != '"':
                j += 2 if text[j] == "\\" else 1
            colon = _skip_blank(text, j + 1)
            if depth == 1 and colon < len(text) and text[colon] == ":":
                keys.setdefault(json.loads(text[i:j + 1]), (text.count("\n", 0, i) + 1, _skip_blank(text, colon + 1)))
            i = j + 1
            continue
        if ch in "{[":
            depth += 1
        elif ch in "}]":
            depth -= 1
            if depth == 0:
                break
        i += 1
    return keys


def _parse_ellipsoid(doc: _Document, dim: int, name) -> Ellipsoid:
    center = doc.vector("center", dim, default=np.zeros(dim))
    if "radius" in doc.data:
        if "matrix" in doc.data:
            raise doc.error("give either radius or matrix, not both", "radius")
        radius = doc.number("radius")
        if radius <= 0:
            raise doc.error("radius must be positive", "radius")
        return Ellipsoid.ball(radius, center, name=name)
    return Ellipsoid(center, doc.matrix("matrix", dim, dim), name=name)


def _parse_pball(doc: _Document, dim: int, name) -> PBall:
    exponent = doc.number("exponent")
    if "radius" in doc.data:
        if "semi_axes" in doc.data:
            raise doc.error("give either radius or semi_axes, not both", "radius")
        axes = np.full(dim, doc.number("radius"))
    else:
        axes = doc.vector("semi_axes", dim)
    center = doc.vector("center", dim, default=np.zeros(dim))
    return PBall(exponent, axes, center, name=name)


def _parse_polytope(doc: _Document, dim: int, name) -> Polytope:
    vertices = doc.matrix("vertices", None, dim)
    if len(vertices) < dim + 1:
        raise doc.error(f"need at least {dim + 1} vertices", "vertices")
    return Polytope(vertices, name=name)


def _parse_affine_image(doc: _Document, dim: int, name) -> AffineImage:
    linear = doc.matrix("matrix", dim, dim)
    offset = doc.vector("offset", dim, default=np.zeros(dim))
    inner = _parse(doc.nested("inner"))
    if inner.dim != dim:
        raise doc.error(f"inner body has dimension {inner.dim}, expected {dim}", "inner")
    try:
        amap = AffineMap.from_linear(linear, offset)
    except GeometryError as exc:
        raise doc.error(str(exc), "matrix")
    return AffineImage(amap, inner, name=name)


def register(registry):
    registry.register("ellipsoid", Ellipsoid, _parse_ellipsoid)
    registry.register("pball", PBall, _parse_pball)
    registry.register("polytope", Polytope, _parse_polytope)
    registry.register("affine_image", AffineImage, _parse_affine_image)


def _parse(doc: _Document) -> ConvexBody:
    kind = doc.require("kind")
    parser = body_registry.parser(kind) if isinstance(kind, str) else None
    if parser is None:
        known = ", ".join(sorted(body_registry.all()))
        raise doc.error(f"unknown body kind {kind!r} (expected one of {known})", "kind")
    unknown = set(doc.data) - _COMMON_KEYS - _KIND_KEYS.get(kind, set())
    if unknown:
        raise doc.error(f"unknown field for kind {kind}", sorted(unknown)[0])
    dim = doc.require("dimension")
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 2:
        raise doc.error("dimension must be an integer >= 2", "dimension")
    name = doc.data.get("name")
    if name is not None and not isinstance(name, str):
        raise doc.error("name must be a string", "name")
    try:
        return parser(doc, dim, name)
    except BodySpecError:
        raise
    except (GeometryError, ValueError) as exc:
        raise doc.error(str(exc))


def parse_body_spec(text: str) -> ConvexBody:
    """Parse a body specification document."""

    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BodySpecError(f"invalid JSON: {exc.msg}", line=exc.lineno) from exc
    if not isinstance(data, dict):
        raise BodySpecError("body specification must be a JSON object", line=1)
    body = _parse(_Document(data, text))
    logger.debug("parsed %r", body)
    return body


def load_body_spec(path) -> ConvexBody:
    return parse_body_spec(read_text(path))


def dump_body_spec(body: ConvexBody) -> str:
    return dumps_json(body.to_spec())


__all__ = ["parse_body_spec", "load_body_spec", "dump_body_spec", "register"]
