"""Affine and projective primitives.

Points of projective space are :class:`HPoint` values holding homogeneous
coordinates ``(x_1, ..., x_n, w)``; ``w == 0`` marks a point at infinity.
Hyperplanes, lines, charts and slabs are affine flats in ``R^n``; a hyperplane
can also be the hyperplane at infinity so polars of interior poles need no
special casing.

All types are immutable and all operations are pure.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import null_space

from apps.convex.errors import DegenerateQuadruple, GeometryError, NonCollinear

logger = logging.getLogger(__name__)

# Proportionality and degeneracy gates on unit-normalized homogeneous vectors
_EQ_TOL = 1e-12
_BRACKET_TOL = 1e-14


def _frozen(values, ndim: Optional[int] = None) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if ndim is not None and arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-dimensional array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("coordinates must be finite")
    arr.setflags(write=False)
    return arr


def _unit(v: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ValueError("zero vector has no direction")
    return v / norm


def _canonical_sign(v: np.ndarray) -> np.ndarray:
    """Flip ``v`` so its largest-magnitude component is positive."""

    idx = int(np.argmax(np.abs(v)))
    return -v if v[idx] < 0 else v


def complement_basis(vectors) -> np.ndarray:
    """Orthonormal rows spanning the orthogonal complement of ``vectors``."""

    return null_space(np.atleast_2d(np.asarray(vectors, dtype=float))).T


# ---------------------------------------------------------------------------
# Points
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class HPoint:
    """A point of projective n-space in homogeneous coordinates.

    Two points are equal when their coordinate vectors are proportional
    (relative tolerance ``1e-12`` on the unit-normalized vectors).
    """

    coords: Tuple[float, ...]

    def __post_init__(self):
        arr = _frozen(self.coords, ndim=1)
        if arr.size < 2:
            raise ValueError("homogeneous coordinates need at least two entries")
        if not np.any(arr):
            raise ValueError("homogeneous coordinates cannot all be zero")
        object.__setattr__(self, "coords", tuple(float(c) for c in arr))

    @classmethod
    def from_affine(cls, x) -> "HPoint":
        x = np.asarray(x, dtype=float)
        return cls(tuple(x) + (1.0,))

    @classmethod
    def at_infinity(cls, direction) -> "HPoint":
        d = _unit(np.asarray(direction, dtype=float))
        return cls(tuple(d) + (0.0,))

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.coords)

    def normalized(self) -> np.ndarray:
        """Unit-norm homogeneous vector with a canonical sign."""

        return _canonical_sign(_unit(self.vector))

    def is_at_infinity(self, tol: float = _EQ_TOL) -> bool:
        v = self.vector
        return abs(v[-1]) <= tol * np.linalg.norm(v)

    def affine(self) -> np.ndarray:
        """Affine coordinates; raises ``GeometryError`` for points at infinity."""

        if self.is_at_infinity():
            raise GeometryError("point at infinity has no affine coordinates")
        v = self.vector
        return v[:-1] / v[-1]

    def direction(self) -> np.ndarray:
        """Unit direction of a point at infinity."""

        if not self.is_at_infinity():
            raise GeometryError("finite point has no direction at infinity")
        return _unit(self.vector[:-1])

    def __eq__(self, other) -> bool:
        if not isinstance(other, HPoint) or other.dim != self.dim:
            return NotImplemented
        u = _unit(self.vector)
        v = _unit(other.vector)
        return bool(min(np.linalg.norm(u - v), np.linalg.norm(u + v)) <= _EQ_TOL)

    __hash__ = None

    def __repr__(self) -> str:
        if self.is_at_infinity():
            return f"HPoint(infinity {np.round(self.direction(), 12).tolist()})"
        return f"HPoint({np.round(self.affine(), 12).tolist()})"


# ---------------------------------------------------------------------------
# Flats
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Chart:
    """An affine k-flat with an orthonormal frame.

    ``origin`` is a point of the flat and ``basis`` holds k orthonormal rows;
    local coordinates ``y`` map to ``origin + y @ basis``.
    """

    origin: np.ndarray
    basis: np.ndarray

    def __post_init__(self):
        origin = _frozen(self.origin, ndim=1)
        basis = _frozen(np.atleast_2d(self.basis), ndim=2)
        if basis.shape[1] != origin.size:
            raise ValueError("chart basis and origin dimensions differ")
        if not np.allclose(basis @ basis.T, np.eye(basis.shape[0]), atol=1e-10):
            raise ValueError("chart basis must be orthonormal")
        object.__setattr__(self, "origin", origin)
        object.__setattr__(self, "basis", basis)

    @classmethod
    def from_vectors(cls, origin, vectors) -> "Chart":
        q, _ = np.linalg.qr(np.atleast_2d(np.asarray(vectors, dtype=float)).T)
        return cls(origin, q.T)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def ambient_dim(self) -> int:
        return self.origin.size

    def to_local(self, points) -> np.ndarray:
        return (np.asarray(points, dtype=float) - self.origin) @ self.basis.T

    def to_global(self, coords) -> np.ndarray:
        return self.origin + np.asarray(coords, dtype=float) @ self.basis

    def residual(self, points) -> np.ndarray:
        """Euclidean distance of ``points`` to the flat."""

        rel = np.asarray(points, dtype=float) - self.origin
        return np.linalg.norm(rel - (rel @ self.basis.T) @ self.basis, axis=-1)

    def normals(self) -> np.ndarray:
        return complement_basis(self.basis)

    def recentered(self, origin) -> "Chart":
        origin = np.asarray(origin, dtype=float)
        return Chart(self.to_global(self.to_local(origin)), self.basis)


@dataclass(frozen=True, eq=False)
class Hyperplane:
    """The hyperplane ``{x : <normal, x> = offset}``.

    ``normal`` has unit length. The hyperplane at infinity is represented with
    ``infinite=True`` and a zero normal; its homogeneous coefficients are
    ``(0, ..., 0, 1)``.
    """

    normal: np.ndarray
    offset: float
    infinite: bool = False

    def __post_init__(self):
        normal = _frozen(self.normal, ndim=1)
        if self.infinite:
            if np.any(normal):
                raise ValueError("the hyperplane at infinity has a zero normal")
        elif abs(np.linalg.norm(normal) - 1.0) > 1e-12:
            raise ValueError("hyperplane normal must have unit length")
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "offset", float(self.offset))

    @classmethod
    def from_normal(cls, normal, offset: float = 0.0) -> "Hyperplane":
        normal = np.asarray(normal, dtype=float)
        norm = np.linalg.norm(normal)
        if norm == 0:
            raise ValueError("hyperplane normal cannot be zero")
        return cls(normal / norm, offset / norm)

    @classmethod
    def through(cls, point, normal) -> "Hyperplane":
        n = _unit(np.asarray(normal, dtype=float))
        return cls(n, float(n @ np.asarray(point, dtype=float)))

    @classmethod
    def at_infinity(cls, dim: int) -> "Hyperplane":
        return cls(np.zeros(dim), 0.0, infinite=True)

    @classmethod
    def from_coefficients(cls, coefficients, tol: float = 1e-12) -> "Hyperplane":
        """Build from homogeneous coefficients ``c`` with ``<c, (x, 1)> = 0``."""

        c = np.asarray(coefficients, dtype=float)
        a, a0 = c[:-1], c[-1]
        norm = np.linalg.norm(a)
        if norm <= tol * np.linalg.norm(c):
            return cls.at_infinity(a.size)
        return cls(a / norm, -a0 / norm)

    @property
    def dim(self) -> int:
        return self.normal.size

    def coefficients(self) -> np.ndarray:
        if self.infinite:
            c = np.zeros(self.dim + 1)
            c[-1] = 1.0
            return c
        return np.append(self.normal, -self.offset)

    def _require_finite(self):
        if self.infinite:
            raise GeometryError("operation undefined for the hyperplane at infinity")

    def signed_distance(self, points) -> np.ndarray:
        self._require_finite()
        return np.asarray(points, dtype=float) @ self.normal - self.offset

    def contains(self, point, tol: float = 1e-9) -> bool:
        if isinstance(point, HPoint):
            v = point.normalized()
            return bool(abs(self.coefficients() @ v) <= tol)
        return bool(abs(self.signed_distance(point)) <= tol)

    def project(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        return points - np.multiply.outer(self.signed_distance(points), self.normal)

    def parallel_through(self, point) -> "Hyperplane":
        self._require_finite()
        return Hyperplane(self.normal, float(self.normal @ np.asarray(point, dtype=float)))

    def chart(self, origin=None) -> Chart:
        """Orthonormal chart; origin defaults to the point closest to 0."""

        self._require_finite()
        base = self.offset * self.normal if origin is None else self.project(origin)
        return Chart(base, complement_basis(self.normal))

    def intersect_line(self, line: "Line") -> HPoint:
        """Meet of ``line`` with the hyperplane as a projective point."""

        if self.infinite:
            return HPoint.at_infinity(line.direction)
        denom = self.normal @ line.direction
        if abs(denom) <= 1e-14:
            return HPoint.at_infinity(line.direction)
        t = (self.offset - self.normal @ line.point) / denom
        return HPoint.from_affine(line.at(t))

    def angle_to(self, other: "Hyperplane") -> float:
        """Unsigned angle between the normals, folded into ``[0, pi/2]``."""

        self._require_finite()
        other._require_finite()
        c = abs(float(self.normal @ other.normal))
        s = np.linalg.norm(np.cross(self.normal, other.normal)) if self.dim == 3 else math.sqrt(max(0.0, 1 - c * c))
        return math.atan2(s, c)

    def __repr__(self) -> str:
        if self.infinite:
            return f"Hyperplane(at infinity, dim={self.dim})"
        return f"Hyperplane(normal={np.round(self.normal, 12).tolist()}, offset={self.offset:.12g})"


@dataclass(frozen=True, eq=False)
class Line:
    """The affine line ``point + t * direction`` with a unit direction."""

    point: np.ndarray
    direction: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "point", _frozen(self.point, ndim=1))
        direction = _unit(np.asarray(self.direction, dtype=float))
        object.__setattr__(self, "direction", _frozen(direction, ndim=1))

    @classmethod
    def through(cls, a, b) -> "Line":
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        if np.linalg.norm(b - a) == 0:
            raise GeometryError("a line needs two distinct points")
        return cls(a, b - a)

    @property
    def dim(self) -> int:
        return self.point.size

    def at(self, t) -> np.ndarray:
        return self.point + np.multiply.outer(np.asarray(t, dtype=float), self.direction)

    def parameter(self, points) -> np.ndarray:
        return (np.asarray(points, dtype=float) - self.point) @ self.direction

    def distance(self, points) -> np.ndarray:
        rel = np.asarray(points, dtype=float) - self.point
        return np.linalg.norm(rel - np.multiply.outer(rel @ self.direction, self.direction), axis=-1)


@dataclass(frozen=True, eq=False)
class Slab:
    """The region ``a1 <= <normal, x> <= a2`` between two parallel hyperplanes."""

    normal: np.ndarray
    a1: float
    a2: float

    def __post_init__(self):
        normal = _frozen(self.normal, ndim=1)
        if abs(np.linalg.norm(normal) - 1.0) > 1e-12:
            raise ValueError("slab normal must have unit length")
        if not float(self.a1) < float(self.a2):
            raise ValueError("slab needs a1 < a2")
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "a1", float(self.a1))
        object.__setattr__(self, "a2", float(self.a2))

    @classmethod
    def around(cls, plane: Hyperplane, width: float) -> "Slab":
        """The ``width``-slab whose central hyperplane is ``plane``."""

        if width <= 0:
            raise ValueError("slab width must be positive")
        return cls(plane.normal, plane.offset - width / 2.0, plane.offset + width / 2.0)

    @property
    def width(self) -> float:
        return abs(self.a2 - self.a1)

    def contains(self, points) -> np.ndarray:
        s = np.asarray(points, dtype=float) @ self.normal
        return (s > self.a1) & (s < self.a2)

    def boundary(self) -> Tuple[Hyperplane, Hyperplane]:
        return Hyperplane(self.normal, self.a1), Hyperplane(self.normal, self.a2)

    def planes(self, k: int) -> Tuple[Hyperplane, ...]:
        """``k`` parallel hyperplanes evenly spaced strictly inside the slab.

        The central hyperplane is among them when ``k`` is odd.
        """

        if k < 1:
            raise ValueError("need at least one plane")
        offsets = self.a1 + (self.a2 - self.a1) * (np.arange(k) + 0.5) / k
        return tuple(Hyperplane(self.normal, float(o)) for o in offsets)


# ---------------------------------------------------------------------------
# Maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ProjectiveMap:
    """An invertible linear map on homogeneous coordinates."""

    matrix: np.ndarray

    def __post_init__(self):
        m = _frozen(self.matrix, ndim=2)
        if m.shape[0] != m.shape[1] or m.shape[0] < 2:
            raise ValueError("projective map needs a square matrix of size n+1 >= 2")
        scale = np.max(np.abs(m))
        if scale == 0 or abs(np.linalg.det(m)) <= 1e-12 * scale ** m.shape[0]:
            raise GeometryError("projective map is singular")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def random(cls, dim: int, rng: np.random.Generator, spread: float = 0.3) -> "ProjectiveMap":
        return cls(np.eye(dim + 1) + spread * rng.standard_normal((dim + 1, dim + 1)))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0] - 1

    def apply(self, point: HPoint) -> HPoint:
        return HPoint(tuple(self.matrix @ point.vector))

    def apply_hyperplane(self, plane: Hyperplane) -> Hyperplane:
        return Hyperplane.from_coefficients(np.linalg.solve(self.matrix.T, plane.coefficients()))

    def inverse(self) -> "ProjectiveMap":
        return ProjectiveMap(np.linalg.inv(self.matrix))

    def compose(self, other: "ProjectiveMap") -> "ProjectiveMap":
        """``self`` after ``other``."""

        return ProjectiveMap(self.matrix @ other.matrix)


@dataclass(frozen=True, eq=False)
class AffineMap(ProjectiveMap):
    """A projective map fixing the hyperplane at infinity: ``x -> A x + b``."""

    def __post_init__(self):
        super().__post_init__()
        last = self.matrix[-1]
        if np.any(np.abs(last[:-1]) > 1e-12 * abs(last[-1])) or last[-1] == 0:
            raise GeometryError("affine map must fix the hyperplane at infinity")
        if last[-1] != 1.0:
            object.__setattr__(self, "matrix", _frozen(self.matrix / last[-1]))

    @classmethod
    def from_linear(cls, linear, translation=None) -> "AffineMap":
        a = np.asarray(linear, dtype=float)
        n = a.shape[0]
        b = np.zeros(n) if translation is None else np.asarray(translation, dtype=float)
        m = np.eye(n + 1)
        m[:n, :n] = a
        m[:n, n] = b
        return cls(m)

    @classmethod
    def identity(cls, dim: int) -> "AffineMap":
        return cls(np.eye(dim + 1))

    @classmethod
    def random(cls, dim: int, rng: np.random.Generator, spread: float = 0.3) -> "AffineMap":
        """A well-conditioned random affine map (singular values in [0.5, 2])."""

        q1, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
        q2, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
        s = np.exp(rng.uniform(-np.log(2.0), np.log(2.0), dim))
        return cls.from_linear(q1 @ np.diag(s) @ q2, spread * rng.standard_normal(dim))

    @property
    def linear(self) -> np.ndarray:
        return self.matrix[:-1, :-1]

    @property
    def translation(self) -> np.ndarray:
        return self.matrix[:-1, -1]

    def __call__(self, points) -> np.ndarray:
        return np.asarray(points, dtype=float) @ self.linear.T + self.translation

    def inverse(self) -> "AffineMap":
        return AffineMap(np.linalg.inv(self.matrix))

    def compose(self, other: ProjectiveMap) -> ProjectiveMap:
        if isinstance(other, AffineMap):
            return AffineMap(self.matrix @ other.matrix)
        return super().compose(other)


# ---------------------------------------------------------------------------
# Cross ratio
# ---------------------------------------------------------------------------

def _line_coordinates(points: Sequence[HPoint], tol: float) -> np.ndarray:
    """Coordinates of collinear points in an orthonormal basis of their span."""

    dims = {p.dim for p in points}
    if len(dims) != 1:
        raise GeometryError("points live in different dimensions")
    m = np.vstack([p.normalized() for p in points])
    _, s, vt = np.linalg.svd(m, full_matrices=False)
    if s.size > 2 and s[2] > tol * s[0]:
        raise NonCollinear(f"collinearity residual {s[2] / s[0]:.3e} exceeds {tol:.1e}")
    return m @ vt[:2].T


def _bracket(c: np.ndarray, i: int, j: int) -> float:
    return float(c[i, 0] * c[j, 1] - c[i, 1] * c[j, 0])


def cross_ratio(a: HPoint, b: HPoint, c: HPoint, d: HPoint, tol: float = 1e-9) -> float:
    """Projective cross ratio ``[a, b; c, d]``.

    In an affine coordinate ``t`` along the line this is
    ``(t_a - t_c)(t_b - t_d) / ((t_b - t_c)(t_a - t_d))``; ``-1`` marks a
    harmonic quadruple. Returns ``inf`` when only the denominator vanishes.
    """

    quad = (a, b, c, d)
    if sum(p.is_at_infinity() for p in quad) > 1:
        raise DegenerateQuadruple("at most one point of the quadruple may lie at infinity")
    coords = _line_coordinates(quad, tol)
    num = _bracket(coords, 0, 2) * _bracket(coords, 1, 3)
    den = _bracket(coords, 1, 2) * _bracket(coords, 0, 3)
    if abs(den) <= _BRACKET_TOL:
        if abs(num) <= _BRACKET_TOL:
            raise DegenerateQuadruple("coincident points make the cross ratio 0/0")
        return math.inf
    return num / den


def harmonic_conjugate(a: HPoint, b: HPoint, o: HPoint, tol: float = 1e-9) -> HPoint:
    """The point ``p`` with ``cross_ratio(a, b, o, p) == -1``.

    Writing ``o = s*a + t*b`` in homogeneous coordinates, ``p = s*a - t*b``.
    ``p`` lies at infinity exactly when ``o`` is the midpoint of ``[a, b]``.
    """

    va, vb, vo = a.normalized(), b.normalized(), o.normalized()
    basis = np.column_stack([va, vb])
    if np.linalg.svd(basis, compute_uv=False)[-1] <= _BRACKET_TOL:
        raise DegenerateQuadruple("a and b coincide")
    (s, t), *_ = np.linalg.lstsq(basis, vo, rcond=None)
    residual = np.linalg.norm(basis @ np.array([s, t]) - vo)
    if residual > tol:
        raise NonCollinear(f"collinearity residual {residual:.3e} exceeds {tol:.1e}")
    if min(abs(s), abs(t)) <= _BRACKET_TOL:
        raise DegenerateQuadruple("o coincides with an endpoint")
    return HPoint(tuple(s * va - t * vb))


__all__ = [
    "HPoint",
    "Chart",
    "Hyperplane",
    "Line",
    "Slab",
    "ProjectiveMap",
    "AffineMap",
    "complement_basis",
    "cross_ratio",
    "harmonic_conjugate",
]
