"""Half-plane fans and sampled curves.

A :class:`HalfPlaneFan` is a family of half-planes sharing a boundary line
through an interior point of a body. Every curve sampler in this package
finds exactly one point per half-plane, so two curves sampled on the same
fan (or on an affine image of it) correspond point by point.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np
import pandas as pd

from apps.common.functions.files import write_csv, write_json
from apps.convex.errors import InsufficientSamples
from apps.convex.geometry.projective import AffineMap, _frozen, _unit, complement_basis
from apps.convex.geometry.roots import bisect_sign
from apps.convex.geometry.sampling import circle_frame

logger = logging.getLogger(__name__)

MIN_CURVE_SAMPLES = 6


@dataclass(frozen=True, eq=False)
class HalfPlaneFan:
    """Half-planes ``{origin + s * axis + t * side : t >= 0}``, one per row of ``sides``."""

    origin: np.ndarray
    axis: np.ndarray
    sides: np.ndarray

    def __post_init__(self):
        axis = _unit(np.asarray(self.axis, dtype=float))
        sides = np.atleast_2d(np.asarray(self.sides, dtype=float))
        sides = sides - np.outer(sides @ axis, axis)
        sides = sides / np.linalg.norm(sides, axis=1, keepdims=True)
        object.__setattr__(self, "origin", _frozen(self.origin, ndim=1))
        object.__setattr__(self, "axis", _frozen(axis))
        object.__setattr__(self, "sides", _frozen(sides))

    @classmethod
    def around(cls, origin, axis, count: int, seed: int = 0) -> "HalfPlaneFan":
        """``count`` half-planes evenly spread around ``axis``.

        In the plane there are only two half-planes.
        """

        axis = _unit(np.asarray(axis, dtype=float))
        basis = complement_basis(axis)
        if basis.shape[0] == 1:
            return cls(origin, axis, np.vstack([basis[0], -basis[0]]))
        if count < MIN_CURVE_SAMPLES:
            raise InsufficientSamples(f"need at least {MIN_CURVE_SAMPLES} samples, got {count}")
        return cls(origin, axis, circle_frame(basis, count, seed))

    @property
    def size(self) -> int:
        return len(self.sides)

    def reversed(self) -> "HalfPlaneFan":
        return HalfPlaneFan(self.origin, -self.axis, self.sides)

    def directions(self, angles) -> np.ndarray:
        angles = np.asarray(angles, dtype=float)
        return np.cos(angles)[:, None] * self.axis + np.sin(angles)[:, None] * self.sides

    def transformed(self, amap: AffineMap) -> "HalfPlaneFan":
        """The fan whose half-planes are the images of these under ``amap``."""

        a = amap.linear
        return HalfPlaneFan(amap(self.origin), a @ self.axis, self.sides @ a.T)

    def solve(self, body, func: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> Tuple[np.ndarray, np.ndarray]:
        """Boundary point per half-plane where ``func(points, normals)`` changes sign.

        Points are parametrized by the angle from ``axis`` in ``(0, pi)``; ``func``
        must be positive near the axis and negative near its opposite.
        Returns ``(points, angles)``.
        """

        origin = self.origin

        def boundary(angles):
            d = self.directions(angles)
            return body.ray_exit(origin, d)

        def sign(angles):
            p = boundary(angles)
            return func(p, body.normal(p))

        n = self.size
        angles = bisect_sign(sign, np.full(n, 1e-9), np.full(n, np.pi - 1e-9))
        return boundary(angles), angles


@dataclass(frozen=True, eq=False)
class CurveSample:
    """An ordered sample of a curve with per-point residuals and metadata."""

    points: np.ndarray
    residuals: np.ndarray
    meta: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        points = _frozen(self.points, ndim=2)
        residuals = _frozen(self.residuals, ndim=1)
        if len(residuals) != len(points):
            raise ValueError("one residual per point is required")
        if len(points) >= 2:
            gaps = np.linalg.norm(np.diff(points, axis=0), axis=1)
            if np.any(gaps == 0):
                raise InsufficientSamples("consecutive curve points coincide")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "residuals", residuals)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def max_residual(self) -> float:
        return float(np.max(self.residuals)) if len(self.residuals) else 0.0

    def transformed(self, amap: AffineMap) -> "CurveSample":
        return CurveSample(amap(self.points), self.residuals, dict(self.meta))

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.points, columns=[f"x{i + 1}" for i in range(self.dim)])
        frame["residual"] = self.residuals
        return frame

    def export(self, path, extra: Optional[Dict[str, Any]] = None) -> Tuple[str, str]:
        """Write ``path`` as CSV and ``<path>.json`` with the metadata."""

        sidecar = os.fspath(path) + ".json"
        write_csv(path, self.to_frame())
        meta = dict(self.meta)
        meta.update({"count": len(self), "max_residual": self.max_residual})
        if extra:
            meta.update(extra)
        write_json(sidecar, meta)
        logger.info("wrote %s points to %s", len(self), path)
        return os.fspath(path), sidecar


__all__ = ["HalfPlaneFan", "CurveSample", "MIN_CURVE_SAMPLES"]
