"""Planar sections of convex bodies as two-dimensional oracles.

A :class:`PlanarSection` works in the local coordinates of a 2-dimensional
chart whose origin is an interior point of the section. Boundary points are
exact ray exits of the host body; support points of sections of smooth
hosts are polished by bisection on the sign of the boundary normal, so
they are accurate to rounding rather than to the square root of it.
"""

from __future__ import annotations

import logging
from functools import cached_property
from typing import Optional, Tuple, Union

import numpy as np

from apps.convex.bodies.base import ConvexBody, _out, as_rows
from apps.convex.bodies.ops import Chord, flat_interior_point
from apps.convex.errors import GeometryError, NonSmoothBody
from apps.convex.geometry.projective import Chart, Hyperplane
from apps.convex.geometry.roots import bisect_sign, golden_minimize
from apps.convex.geometry.sampling import sphere_directions

logger = logging.getLogger(__name__)

_GRID = 256
_DIAMETER_DIRECTIONS = 256


def _cross(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    return u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0]


def perpendicular(v) -> np.ndarray:
    """Counter-clockwise rotation by 90 degrees, row-wise."""

    v = np.asarray(v, dtype=float)
    return np.stack([-v[..., 1], v[..., 0]], axis=-1)


class PlanarSection:
    """The convex figure ``plane ∩ body`` in local chart coordinates."""

    def __init__(self, body: ConvexBody, chart: Chart, plane: Optional[Hyperplane] = None):
        if chart.dim != 2:
            raise GeometryError(f"planar sections need a 2-dimensional chart, got dimension {chart.dim}")
        if chart.ambient_dim != body.dim:
            raise GeometryError("chart and body dimensions differ")
        self.body = body
        self.chart = chart
        self.plane = plane
        self._full = body.dim == 2

    @classmethod
    def of_body(cls, body: ConvexBody) -> "PlanarSection":
        """A two-dimensional body viewed as its own section."""

        if body.dim != 2:
            raise GeometryError(f"expected a planar body, got dimension {body.dim}")
        return cls(body, Chart(body.center, np.eye(2)))

    @property
    def origin(self) -> np.ndarray:
        return self.chart.origin

    @property
    def smooth(self) -> bool:
        return bool(self.body.smooth)

    def to_global(self, y) -> np.ndarray:
        return self.chart.to_global(y)

    def to_local(self, x) -> np.ndarray:
        return self.chart.to_local(x)

    def centered(self, center) -> "PlanarSection":
        """The same figure with the chart origin moved to local point ``center``."""

        return PlanarSection(self.body, self.chart.recentered(self.to_global(center)), self.plane)

    # -- boundary ----------------------------------------------------------

    def boundary_at(self, angles) -> np.ndarray:
        """Boundary points on the rays from the origin at the given angles."""

        angles = np.atleast_1d(np.asarray(angles, dtype=float))
        local = np.column_stack([np.cos(angles), np.sin(angles)])
        t = np.atleast_1d(self.body.exit_parameter(self.origin, local @ self.chart.basis))
        return t[:, None] * local

    def boundary(self, count: int) -> np.ndarray:
        return self.boundary_at(2.0 * np.pi * np.arange(count) / count)

    def boundary_residual(self, y) -> np.ndarray:
        return self.body.boundary_residual(self.to_global(y))

    def norm(self, y):
        """Gauge of the figure about the chart origin."""

        y, single = as_rows(y, 2)
        r = np.linalg.norm(y, axis=1)
        out = np.zeros(len(y))
        nz = r > 0
        if np.any(nz):
            t = np.atleast_1d(self.body.exit_parameter(self.origin, (y[nz] / r[nz, None]) @ self.chart.basis))
            out[nz] = r[nz] / t
        return _out(out, single)

    def normal(self, y):
        """Outer unit normal of the figure at boundary point(s) ``y``."""

        if not self.smooth:
            raise NonSmoothBody(f"sections of {self.body.kind} bodies have no unique boundary normal")
        y, single = as_rows(y, 2)
        g = np.atleast_2d(self.body.normal(self.to_global(y))) @ self.chart.basis.T
        return _out(g / np.linalg.norm(g, axis=1, keepdims=True), single)

    # -- support -----------------------------------------------------------

    @cached_property
    def _grid(self) -> Tuple[np.ndarray, np.ndarray]:
        angles = 2.0 * np.pi * np.arange(_GRID) / _GRID
        return angles, self.boundary_at(angles)

    def support_point(self, u):
        u, single = as_rows(u, 2)
        if self._full:
            return _out(self.to_local(self.body.support_point(u @ self.chart.basis)), single)
        angles, points = self._grid
        k = np.argmax(u @ points.T, axis=1)
        step = 2.0 * np.pi / _GRID
        lo, hi = angles[k] - step, angles[k] + step
        if self.smooth:
            theta = bisect_sign(lambda th: _cross(u, self.normal(self.boundary_at(th))), lo, hi)
        else:
            theta, _ = golden_minimize(
                lambda th: -np.einsum("ij,ij->i", u, self.boundary_at(th)), lo, hi, iterations=120,
            )
        return _out(self.boundary_at(theta), single)

    def support(self, u):
        u, single = as_rows(u, 2)
        return _out(np.einsum("ij,ij->i", u, np.atleast_2d(self.support_point(u))), single)

    @cached_property
    def diameter(self) -> float:
        u = sphere_directions(2, _DIAMETER_DIRECTIONS, seed=1)
        return float(np.max(self.support(u) + self.support(-u)))

    def __repr__(self) -> str:
        return f"<PlanarSection of {self.body!r} at {np.round(self.origin, 12).tolist()}>"


def section(body: ConvexBody, plane: Union[Hyperplane, Chart]) -> PlanarSection:
    """Restrict ``body`` to a plane meeting its interior.

    ``plane`` is a hyperplane of ``R^3`` or a 2-dimensional chart in any
    dimension. Raises ``PlaneMissesBody`` when the plane misses the interior.
    """

    if isinstance(plane, Hyperplane):
        if body.dim != 3:
            raise GeometryError("hyperplane sections are planar only in dimension 3")
        origin = flat_interior_point(body, plane)
        sec = PlanarSection(body, plane.chart(origin=origin), plane)
    else:
        origin = flat_interior_point(body, plane)
        sec = PlanarSection(body, plane.recentered(origin))
    logger.debug("section of %r through %s", body, np.round(origin, 9).tolist())
    return sec


def diameter_through_center(sec: PlanarSection, angle: float) -> Chord:
    """Chord through the chart origin at ``angle``, from ``angle + pi`` to ``angle``."""

    a, b = sec.boundary_at([angle + np.pi, angle])
    return Chord(a, b)


def birkhoff_pair(sec: PlanarSection, direction) -> Tuple[np.ndarray, np.ndarray]:
    """Boundary point ``x`` in ``direction`` and a tangent ``y`` at it, so ``x`` is normal to ``y``."""

    d = np.asarray(direction, dtype=float)
    x = sec.boundary_at([np.arctan2(d[1], d[0])])[0]
    return x, perpendicular(sec.normal(x))


__all__ = [
    "PlanarSection",
    "birkhoff_pair",
    "diameter_through_center",
    "perpendicular",
    "section",
]
