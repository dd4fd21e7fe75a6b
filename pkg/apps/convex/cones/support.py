"""Support cones, grazes, shadow boundaries and cone intersections."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from apps.convex.bodies.base import ConvexBody
from apps.convex.bodies.ops import flat_interior_point, interior_point_on_line
from apps.convex.conf import get_sampling, get_tolerances
from apps.convex.errors import (
    ApexInsideBody,
    CoincidentApexes,
    LineMeetsBody,
    LineMissesBody,
    NonSmoothBody,
)
from apps.convex.geometry.fitting import fit_hyperplane
from apps.convex.geometry.projective import Hyperplane, Line, _unit
from apps.convex.geometry.roots import golden_minimize
from apps.convex.geometry.sampling import circle_frame, sphere_directions

from .curves import CurveSample, HalfPlaneFan

logger = logging.getLogger(__name__)


def _body_label(body: ConvexBody) -> str:
    return body.name or body.kind


def _require_smooth(body: ConvexBody, operation: str):
    if not body.smooth:
        raise NonSmoothBody(f"{operation} needs a smooth strictly convex body, got a {body.kind}")


def _require_exterior(body: ConvexBody, apex: np.ndarray):
    g = float(body.gauge(apex))
    if g <= 1.0 + 1e-9:
        raise ApexInsideBody(f"apex must lie outside the body (gauge {g:.6g})")


def tangency_residual(body: ConvexBody, apex, points) -> np.ndarray:
    """``|<apex - p, nu(p)>| / |apex - p|`` for boundary points ``p``."""

    points = np.atleast_2d(points)
    rel = np.asarray(apex, dtype=float) - points
    return np.abs(np.einsum("ij,ij->i", rel, body.normal(points))) / np.linalg.norm(rel, axis=1)


def apex_fan(body: ConvexBody, apex, count: Optional[int] = None, seed: Optional[int] = None) -> HalfPlaneFan:
    """Fan of half-planes bounded by the line through the body's center and ``apex``."""

    sampling = get_sampling()
    count = sampling.curve_samples if count is None else count
    seed = sampling.seed if seed is None else seed
    apex = np.asarray(apex, dtype=float)
    return HalfPlaneFan.around(body.center, apex - body.center, count, seed)


def _tangent_points(body: ConvexBody, apex: np.ndarray, fan: HalfPlaneFan) -> np.ndarray:
    points, _ = fan.solve(body, lambda p, nu: np.einsum("ij,ij->i", apex - p, nu))
    return points


def graze(
    body: ConvexBody,
    apex,
    count: Optional[int] = None,
    fan: Optional[HalfPlaneFan] = None,
) -> CurveSample:
    """Contact curve of the support cone from an exterior ``apex``.

    One point per half-plane of ``fan`` (default: the fan around the line
    through the body's center and the apex), ordered by angle.
    """

    _require_smooth(body, "graze")
    apex = np.asarray(apex, dtype=float)
    _require_exterior(body, apex)
    fan = apex_fan(body, apex, count) if fan is None else fan
    points = _tangent_points(body, apex, fan)
    residuals = np.maximum(tangency_residual(body, apex, points), body.boundary_residual(points))
    logger.debug("graze: %s points, max residual %.3e", len(points), float(np.max(residuals)))
    return CurveSample(points, residuals, {
        "operation": "graze",
        "body": _body_label(body),
        "apex": [float(v) for v in apex],
        "samples": fan.size,
        "seed": get_sampling().seed,
    })


@dataclass(frozen=True, eq=False)
class SupportCone:
    """The cone from ``apex`` circumscribed about ``body``, with its contact curve."""

    apex: np.ndarray
    body: ConvexBody
    contact: CurveSample

    @property
    def dim(self) -> int:
        return self.apex.size

    @property
    def generators(self) -> np.ndarray:
        g = self.contact.points - self.apex
        return g / np.linalg.norm(g, axis=1, keepdims=True)

    def contains_direction(self, direction) -> bool:
        """Whether the ray from the apex along ``direction`` enters the body's interior."""

        w = _unit(np.asarray(direction, dtype=float))
        return bool(ray_gauge_minimum(self.body, self.apex, w[None, :])[0] < 1.0)


def support_cone(
    body: ConvexBody,
    apex,
    count: Optional[int] = None,
    fan: Optional[HalfPlaneFan] = None,
) -> SupportCone:
    apex = np.asarray(apex, dtype=float)
    return SupportCone(apex, body, graze(body, apex, count, fan))


def shadow_boundary(body: ConvexBody, direction, count: Optional[int] = None, seed: Optional[int] = None) -> CurveSample:
    """Points of the boundary whose outer normal is orthogonal to ``direction``."""

    _require_smooth(body, "shadow_boundary")
    sampling = get_sampling()
    count = sampling.curve_samples if count is None else count
    seed = sampling.seed if seed is None else seed
    u = _unit(np.asarray(direction, dtype=float))
    fan = HalfPlaneFan.around(body.center, u, count, seed)
    points, _ = fan.solve(body, lambda p, nu: nu @ u)
    residuals = np.maximum(np.abs(body.normal(points) @ u), body.boundary_residual(points))
    return CurveSample(points, residuals, {
        "operation": "shadow",
        "body": _body_label(body),
        "direction": [float(v) for v in u],
        "samples": fan.size,
        "seed": seed,
    })


def ray_gauge_minimum(body: ConvexBody, apex, directions) -> np.ndarray:
    """Minimum of the gauge along each ray ``apex + t * w``, ``t >= 0``."""

    w = np.atleast_2d(np.asarray(directions, dtype=float))
    w = w / np.linalg.norm(w, axis=1, keepdims=True)
    apex = np.asarray(apex, dtype=float)
    reach = np.linalg.norm(apex - body.center) + 2.0 * body.diameter
    _, values = golden_minimize(
        lambda t: body.gauge(apex + t[:, None] * w),
        np.zeros(len(w)),
        np.full(len(w), reach),
        iterations=120,
    )
    return values


def cone_surface_residual(body: ConvexBody, apex, points) -> np.ndarray:
    """Signed membership residual of ``points`` for the support cone from ``apex``.

    Zero on the cone surface, negative inside, positive outside.
    """

    points = np.atleast_2d(np.asarray(points, dtype=float))
    return ray_gauge_minimum(body, apex, points - np.asarray(apex, dtype=float)) - 1.0


def _meet_generators(x, px, y, py) -> np.ndarray:
    """Intersection of the lines ``x + s (px - x)`` and ``y + t (py - y)``, row-wise.

    Solved in the least-squares sense since both lines lie in one 2-plane.
    """

    dx = px - x
    dy = py - y
    a = np.stack([dx, -dy], axis=2)
    rhs = (y - x)[:, :, None]
    ata = np.einsum("kij,kil->kjl", a, a)
    atb = np.einsum("kij,kil->kjl", a, rhs)
    st = np.linalg.solve(ata, atb)[..., 0]
    return x + st[:, :1] * dx


def cone_intersection(
    body: ConvexBody,
    x,
    y,
    count: Optional[int] = None,
    seed: Optional[int] = None,
) -> CurveSample:
    """Sample ``S(body, x)`` meet ``S(body, y)`` on matched half-planes through ``l(x, y)``.

    The open segment between the apexes must cross the interior of the body.
    """

    _require_smooth(body, "cone_intersection")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.linalg.norm(x - y) <= 1e-12 * max(1.0, body.diameter):
        raise CoincidentApexes("apexes coincide")
    _require_exterior(body, x)
    _require_exterior(body, y)
    sampling = get_sampling()
    count = sampling.curve_samples if count is None else count
    seed = sampling.seed if seed is None else seed

    line = Line.through(x, y)
    t, g = interior_point_on_line(body, line)
    if g >= 1.0:
        raise LineMissesBody("the line through the apexes misses the body")
    length = float(np.linalg.norm(y - x))
    if not 0.0 < t < length:
        raise LineMeetsBody("the line through the apexes meets the body outside the segment between them")
    origin = line.at(t)

    fan_y = HalfPlaneFan.around(origin, y - x, count, seed)
    fan_x = fan_y.reversed()
    px = _tangent_points(body, x, fan_x)
    py = _tangent_points(body, y, fan_y)
    k = len(px)
    points = _meet_generators(np.broadcast_to(x, (k, x.size)), px, np.broadcast_to(y, (k, y.size)), py)

    residuals = np.max(np.abs(np.vstack([
        cone_surface_residual(body, x, points),
        cone_surface_residual(body, y, points),
        tangency_residual(body, x, px),
        tangency_residual(body, y, py),
    ])), axis=0)
    logger.debug("cone intersection: %s points, max residual %.3e", k, float(np.max(residuals)))
    return CurveSample(points, residuals, {
        "operation": "omega",
        "body": _body_label(body),
        "apex": [float(v) for v in x],
        "second_apex": [float(v) for v in y],
        "samples": k,
        "seed": seed,
    })


def section_curve(
    body: ConvexBody,
    plane: Hyperplane,
    count: Optional[int] = None,
    origin=None,
    seed: Optional[int] = None,
) -> CurveSample:
    """Boundary of a hyperplane section sampled by rays from an interior point."""

    sampling = get_sampling()
    count = sampling.curve_samples if count is None else count
    seed = sampling.seed if seed is None else seed
    origin = flat_interior_point(body, plane) if origin is None else np.asarray(origin, dtype=float)
    chart = plane.chart(origin=origin)
    directions = circle_frame(chart.basis, count, seed)
    points = body.ray_exit(origin, directions)
    return CurveSample(points, body.boundary_residual(points), {
        "operation": "section",
        "body": _body_label(body),
        "normal": [float(v) for v in plane.normal],
        "offset": plane.offset,
        "samples": count,
        "seed": seed,
    })


def shadow_planarity(
    body: ConvexBody,
    count: Optional[int] = None,
    directions: int = 16,
    seed: Optional[int] = None,
) -> Dict[str, float]:
    """Plane-fit residuals of shadow boundaries over sampled directions."""

    seed = get_sampling().seed if seed is None else seed
    rms = [
        fit_hyperplane(shadow_boundary(body, u, count, seed).points).rms_residual
        for u in sphere_directions(body.dim, directions, seed)
    ]
    return {"max_rms": float(np.max(rms)), "mean_rms": float(np.mean(rms)), "directions": directions}


def graze_planarity(body: ConvexBody, apex, count: Optional[int] = None) -> float:
    return fit_hyperplane(graze(body, apex, count).points).rms_residual


def is_planar(sample: CurveSample, tol: Optional[float] = None) -> bool:
    tol = get_tolerances().planarity if tol is None else tol
    return fit_hyperplane(sample.points).rms_residual <= tol


__all__ = [
    "SupportCone",
    "apex_fan",
    "cone_intersection",
    "cone_surface_residual",
    "graze",
    "graze_planarity",
    "is_planar",
    "ray_gauge_minimum",
    "section_curve",
    "shadow_boundary",
    "shadow_planarity",
    "support_cone",
    "tangency_residual",
]
