"""Kind-agnostic operations on convex bodies."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Tuple

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from apps.convex.conf import get_sampling, get_tolerances
from apps.convex.errors import DegenerateChord, EndpointNotOnBoundary, LineMissesBody, PlaneMissesBody
from apps.convex.geometry.fitting import fit_hyperplane
from apps.convex.geometry.projective import Hyperplane, Line, complement_basis
from apps.convex.geometry.sampling import circle_frame, sphere_directions

from .base import ConvexBody

logger = logging.getLogger(__name__)


def support_point(body: ConvexBody, u) -> np.ndarray:
    """Point of ``body`` maximizing ``<x, u>`` for a unit vector ``u``."""

    u = np.asarray(u, dtype=float)
    if abs(np.linalg.norm(u) - 1.0) > 1e-9:
        raise ValueError("support direction must be a unit vector")
    return body.support_point(u)


@dataclass(frozen=True, eq=False)
class Chord:
    """A segment ``[a, b]`` with both endpoints on the boundary of a body."""

    a: np.ndarray
    b: np.ndarray

    @classmethod
    def on(cls, body: ConvexBody, a, b, tol: Optional[float] = None) -> "Chord":
        tol = get_tolerances().boundary if tol is None else tol
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        if np.linalg.norm(b - a) <= 1e-12 * body.diameter:
            raise DegenerateChord("chord endpoints coincide")
        residual = float(np.max(body.boundary_residual(np.vstack([a, b]))))
        if residual > tol:
            raise EndpointNotOnBoundary(f"chord endpoint off the boundary by {residual:.3e}")
        return cls(a, b)

    @property
    def midpoint(self) -> np.ndarray:
        return 0.5 * (self.a + self.b)

    @property
    def length(self) -> float:
        return float(np.linalg.norm(self.b - self.a))

    @property
    def direction(self) -> np.ndarray:
        return (self.b - self.a) / self.length

    def line(self) -> Line:
        return Line.through(self.a, self.b)


def interior_point_on_line(body: ConvexBody, line: Line) -> Tuple[float, float]:
    """Parameter minimizing the gauge along ``line`` and the minimal gauge."""

    t0 = float(line.parameter(body.center))
    span = 1.5 * body.diameter
    res = minimize_scalar(
        lambda t: float(body.gauge(line.at(t))),
        bounds=(t0 - span, t0 + span),
        method="bounded",
        options={"xatol": 1e-12 * max(1.0, span)},
    )
    return float(res.x), float(res.fun)


def line_boundary_points(body: ConvexBody, line: Line) -> Tuple[np.ndarray, np.ndarray]:
    """The two boundary points of ``body`` on ``line``, ordered along the line.

    Raises ``LineMissesBody`` when the line does not enter the interior.
    """

    params = body.line_parameters(line.point, line.direction)
    if params is None:
        raise LineMissesBody("line does not meet the interior of the body")
    if params is NotImplemented:
        t, g = interior_point_on_line(body, line)
        if g >= 1.0:
            raise LineMissesBody(f"line does not meet the interior of the body (minimal gauge {g:.6g})")
        q = line.at(t)
        d = line.direction
        params = np.array([
            t - float(body.exit_parameter(q, -d)),
            t + float(body.exit_parameter(q, d)),
        ])
    a, b = line.at(params[0]), line.at(params[1])
    logger.debug("line boundary points: residuals %.2e %.2e", *body.boundary_residual(np.vstack([a, b])))
    return a, b


def symmetry_residual(body: ConvexBody, center, count: Optional[int] = None, seed: int = 0) -> float:
    """``max |h(u) - h(-u)|`` of ``body - center`` over sampled ``u``, per unit diameter."""

    count = get_sampling().directions if count is None else count
    u = sphere_directions(body.dim, count, seed)
    center = np.asarray(center, dtype=float)
    h_plus = body.support(u) - u @ center
    h_minus = body.support(-u) + u @ center
    return float(np.max(np.abs(h_plus - h_minus)) / body.diameter)


def is_o_symmetric(body: ConvexBody, center, tol: Optional[float] = None, count: Optional[int] = None) -> bool:
    tol = get_tolerances().symmetry if tol is None else tol
    return symmetry_residual(body, center, count) <= tol


class OracleCheck(NamedTuple):
    name: str
    residual: float
    tolerance: float
    passed: bool


def oracle_checks(body: ConvexBody, count: int = 512, seed: int = 0) -> List[OracleCheck]:
    """Consistency gates of the support and gauge oracles."""

    tol = get_tolerances()
    rng = np.random.default_rng(seed)
    diam = body.diameter
    u = sphere_directions(body.dim, count, seed)
    h = body.support(u)

    lam = rng.uniform(0.25, 4.0, count)
    homogeneity = np.max(np.abs(body.support(u * lam[:, None]) - lam * h)) / diam

    v = sphere_directions(body.dim, count, seed + 1)
    subadditivity = max(0.0, float(np.max(body.support(u + v) - h - body.support(v))) / diam)

    sp = body.support_point(u)
    containment = float(np.max(body.boundary_residual(sp)))
    attained = float(np.max(np.abs(np.einsum("ij,ij->i", sp, u) - h)) / diam)

    dense = body.boundary_points(10_000, seed=seed + 2)
    overshoot = max(0.0, float(np.max(np.max(u @ dense.T, axis=1) - h)) / diam)

    radial = float(np.max(body.boundary_residual(body.boundary_points(count, seed=seed + 3))))

    rows = [
        ("homogeneity", homogeneity, 1e-9),
        ("subadditivity", subadditivity, 1e-9),
        ("support_point_on_boundary", containment, tol.boundary),
        ("support_value_attained", attained, 1e-9),
        ("dense_sample_bound", overshoot, 1e-9),
        ("radial_point_on_boundary", radial, tol.boundary),
    ]
    return [OracleCheck(name, float(r), t, bool(r <= t)) for name, r, t in rows]


def midpoint_hyperplane_residual(body: ConvexBody, direction, count: int = 48, seed: int = 0) -> float:
    """Plane-fit residual of midpoints of chords parallel to ``direction``.

    Zero (to rounding) for every direction when ``body`` is an ellipsoid.
    """

    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    frame = circle_frame(complement_basis(d), count, seed)
    reach = np.atleast_1d(body.exit_parameter(body.center, frame))
    midpoints = []
    for frac in (0.2, 0.5, 0.8):
        for w, r in zip(frame, reach):
            a, b = line_boundary_points(body, Line(body.center + frac * r * w, d))
            midpoints.append(0.5 * (a + b))
    return fit_hyperplane(np.array(midpoints)).rms_residual


def flat_interior_point(body: ConvexBody, flat) -> np.ndarray:
    """A point of ``flat`` (hyperplane or chart) in the interior of the body.

    The projection of the body's center is used when it is interior; otherwise
    the gauge is minimized over the flat. Raises ``PlaneMissesBody`` when the
    flat does not meet the interior.
    """

    chart = flat.chart(origin=body.center) if isinstance(flat, Hyperplane) else flat.recentered(body.center)
    if float(body.gauge(chart.origin)) < 1.0 - 1e-9:
        return chart.origin
    res = minimize(
        lambda y: float(body.gauge(chart.to_global(y))),
        np.zeros(chart.dim),
        method="Nelder-Mead",
        options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000},
    )
    if res.fun >= 1.0:
        raise PlaneMissesBody(f"section does not meet the interior of the body (minimal gauge {res.fun:.6g})")
    return chart.to_global(res.x)


__all__ = [
    "Chord",
    "OracleCheck",
    "flat_interior_point",
    "interior_point_on_line",
    "is_o_symmetric",
    "line_boundary_points",
    "midpoint_hyperplane_residual",
    "oracle_checks",
    "support_point",
    "symmetry_residual",
]
