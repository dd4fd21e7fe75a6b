"""Poles and polars of convex bodies.

``o`` is a pole of ``L`` when the harmonic conjugates of ``o`` with respect to
the chord endpoints of every line through ``o`` lie on one hyperplane, the
polar. Interior poles are projective centres of symmetry; for exterior poles
the polar also carries the graze from ``o``.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np

from apps.convex.bodies.base import ConvexBody
from apps.convex.conf import Tolerances, get_sampling, get_tolerances
from apps.convex.cones.curves import HalfPlaneFan
from apps.convex.cones.support import apex_fan, graze, section_curve, shadow_boundary
from apps.convex.errors import (
    DegenerateLines,
    DegenerateQuadruple,
    GeometryError,
    NonCollinear,
    PointOnBoundary,
)
from apps.convex.geometry.projective import HPoint, Hyperplane, Line, cross_ratio, harmonic_conjugate
from apps.convex.geometry.sampling import hausdorff, sphere_directions

from .report import CheckReport, CheckRun, Measure, StageRole

logger = logging.getLogger(__name__)

# Interior anchor points for lines through exterior and ideal poles, as a
# fraction of the way from the center to the boundary
_ANCHOR = 0.6


class PoleKind(str, enum.Enum):
    CENTRE = "projective centre"
    HYPERPLANE = "projective hyperplane of symmetry"
    NOT_A_POLE = "not a pole"


@dataclass(frozen=True, eq=False)
class PoleResult:
    """Fitted polar of ``pole`` and how well it explains the sampled chords.

    ``fit_residual`` is the largest ``|<c, P>|`` over unit homogeneous vectors
    of the harmonic conjugates ``P`` and the unit polar coefficients ``c``;
    ``cross_ratio_residual`` re-checks ``[A, B; o, polar ∩ AB] = -1`` on every
    line. ``graze_agreement`` compares the polar section with the graze (the
    shadow boundary for ideal poles); it is only set for non-interior poles
    of smooth bodies.
    """

    pole: HPoint
    polar: Hyperplane
    residual: float
    fit_residual: float
    cross_ratio_residual: float
    classification: PoleKind
    lines: int
    tolerance: float
    interior: bool
    graze_agreement: Optional[float] = None

    @property
    def is_pole(self) -> bool:
        return self.classification is not PoleKind.NOT_A_POLE

    def as_dict(self) -> Dict[str, Any]:
        return {
            "pole": list(self.pole.coords),
            "polar": [float(v) for v in self.polar.coefficients()],
            "polar_at_infinity": self.polar.infinite,
            "classification": self.classification.value,
            "residual": self.residual,
            "fit_residual": self.fit_residual,
            "cross_ratio_residual": self.cross_ratio_residual,
            "graze_agreement": self.graze_agreement,
            "lines": self.lines,
            "tolerance": self.tolerance,
        }


def _as_hpoint(o: Union[HPoint, np.ndarray, list, tuple]) -> HPoint:
    return o if isinstance(o, HPoint) else HPoint.from_affine(o)


def _pole_lines(body: ConvexBody, pole: HPoint, count: int, seed: int, margin: float):
    """Sampled lines through ``pole`` and their boundary points ``A``, ``B``.

    Returns ``(lines, A, B, interior)``.
    """

    dirs = sphere_directions(body.dim, count, seed)
    if pole.is_at_infinity():
        e = pole.direction()
        anchors = body.center + _ANCHOR * (body.radial_point(dirs) - body.center)
        directions = np.broadcast_to(e, anchors.shape)
        interior = False
    else:
        o = pole.affine()
        g = float(body.gauge(o))
        if abs(g - 1.0) <= margin:
            raise PointOnBoundary(f"pole lies on the boundary (gauge {g:.9g})")
        interior = g < 1.0
        if interior:
            anchors = np.broadcast_to(o, dirs.shape)
            directions = dirs
        else:
            anchors = body.center + _ANCHOR * (body.radial_point(dirs) - body.center)
            directions = anchors - o
            directions = directions / np.linalg.norm(directions, axis=1, keepdims=True)
    ahead = np.atleast_1d(body.exit_parameter(anchors, directions))
    behind = np.atleast_1d(body.exit_parameter(anchors, -directions))
    a = anchors - behind[:, None] * directions
    b = anchors + ahead[:, None] * directions
    lines = [Line(p, d) for p, d in zip(anchors, directions)]
    return lines, a, b, interior


def _fit_polar(conjugates: np.ndarray) -> Tuple[Hyperplane, float]:
    """Hyperplane through unit homogeneous points, allowing the one at infinity."""

    _, s, vt = np.linalg.svd(conjugates, full_matrices=True)
    rank = conjugates.shape[1] - 1
    if len(s) < rank or s[rank - 1] <= 1e-9 * s[0]:
        raise DegenerateLines("harmonic conjugates do not span a hyperplane")
    c = vt[-1]
    return Hyperplane.from_coefficients(c), float(np.max(np.abs(conjugates @ c)))


def _cross_ratio_residual(polar: Hyperplane, pole: HPoint, lines, a, b) -> float:
    worst = 0.0
    for line, pa, pb in zip(lines, a, b):
        meet = polar.intersect_line(line)
        try:
            cr = cross_ratio(HPoint.from_affine(pa), HPoint.from_affine(pb), pole, meet)
        except (DegenerateQuadruple, NonCollinear):
            return float("inf")
        worst = max(worst, abs(cr + 1.0))
    return worst


def polar_matched_points(body: ConvexBody, fan: HalfPlaneFan, polar: Hyperplane, seed: int) -> np.ndarray:
    """Boundary points of ``polar ∩ body`` on the half-planes of ``fan``.

    Falls back to a plain section sample when the fan axis meets the polar
    outside the body.
    """

    n = polar.normal
    along = float(n @ fan.axis)
    if abs(along) <= 1e-12:
        raise GeometryError("polar contains the axis of the graze fan")
    q0 = fan.origin + (polar.offset - float(n @ fan.origin)) / along * fan.axis
    if float(body.gauge(q0)) >= 1.0 - 1e-9:
        return section_curve(body, polar, fan.size, seed=seed).points
    v = fan.sides - np.outer(fan.sides @ n / along, fan.axis)
    return body.ray_exit(q0, v)


def polar_of(
    body: ConvexBody,
    o,
    count: Optional[int] = None,
    seed: Optional[int] = None,
    tolerances: Optional[Tolerances] = None,
) -> PoleResult:
    """Fit the polar of ``o`` (affine point or ``HPoint``) with respect to ``body``.

    Raises ``PointOnBoundary`` when ``o`` is within the margin gate of the
    boundary and ``DegenerateLines`` when the harmonic conjugates do not
    determine a hyperplane.
    """

    sampling = get_sampling()
    count = sampling.curve_samples if count is None else count
    seed = sampling.seed if seed is None else seed
    tol = get_tolerances() if tolerances is None else tolerances
    pole = _as_hpoint(o)
    if pole.dim != body.dim:
        raise GeometryError(f"pole has dimension {pole.dim}, body has dimension {body.dim}")

    lines, a, b, interior = _pole_lines(body, pole, count, seed, tol.margin)
    conjugates = np.vstack([
        harmonic_conjugate(HPoint.from_affine(pa), HPoint.from_affine(pb), pole).normalized()
        for pa, pb in zip(a, b)
    ])
    polar, fit_residual = _fit_polar(conjugates)
    cr_residual = _cross_ratio_residual(polar, pole, lines, a, b)
    residual = max(fit_residual, cr_residual)

    if residual > tol.pole:
        kind = PoleKind.NOT_A_POLE
    elif interior:
        kind = PoleKind.CENTRE
    else:
        kind = PoleKind.HYPERPLANE

    agreement = None
    if kind is PoleKind.HYPERPLANE and body.smooth and not polar.infinite:
        try:
            if pole.is_at_infinity():
                e = pole.direction()
                fan = HalfPlaneFan.around(body.center, e, count, seed)
                contact = shadow_boundary(body, e, count, seed).points
            else:
                apex = pole.affine()
                fan = apex_fan(body, apex, count, seed)
                contact = graze(body, apex, count, fan=fan).points
            matched = polar_matched_points(body, fan, polar, seed)
            agreement = hausdorff(contact, matched) / body.diameter
        except GeometryError as exc:
            logger.info("graze agreement not computed: %s", exc)
            agreement = float("inf")

    logger.debug("polar of %r: %s, residual %.3e", pole, kind.value, residual)
    return PoleResult(
        pole=pole,
        polar=polar,
        residual=residual,
        fit_residual=fit_residual,
        cross_ratio_residual=cr_residual,
        classification=kind,
        lines=len(lines),
        tolerance=tol.pole,
        interior=interior,
        graze_agreement=agreement,
    )


def check_pole(
    body: ConvexBody,
    pole,
    lines: Optional[int] = None,
    seed: Optional[int] = None,
    tolerances: Optional[Tolerances] = None,
) -> CheckReport:
    """Report whether ``pole`` is a pole of ``body`` and whether its polar carries the graze.

    For a pole at infinity the shadow boundary plays the part of the graze.
    """

    sampling = get_sampling()
    lines = sampling.curve_samples if lines is None else lines
    seed = sampling.seed if seed is None else seed
    tol = get_tolerances() if tolerances is None else tolerances
    point = _as_hpoint(pole)
    run = CheckRun("pole", {"body": body}, tol, seed, {"pole": list(point.coords)})
    run.samples["lines"] = lines

    result = polar_of(body, point, lines, seed, tol)
    run.stage("pole", StageRole.HYPOTHESIS, result.residual, tol.pole, witness=result.as_dict())
    if result.polar.infinite:
        run.note("polar is the hyperplane at infinity: the pole is a centre of symmetry")
    if result.graze_agreement is None:
        if not body.smooth:
            reason = f"{body.kind} bodies have no graze"
        elif result.interior:
            reason = "interior pole"
        elif not result.is_pole:
            reason = "no polar to compare with the graze"
        else:
            reason = "polar at infinity"
        run.skip("graze_in_polar", StageRole.CLAIM, reason)
    else:
        run.evaluate(
            "graze_in_polar",
            StageRole.CLAIM,
            tol.hausdorff,
            lambda: Measure(result.graze_agreement, {"relative_hausdorff": result.graze_agreement}),
        )
    return run.finish()


__all__ = ["PoleKind", "PoleResult", "check_pole", "polar_matched_points", "polar_of"]
