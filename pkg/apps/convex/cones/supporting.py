"""Common supporting planes through a line and their contact chord."""

from __future__ import annotations

import logging
from typing import NamedTuple, Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from apps.convex.bodies.base import ConvexBody
from apps.convex.bodies.ops import interior_point_on_line
from apps.convex.errors import GeometryError, LineMeetsBody
from apps.convex.geometry.fitting import fit_hyperplane
from apps.convex.geometry.projective import Hyperplane, Line, complement_basis

from .support import cone_intersection

logger = logging.getLogger(__name__)

_SCAN = 720


class SupportingPlanes(NamedTuple):
    planes: Tuple[Hyperplane, Hyperplane]
    contacts: Tuple[np.ndarray, np.ndarray]


def common_supporting_planes(body: ConvexBody, x1, x2) -> SupportingPlanes:
    """The two supporting hyperplanes of a 3-body containing the line ``l(x1, x2)``.

    The planes are found by rotating around the line and locating the sign
    changes of ``h(n) - <n, x1>``.
    """

    if body.dim != 3:
        raise GeometryError("common supporting planes need dimension 3")
    line = Line.through(x1, x2)
    _, g = interior_point_on_line(body, line)
    if g < 1.0:
        raise LineMeetsBody("the line through the apexes meets the body")
    x1 = np.asarray(x1, dtype=float)
    b1, b2 = complement_basis(line.direction)

    def normal(phi):
        return np.cos(phi) * b1 + np.sin(phi) * b2

    def gap(phi):
        n = normal(phi)
        return float(body.support(n) - n @ x1)

    grid = np.linspace(0.0, 2.0 * np.pi, _SCAN + 1)
    values = np.array([gap(phi) for phi in grid])
    roots = [
        brentq(gap, grid[i], grid[i + 1], xtol=1e-15)
        for i in range(_SCAN)
        if values[i] == 0.0 or values[i] * values[i + 1] < 0
    ]
    if len(roots) != 2:
        raise GeometryError(f"expected two supporting planes through the line, found {len(roots)}")
    planes = tuple(Hyperplane.through(x1, normal(phi)) for phi in roots)
    contacts = tuple(body.support_point(normal(phi)) for phi in roots)
    return SupportingPlanes(planes, contacts)


def contact_chord_residual(
    body: ConvexBody,
    x1,
    x2,
    count: Optional[int] = None,
) -> float:
    """Angle between the contact chord of the common supporting planes and the
    line where the planes of ``S(body, xi) ∩ S(body, 2c - xi)`` meet.

    Zero for ellipsoids. Folded into ``[0, pi/2]``.
    """

    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    a, b = common_supporting_planes(body, x1, x2).contacts
    c = body.center
    n1 = fit_hyperplane(cone_intersection(body, x1, 2.0 * c - x1, count).points).hyperplane().normal
    n2 = fit_hyperplane(cone_intersection(body, x2, 2.0 * c - x2, count).points).hyperplane().normal
    meet = np.cross(n1, n2)
    if np.linalg.norm(meet) <= 1e-12:
        raise GeometryError("the two section planes are parallel")
    meet = meet / np.linalg.norm(meet)
    chord = (b - a) / np.linalg.norm(b - a)
    angle = float(np.arctan2(np.linalg.norm(np.cross(meet, chord)), abs(float(meet @ chord))))
    logger.debug("contact chord residual %.3e rad", angle)
    return angle


__all__ = ["SupportingPlanes", "common_supporting_planes", "contact_chord_residual"]
