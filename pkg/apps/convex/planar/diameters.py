"""Central symmetry, affine diameters and conjugate diameters of planar figures."""

from __future__ import annotations

import logging
from typing import NamedTuple, Optional, Tuple

import numpy as np

from apps.convex.bodies.ops import Chord
from apps.convex.conf import get_sampling, get_tolerances
from apps.convex.errors import ConjugateNotFound, DegenerateChord, EndpointNotOnBoundary, NotAffineDiameter
from apps.convex.geometry.sampling import sphere_directions

from .section import PlanarSection, perpendicular

logger = logging.getLogger(__name__)

_MIN_CHORD = 1e-6
_WIDTH_DIRECTIONS = 720


class CentralSymmetry(NamedTuple):
    symmetric: bool
    center: np.ndarray
    residual: float
    tolerance: float


def central_symmetry(
    sec: PlanarSection,
    tol: Optional[float] = None,
    count: Optional[int] = None,
) -> CentralSymmetry:
    """Least-squares center ``c`` of ``h(u) - h(-u) = 2 <c, u>``.

    ``residual`` is the worst misfit over the sampled directions divided by
    the diameter; the figure is symmetric about ``c`` iff it is within ``tol``.
    """

    tol = get_tolerances().symmetry if tol is None else tol
    count = get_sampling().directions if count is None else count
    u = sphere_directions(2, count, get_sampling().seed)
    odd = sec.support(u) - sec.support(-u)
    center, *_ = np.linalg.lstsq(2.0 * u, odd, rcond=None)
    residual = float(np.max(np.abs(odd - 2.0 * u @ center)) / sec.diameter)
    logger.debug("central symmetry: center %s residual %.3e", np.round(center, 12).tolist(), residual)
    return CentralSymmetry(residual <= tol, center, residual, tol)


def _endpoints(sec: PlanarSection, chord: Chord) -> Tuple[np.ndarray, np.ndarray]:
    a = np.asarray(chord.a, dtype=float)
    b = np.asarray(chord.b, dtype=float)
    if np.linalg.norm(b - a) < _MIN_CHORD * sec.diameter:
        raise DegenerateChord("chord is shorter than the conditioning floor")
    residual = float(np.max(sec.boundary_residual(np.vstack([a, b]))))
    if residual > get_tolerances().boundary:
        raise EndpointNotOnBoundary(f"chord endpoint off the section boundary by {residual:.3e}")
    return a, b


def _cross2(u: np.ndarray, v: np.ndarray) -> float:
    return float(u[0] * v[1] - u[1] * v[0])


def affine_diameter_defect(sec: PlanarSection, chord: Chord) -> float:
    """How far ``chord`` is from having parallel supporting lines at its ends.

    For smooth figures this is the angle between the normal at ``a`` and the
    reversed normal at ``b``; otherwise the smallest relative gap between the
    width in direction ``u`` and the projection of the chord onto ``u``.
    """

    a, b = _endpoints(sec, chord)
    if sec.smooth:
        na, nb = sec.normal(np.vstack([a, b]))
        return float(np.arctan2(abs(float(_cross2(na, -nb))), float(na @ -nb)))
    angles = np.pi * np.arange(_WIDTH_DIRECTIONS) / _WIDTH_DIRECTIONS
    u = np.column_stack([np.cos(angles), np.sin(angles)])
    gap = sec.support(u) + sec.support(-u) - np.abs(u @ (a - b))
    return float(np.min(gap) / sec.diameter)


def is_affine_diameter(sec: PlanarSection, chord: Chord, tol: Optional[float] = None) -> bool:
    tol = get_tolerances().affine_diameter if tol is None else tol
    return affine_diameter_defect(sec, chord) <= tol


def conjugate_chords(sec: PlanarSection, a: np.ndarray, b: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Candidate conjugates of the chords ``[a_i, b_i]`` and their closure defects.

    The candidate joins the contacts ``c, c'`` of the supporting lines parallel
    to ``[a, b]``; the parallelogram closes when the supporting lines parallel
    to ``c' - c`` touch at ``b`` and ``a``. The defect is the larger distance
    of those contacts from ``b`` and ``a``, relative to the diameter.
    """

    a = np.atleast_2d(a)
    b = np.atleast_2d(b)
    e = b - a
    n = perpendicular(e / np.linalg.norm(e, axis=1, keepdims=True))
    k = len(a)
    contacts = np.atleast_2d(sec.support_point(np.vstack([n, -n])))
    c, c2 = contacts[:k], contacts[k:]
    f = c2 - c
    m = perpendicular(f / np.linalg.norm(f, axis=1, keepdims=True))
    m = m * np.sign(np.einsum("ij,ij->i", m, e))[:, None]
    closing = np.atleast_2d(sec.support_point(np.vstack([m, -m])))
    defect = np.maximum(
        np.linalg.norm(closing[:k] - b, axis=1),
        np.linalg.norm(closing[k:] - a, axis=1),
    ) / sec.diameter
    return c, c2, defect


def conjugate_diameter(sec: PlanarSection, chord: Chord, tol: Optional[float] = None) -> Chord:
    """Affine diameter conjugate to ``chord`` via a circumscribed parallelogram.

    Raises ``NotAffineDiameter`` when ``chord`` has no parallel supporting
    lines at its ends, and ``ConjugateNotFound`` with the closure defect when
    the parallelogram does not close within ``tol``.
    """

    tol = get_tolerances().conjugacy if tol is None else tol
    a, b = _endpoints(sec, chord)
    spread = affine_diameter_defect(sec, chord)
    if spread > get_tolerances().affine_diameter:
        raise NotAffineDiameter("the chord is not an affine diameter", spread)
    c, c2, defect = conjugate_chords(sec, a, b)
    if defect[0] > tol:
        raise ConjugateNotFound("no circumscribed parallelogram closes on this diameter", float(defect[0]))
    return Chord(c[0], c2[0])


__all__ = [
    "CentralSymmetry",
    "affine_diameter_defect",
    "central_symmetry",
    "conjugate_chords",
    "conjugate_diameter",
    "is_affine_diameter",
]
