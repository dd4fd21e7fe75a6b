"""Cone-level predicates: ellipsoidal cones, centered sections, symmetric cones."""

from __future__ import annotations

import logging
from typing import List, NamedTuple, Optional, Tuple, Union

import numpy as np

from apps.convex.conf import get_sampling, get_tolerances
from apps.convex.errors import DegenerateCloud, DegenerateCone, NotEllipsoidal, RayNotInterior
from apps.convex.geometry.fitting import FitResult, fit_planar_conic, fit_quadric, quadric_matrix
from apps.convex.geometry.projective import Chart, Hyperplane, Line, _unit, complement_basis
from apps.convex.geometry.roots import golden_minimize
from apps.convex.geometry.sampling import circle_frame

from .curves import HalfPlaneFan
from .support import SupportCone, _tangent_points

logger = logging.getLogger(__name__)

ALTERNATIVE_SECTIONS = 3
_TILT = 0.1


def _mean_generator(cone: SupportCone) -> np.ndarray:
    m = cone.generators.mean(axis=0)
    if np.linalg.norm(m) <= 1e-12:
        raise DegenerateCone("generators of the cone average to zero")
    return _unit(m)


def _section(cone: SupportCone, normal: np.ndarray, tol: Optional[float] = None) -> Tuple[FitResult, Chart]:
    """Fit the section of the cone by ``{<y - apex, normal> = 1}``.

    Returns the fit and the chart of the section hyperplane, whose origin is
    the foot of the apex.
    """

    if cone.dim < 3:
        raise DegenerateCone("cone sections need dimension >= 3")
    g = cone.generators
    heights = g @ normal
    if np.any(heights <= 1e-9):
        raise DegenerateCone("section hyperplane does not cut every generator")
    points = cone.apex + g / heights[:, None]
    chart = Chart(cone.apex + normal, complement_basis(normal))
    try:
        if cone.dim == 3:
            fit = fit_planar_conic(points, chart, tol=tol)
        else:
            fit = fit_quadric(chart.to_local(points), tol=tol)
    except DegenerateCloud as exc:
        raise DegenerateCone(f"cone section is degenerate: {exc}") from exc
    return fit, chart


def section_normals(cone: SupportCone, seed: int) -> List[np.ndarray]:
    """Mean generator followed by ``ALTERNATIVE_SECTIONS`` seeded tilts of it."""

    m = _mean_generator(cone)
    rng = np.random.default_rng(seed)
    return [m] + [_unit(m + _TILT * _unit(rng.standard_normal(cone.dim))) for _ in range(ALTERNATIVE_SECTIONS)]


def _worse(a: FitResult, b: FitResult) -> FitResult:
    if a.is_ellipse != b.is_ellipse:
        return b if a.is_ellipse else a
    return b if b.rms_residual > a.rms_residual else a


def is_ellipsoidal_cone(cone: SupportCone, tol: Optional[float] = None, seed: Optional[int] = None) -> FitResult:
    """Fit bounded sections of the cone to an ellipse (or ellipsoid).

    The section orthogonal to the mean generator is re-tested against tilted
    sections; the worst fit is returned. Tilts that leave the cone's
    generators unbounded are skipped.
    """

    seed = get_sampling().seed if seed is None else seed
    normals = section_normals(cone, seed)
    worst, _ = _section(cone, normals[0], tol)
    for normal in normals[1:]:
        try:
            fit, _ = _section(cone, normal, tol)
        except DegenerateCone:
            logger.debug("tilted section skipped")
            continue
        worst = _worse(worst, fit)
    logger.debug("ellipsoidal cone: %s (rms %.3e)", worst.classification.value, worst.rms_residual)
    return worst


def _oriented(cone: SupportCone, ray: Union[Line, np.ndarray]) -> np.ndarray:
    """Unit direction of ``ray`` pointing into the cone's side of the apex."""

    if isinstance(ray, Line):
        if float(ray.distance(cone.apex)) > 1e-9 * max(1.0, cone.body.diameter):
            raise RayNotInterior("ray does not pass through the apex")
        w = ray.direction
    else:
        w = _unit(np.asarray(ray, dtype=float))
    if w @ _mean_generator(cone) < 0:
        w = -w
    if not cone.contains_direction(w):
        raise RayNotInterior("ray from the apex misses the interior of the cone")
    return w


def centered_section(cone: SupportCone, ray: Union[Line, np.ndarray], tol: Optional[float] = None) -> Hyperplane:
    """Hyperplane whose section of the cone is centered on ``ray``.

    Takes the bounded section ``H`` orthogonal to the mean generator, the
    polar ``P`` of ``p = ray ∩ H`` with respect to that ellipse, and returns
    the hyperplane through ``p`` parallel to ``span(apex, P)``.
    """

    w = _oriented(cone, ray)
    m = _mean_generator(cone)
    fit, chart = _section(cone, m, tol)
    if not fit.is_ellipse:
        raise NotEllipsoidal(f"cone section is not an ellipse ({fit.classification.value}, rms {fit.rms_residual:.3e})")
    height = float(w @ m)
    if height <= 0:
        raise RayNotInterior("ray does not meet the bounded section")
    p = cone.apex + w / height
    k = chart.dim
    yp = np.append(chart.to_local(p), 1.0)
    pole = quadric_matrix(fit.model, k) @ yp
    if float(yp @ pole) >= 0:
        raise RayNotInterior("ray meets the section outside the ellipse")
    # polar flat {alpha.y + gamma = 0} of H, lifted to the hyperplane through the apex
    normal = pole[:k] @ chart.basis + pole[k] * m
    return Hyperplane.through(p, normal)


class ConeSymmetry(NamedTuple):
    symmetric: bool
    residual: float
    tolerance: float


def _axis_interior_parameter(cone: SupportCone, axis: np.ndarray) -> float:
    body = cone.body
    reach = np.linalg.norm(cone.apex - body.center) + 2.0 * body.diameter
    t, g = golden_minimize(
        lambda s: body.gauge(cone.apex + s[:, None] * axis),
        np.zeros(1),
        np.full(1, reach),
        iterations=120,
    )
    if g[0] >= 1.0:
        raise RayNotInterior("axis misses the interior of the cone")
    return float(t[0])


def boundary_ray_angles(cone: SupportCone, axis: np.ndarray, sides: np.ndarray) -> np.ndarray:
    """Angle between ``axis`` and the cone's boundary ray in each half-plane ``(axis, side)``."""

    apex = cone.apex
    t = _axis_interior_parameter(cone, axis)
    fan = HalfPlaneFan(apex + t * axis, -axis, sides)
    g = _tangent_points(cone.body, apex, fan) - apex
    g = g / np.linalg.norm(g, axis=1, keepdims=True)
    return np.arccos(np.clip(g @ axis, -1.0, 1.0))


def is_symmetric_cone(
    cone: SupportCone,
    axis: Union[Line, np.ndarray],
    count: int = 64,
    tol: Optional[float] = None,
) -> ConeSymmetry:
    """Whether ``axis`` bisects every angle ``Γ ∩ cone`` for 2-planes ``Γ`` containing it."""

    tol = get_tolerances().bisector if tol is None else tol
    w = _oriented(cone, axis)
    sides = circle_frame(complement_basis(w), count, get_sampling().seed)
    angles = boundary_ray_angles(cone, w, np.vstack([sides, -sides]))
    residual = float(np.max(np.abs(angles[:count] - angles[count:])))
    logger.debug("cone symmetry about axis: residual %.3e rad", residual)
    return ConeSymmetry(residual <= tol, residual, tol)


__all__ = [
    "ALTERNATIVE_SECTIONS",
    "ConeSymmetry",
    "boundary_ray_angles",
    "centered_section",
    "is_ellipsoidal_cone",
    "is_symmetric_cone",
    "section_normals",
]
