"""Checks built on support cones from apexes on the outer body.

``L`` is the inner body and ``K`` the outer one throughout; apexes are
sampled on the boundary of ``K``.
"""

from __future__ import annotations

import logging
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from scipy.optimize import minimize

from apps.convex.bodies.base import ConvexBody
from apps.convex.bodies.ops import interior_point_on_line, line_boundary_points, symmetry_residual
from apps.convex.conf import Tolerances, get_sampling, get_tolerances
from apps.convex.cones.curves import CurveSample, HalfPlaneFan
from apps.convex.cones.predicates import is_ellipsoidal_cone
from apps.convex.cones.support import cone_intersection, section_curve, support_cone
from apps.convex.cones.supporting import contact_chord_residual
from apps.convex.errors import GeometryError, NotEllipsoidal, PointNotInterior, SearchFailed
from apps.convex.geometry.fitting import fit_hyperplane
from apps.convex.geometry.projective import Hyperplane, Line, complement_basis
from apps.convex.geometry.sampling import hausdorff
from apps.convex.planar.diameters import affine_diameter_defect
from apps.convex.planar.radon import is_radon_curve
from apps.convex.planar.section import diameter_through_center, section

from .gates import ellipsoid_stage, fit_body, require_nested, require_o_symmetric
from .poles import polar_of
from .report import Bound, CheckReport, CheckRun, Measure, StageRole, map_samples, worst

logger = logging.getLogger(__name__)

DEFAULT_APEXES = 8
# Apex pairs used for the contact chord claim
MAX_PAIRS = 6
# Sections through p used for the diameter and Radon claims
MAX_SECTIONS = 3
# Points of Pi_z ∩ bd K joined to each apex for the almost-free stage
FREE_SAMPLES = 12
# Partner-plane searches fail above this multiple of the hausdorff gate
SEARCH_FACTOR = 10.0

HYPOTHESIS = StageRole.HYPOTHESIS
CLAIM = StageRole.CLAIM
CONCLUSION = StageRole.CONCLUSION


def _settings(apexes, count, seed, tolerances):
    sampling = get_sampling()
    return (
        DEFAULT_APEXES if apexes is None else apexes,
        sampling.curve_samples if count is None else count,
        sampling.seed if seed is None else seed,
        get_tolerances() if tolerances is None else tolerances,
        sampling,
    )


def _folded_angle(u: np.ndarray, v: np.ndarray) -> float:
    u = u / np.linalg.norm(u)
    v = v / np.linalg.norm(v)
    c = abs(float(u @ v))
    s = float(np.linalg.norm(u - (u @ v) * v))
    return float(np.arctan2(s, c))


# ---------------------------------------------------------------------------
# Cones from opposite apexes
# ---------------------------------------------------------------------------

def check_theorem1(
    inner: ConvexBody,
    outer: ConvexBody,
    apexes: Optional[int] = None,
    count: Optional[int] = None,
    seed: Optional[int] = None,
    tolerances: Optional[Tolerances] = None,
) -> CheckReport:
    """Ellipsoidal support cones of an O-symmetric ``inner`` from every apex on ``outer``.

    Raises ``BodiesNotNested`` unless ``inner`` lies in the interior of ``outer``.
    """

    apexes, count, seed, tol, sampling = _settings(apexes, count, seed, tolerances)
    require_nested(inner, outer, tol, sampling.directions, seed)
    center = inner.center
    xs = outer.boundary_points(apexes, seed)
    run = CheckRun("t1", {"inner": inner, "outer": outer}, tol, seed)
    run.samples.update({"apexes": apexes, "curve": count, "boundary": sampling.directions})

    run.evaluate(
        "inner_o_symmetric", HYPOTHESIS, tol.symmetry,
        lambda: Measure(symmetry_residual(inner, center, sampling.directions, seed), {"center": center}),
    )

    def cones() -> Measure:
        fits = map_samples(lambda x: is_ellipsoidal_cone(support_cone(inner, x, count), tol.ellipse, seed), list(xs))
        bad = [i for i, fit in enumerate(fits) if not fit.is_ellipse]
        k, rms = worst(fit.rms_residual for fit in fits)
        k = bad[0] if bad else k
        return Measure(rms, {
            "apex": xs[k],
            "classification": fits[k].classification,
            "non_ellipse_apexes": len(bad),
        }, not bad)

    run.evaluate("ellipsoidal_cones", HYPOTHESIS, tol.ellipse, cones)

    def planarity() -> Measure:
        rms = map_samples(
            lambda x: fit_hyperplane(cone_intersection(inner, x, 2.0 * center - x, count, seed).points).rms_residual,
            list(xs),
        )
        k, value = worst(rms)
        return Measure(value, {"apex": xs[k]})

    run.evaluate("omega_planar", CLAIM, tol.planarity, planarity)

    if inner.dim != 3:
        run.skip("contact_chord_parallel", CLAIM, "common supporting planes are computed in dimension 3")
    else:
        pairs = [
            (i, j)
            for i in range(len(xs))
            for j in range(i + 1, len(xs))
            if interior_point_on_line(inner, Line.through(xs[i], xs[j]))[1] >= 1.0 + tol.margin
        ][:MAX_PAIRS]
        run.samples["pairs"] = len(pairs)
        if not pairs:
            run.skip("contact_chord_parallel", CLAIM, "no sampled apex pair spans a line missing the inner body")
        else:
            def chords() -> Measure:
                angles = map_samples(lambda ij: contact_chord_residual(inner, xs[ij[0]], xs[ij[1]], count), pairs)
                k, angle = worst(angles)
                return Measure(angle, {"apexes": [xs[pairs[k][0]], xs[pairs[k][1]]]})

            run.evaluate("contact_chord_parallel", CLAIM, tol.angle, chords)

    ellipsoid_stage(run, "ellipsoid", inner, tol, sampling.directions, seed)
    run.implication("planar cone intersections with parallel contact chords imply an ellipsoid (trusted)")
    return run.finish()


# ---------------------------------------------------------------------------
# Cone intersections lying on sections of the outer body
# ---------------------------------------------------------------------------

def _fan_sides(point: np.ndarray, axis: np.ndarray, count: int, seed: int) -> Tuple[np.ndarray, np.ndarray]:
    fan = HalfPlaneFan.around(point, axis, count, seed)
    return fan.axis, fan.sides


def plane_matched_points(outer: ConvexBody, point, normal, axis, sides) -> Optional[np.ndarray]:
    """Boundary points of ``outer`` on the rays where the plane through ``point`` meets each half-plane."""

    along = float(normal @ axis)
    if abs(along) <= 1e-9:
        return None
    v = sides - np.outer(sides @ normal / along, axis)
    return outer.ray_exit(point, v)


def partner_plane(
    omega: CurveSample,
    outer: ConvexBody,
    point,
    axis,
    count: int,
    seed: int,
    tol: Optional[Tolerances] = None,
) -> Tuple[Hyperplane, float]:
    """Hyperplane through ``point`` whose section of ``outer`` best matches ``omega``.

    ``omega`` must be sampled on the half-plane fan of ``cone_intersection``
    around ``axis``, so its points are compared one to one with the section.
    The start is the principal plane of ``omega`` through ``point``, refined
    with Nelder-Mead. Returns the plane and the relative Hausdorff defect;
    raises ``SearchFailed`` when the defect stays above ten times the gate.
    """

    tol = get_tolerances() if tol is None else tol
    point = np.asarray(point, dtype=float)
    if float(outer.gauge(point)) >= 1.0:
        raise PointNotInterior("the plane must pass through an interior point of the outer body")
    axis, sides = _fan_sides(point, np.asarray(axis, dtype=float), count, seed)
    pts = omega.points
    _, _, vt = np.linalg.svd(pts - point, full_matrices=False)
    n0 = vt[-1]
    basis = complement_basis(n0)

    def normal(z):
        n = n0 + z @ basis
        return n / np.linalg.norm(n)

    def objective(z):
        matched = plane_matched_points(outer, point, normal(z), axis, sides)
        if matched is None:
            return np.inf
        return float(np.mean(np.sum((pts - matched) ** 2, axis=1)))

    res = minimize(
        objective,
        np.zeros(len(basis)),
        method="Nelder-Mead",
        options={"xatol": 1e-12, "fatol": 1e-24, "maxiter": 800},
    )
    n = normal(res.x)
    matched = plane_matched_points(outer, point, n, axis, sides)
    defect = np.inf if matched is None else hausdorff(pts, matched) / outer.diameter
    if defect > SEARCH_FACTOR * tol.hausdorff:
        raise SearchFailed("no plane through the point carries the cone intersection", float(defect))
    return Hyperplane.through(point, n), float(defect)


def _partner(inner, outer, point, x, count, seed, tol) -> Dict[str, Any]:
    entry: Dict[str, Any] = {"apex": x, "plane": None}
    try:
        _, y = line_boundary_points(outer, Line.through(x, point))
        entry["partner"] = y
        omega = cone_intersection(inner, x, y, count, seed)
        entry["plane"], entry["defect"] = partner_plane(omega, outer, point, y - x, count, seed, tol)
    except GeometryError as exc:
        entry["defect"] = getattr(exc, "defect", np.inf)
        entry["error"] = type(exc).__name__
    return entry


def check_theorem2(
    inner: ConvexBody,
    outer: ConvexBody,
    point=None,
    apexes: Optional[int] = None,
    count: Optional[int] = None,
    seed: Optional[int] = None,
    tolerances: Optional[Tolerances] = None,
) -> CheckReport:
    """Cone intersections from ``x`` and its partner through ``point`` lying on sections of ``outer``.

    ``point`` defaults to the center of ``outer``. The partner of ``x`` is the
    second boundary point of ``outer`` on the line through ``x`` and
    ``point``.
    """

    apexes, count, seed, tol, sampling = _settings(apexes, count, seed, tolerances)
    require_nested(inner, outer, tol, sampling.directions, seed)
    point = outer.center if point is None else np.asarray(point, dtype=float)
    if float(outer.gauge(point)) >= 1.0 - tol.margin:
        raise PointNotInterior("the point must lie in the interior of the outer body")
    xs = outer.boundary_points(apexes, seed)
    run = CheckRun("t2", {"inner": inner, "outer": outer}, tol, seed, {"point": point})
    run.samples.update({"apexes": apexes, "curve": count, "boundary": sampling.directions})

    found: Dict[str, List[Dict[str, Any]]] = {}

    def partners() -> Measure:
        entries = map_samples(lambda x: _partner(inner, outer, point, x, count, seed, tol), list(xs))
        found["entries"] = [e for e in entries if e["plane"] is not None]
        k, defect = worst(e["defect"] for e in entries)
        failed = [e for e in entries if e["plane"] is None]
        witness = {key: value for key, value in entries[k].items() if key != "plane"}
        witness["searches_failed"] = len(failed)
        return Measure(defect, witness, not failed)

    run.evaluate("cone_intersection_in_section", HYPOTHESIS, tol.hausdorff, partners)
    entries = found.get("entries", [])

    def planes() -> List[Dict[str, Any]]:
        if not entries:
            raise GeometryError("no partner plane was found")
        return entries

    def parallel() -> Measure:
        angles = []
        for e in planes():
            nx, ny = np.atleast_2d(outer.normal(np.vstack([e["apex"], e["partner"]])))
            n = e["plane"].normal
            angles.append(max(_folded_angle(nx, n), _folded_angle(ny, n)))
        k, angle = worst(angles)
        return Measure(angle, {"apex": planes()[k]["apex"]})

    run.evaluate("parallel_support_planes", CLAIM, tol.angle, parallel)

    if outer.dim != 3:
        reason = "planar sections through the point need dimension 3"
        run.skip("affine_diameters_through_p", CLAIM, reason)
        run.skip("radon_sections", CLAIM, reason)
    else:
        def diameters() -> Measure:
            angles = np.pi * np.arange(count) / count
            defects = []
            for e in planes()[:MAX_SECTIONS]:
                sec = section(outer, e["plane"])
                centered = sec.centered(sec.to_local(point))
                defects.append(max(affine_diameter_defect(centered, diameter_through_center(centered, a)) for a in angles))
            k, defect = worst(defects)
            return Measure(defect, {"apex": planes()[k]["apex"], "chords": count})

        run.evaluate("affine_diameters_through_p", CLAIM, tol.affine_diameter, diameters)

        def radon() -> Measure:
            results = [
                is_radon_curve(section(outer, e["plane"]), count, tol.conjugacy, tol.symmetry)
                for e in planes()[:MAX_SECTIONS]
            ]
            k, defect = worst(r.conjugacy_defect for r in results)
            return Measure(defect, {"apex": planes()[k]["apex"], **results[k].as_dict()}, all(r.radon for r in results))

        run.evaluate("radon_sections", CLAIM, tol.conjugacy, radon)

    ellipsoid_stage(run, "inner_ellipsoid", inner, tol, sampling.directions, seed)
    ellipsoid_stage(run, "outer_ellipsoid", outer, tol, sampling.directions, seed)

    def fits():
        a = fit_body(inner, tol, sampling.directions, seed)
        b = fit_body(outer, tol, sampling.directions, seed)
        if not (a.is_ellipse and b.is_ellipse):
            raise NotEllipsoidal("both bodies must fit as ellipsoids")
        return a, b

    def concentric() -> Measure:
        a, b = fits()
        gap = float(np.linalg.norm(np.subtract(a.center, b.center))) / outer.diameter
        return Measure(gap, {"inner_center": a.center, "outer_center": b.center})

    def homothetic() -> Measure:
        a, b = fits()
        qa, qb = np.array(a.shape), np.array(b.shape)
        gap = float(np.linalg.norm(qa / np.linalg.norm(qa) - qb / np.linalg.norm(qb)))
        return Measure(gap, {"scale": float(np.linalg.norm(qa) / np.linalg.norm(qb))})

    run.evaluate("concentric", CONCLUSION, tol.symmetry, concentric)
    run.evaluate("homothetic", CONCLUSION, tol.ellipse, homothetic)
    run.implication("Radon sections through p in every direction imply an ellipsoidal outer body (trusted)")
    return run.finish()


# ---------------------------------------------------------------------------
# Poles on the outer body
# ---------------------------------------------------------------------------

def check_theorem3(
    inner: ConvexBody,
    outer: ConvexBody,
    apexes: Optional[int] = None,
    count: Optional[int] = None,
    seed: Optional[int] = None,
    tolerances: Optional[Tolerances] = None,
) -> CheckReport:
    """Every apex on ``outer`` a pole of ``inner`` with its cone intersection inside ``outer``.

    Both bodies must be symmetric about the center of ``inner``; raises
    ``NotOSymmetric`` or ``BodiesNotNested`` otherwise.
    """

    apexes, count, seed, tol, sampling = _settings(apexes, count, seed, tolerances)
    center = inner.center
    require_o_symmetric(inner, tol, sampling.directions, seed, "inner body")
    require_o_symmetric(outer, tol, sampling.directions, seed, "outer body", center=center)
    require_nested(inner, outer, tol, sampling.directions, seed)
    xs = outer.boundary_points(apexes, seed)
    run = CheckRun("t3", {"inner": inner, "outer": outer}, tol, seed)
    run.samples.update({
        "apexes": apexes,
        "curve": count,
        "boundary": sampling.directions,
        "free": FREE_SAMPLES,
    })

    found: Dict[str, Any] = {}

    def poles() -> Measure:
        results = map_samples(lambda x: polar_of(inner, x, count, seed, tol), list(xs))
        found["poles"] = results
        bad = [i for i, r in enumerate(results) if not r.is_pole]
        k, residual = worst(r.residual for r in results)
        k = bad[0] if bad else k
        return Measure(residual, {"apex": xs[k], **results[k].as_dict()}, not bad)

    run.evaluate("poles", HYPOTHESIS, tol.pole, poles)

    def omega_inside() -> Measure:
        omegas = map_samples(lambda x: cone_intersection(inner, x, 2.0 * center - x, count, seed), list(xs))
        found["omegas"] = omegas
        gauges = [float(np.max(outer.gauge(o.points))) for o in omegas]
        k, g = worst(gauges)
        return Measure(1.0 - g, {"apex": xs[k], "max_outer_gauge": g})

    run.evaluate("omega_inside_outer", HYPOTHESIS, tol.margin, omega_inside, bound=Bound.LOWER)

    def results():
        if "poles" not in found:
            raise GeometryError("polars were not computed")
        return found["poles"]

    def graze_in_polar() -> Measure:
        values = [np.inf if r.graze_agreement is None else r.graze_agreement for r in results()]
        k, value = worst(values)
        return Measure(value, {"apex": xs[k]})

    if inner.smooth:
        run.evaluate("graze_in_polar", CLAIM, tol.hausdorff, graze_in_polar)
    else:
        run.skip("graze_in_polar", CLAIM, f"{inner.kind} bodies have no graze")

    def central_planes() -> List[Hyperplane]:
        planes = []
        for r in results():
            if r.polar.infinite:
                raise GeometryError("an apex has its polar at infinity")
            planes.append(r.polar.parallel_through(center))
        return planes

    def omega_in_plane() -> Measure:
        if "omegas" not in found:
            raise GeometryError("cone intersections were not computed")
        rms = [
            float(np.sqrt(np.mean(plane.signed_distance(o.points) ** 2))) / inner.diameter
            for plane, o in zip(central_planes(), found["omegas"])
        ]
        k, value = worst(rms)
        return Measure(value, {"apex": xs[k]})

    run.evaluate("omega_in_central_plane", CLAIM, tol.planarity, omega_in_plane)

    def almost_free() -> Measure:
        lowest = np.inf
        witness: Dict[str, Any] = {}
        for x, plane in zip(xs, central_planes()):
            for w in section_curve(outer, plane, FREE_SAMPLES, origin=center, seed=seed).points:
                _, g = interior_point_on_line(inner, Line.through(x, w))
                if g < lowest:
                    lowest = g
                    witness = {"apex": x, "section_point": w, "min_inner_gauge": g}
        return Measure(lowest - 1.0, witness)

    run.evaluate("almost_free", CLAIM, tol.margin, almost_free, bound=Bound.LOWER)

    ellipsoid_stage(run, "ellipsoid", inner, tol, sampling.directions, seed)
    run.implication("an almost-free configuration with planar grazes implies an ellipsoid (trusted)")
    return run.finish()


__all__ = [
    "DEFAULT_APEXES",
    "check_theorem1",
    "check_theorem2",
    "check_theorem3",
    "partner_plane",
    "plane_matched_points",
]
