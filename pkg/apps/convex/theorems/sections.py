"""Checks built on families of planar sections of a single body."""

from __future__ import annotations

import logging
from typing import Any, Dict, List, NamedTuple, Optional

import numpy as np

from apps.convex.bodies.base import ConvexBody
from apps.convex.bodies.ops import line_boundary_points, symmetry_residual
from apps.convex.conf import Tolerances, get_sampling, get_tolerances
from apps.convex.cones.support import section_curve, shadow_boundary
from apps.convex.errors import BallTooLarge, GeometryError, NonSmoothBody, PointNotInterior
from apps.convex.geometry.fitting import fit_planar_conic
from apps.convex.geometry.projective import Chart, Hyperplane, Line, Slab, complement_basis
from apps.convex.geometry.sampling import circle_frame, hausdorff, sphere_directions
from apps.convex.planar.diameters import CentralSymmetry, central_symmetry
from apps.convex.planar.radon import is_radon_curve
from apps.convex.planar.section import PlanarSection, section

from .gates import ellipsoid_stage, require_dimension, require_o_symmetric
from .report import Bound, CheckReport, CheckRun, Measure, StageRole, map_samples, worst

logger = logging.getLogger(__name__)

DEFAULT_TANGENTS = 8
DEFAULT_PLANES = 6
LATERAL_DIRECTIONS = 16
# Directions v orthogonal to phi(u) per sampled u, and how many u are used
ORTHOGONAL_SAMPLES = 3
ORTHOGONAL_TANGENTS = 3
MIDPOINT_CHORDS = 9
SCALED_HEIGHTS = (0.25, 0.5, 0.75)

UNIFORM_EPSILON_NOTE = "one slab width is used for every hyperplane; per-plane widths are not searched"
FCT_NOTE = (
    "FCT-case: sections through the point are centrally symmetric but not centered at it; "
    "the False Centre Theorem is invoked as a trusted implication"
)

HYPOTHESIS = StageRole.HYPOTHESIS
CLAIM = StageRole.CLAIM
CONCLUSION = StageRole.CONCLUSION


class SymmetricSection(NamedTuple):
    plane: Hyperplane
    section: PlanarSection
    symmetry: CentralSymmetry

    @property
    def center(self) -> np.ndarray:
        return self.section.to_global(self.symmetry.center)


def symmetric_section(body: ConvexBody, plane: Hyperplane, tol: Tolerances) -> SymmetricSection:
    sec = section(body, plane)
    return SymmetricSection(plane, sec, central_symmetry(sec, tol.symmetry))


def _folded_angle(u: np.ndarray, v: np.ndarray) -> float:
    u = u / np.linalg.norm(u)
    v = v / np.linalg.norm(v)
    return float(np.arctan2(np.linalg.norm(np.cross(u, v)), abs(float(u @ v))))


# ---------------------------------------------------------------------------
# Sections by planes tangent to a ball
# ---------------------------------------------------------------------------

class TangentSections:
    """Sections of ``body`` by the planes ``{<u, x - O> = height}``."""

    def __init__(self, body: ConvexBody, radius: float, tol: Tolerances):
        self.body = body
        self.radius = radius
        self.tol = tol
        self.center = body.center

    def plane(self, u, height: Optional[float] = None) -> Hyperplane:
        height = self.radius if height is None else height
        return Hyperplane(u, height + float(u @ self.center))

    def at(self, u, height: Optional[float] = None) -> SymmetricSection:
        return symmetric_section(self.body, self.plane(u, height), self.tol)

    def phi(self, u) -> np.ndarray:
        """Vector from the center of the section at ``-u`` to the one at ``u``."""

        return self.at(u).center - self.at(-u).center

    def lateral_margin(self, u, count: int, seed: int) -> float:
        """How far the ball stays inside the hull of the sections at ``u`` and ``-u``.

        In each plane spanned by ``u`` and a lateral direction ``w``, the hull
        side joins ``(r, h+)`` and ``(-r, h-)``, the lateral supports of the two
        sections; the margin is the smallest distance from ``O`` to that side
        over ``r``, minus one.
        """

        r = self.radius
        ws = circle_frame(complement_basis(u), count, seed)
        supports = []
        for sign in (1.0, -1.0):
            sec = self.at(sign * u).section
            local = ws @ sec.chart.basis.T
            supports.append(ws @ (sec.origin - self.center) + np.atleast_1d(sec.support(local)))
        h_plus, h_minus = supports
        distance = r * (h_plus + h_minus) / np.sqrt(4.0 * r * r + (h_plus - h_minus) ** 2)
        return float(np.min(distance) / r - 1.0)


def _midpoint_locus(body: ConvexBody, sections: TangentSections, u, v):
    """Line fit of midpoints of chords of the section at ``v`` parallel to ``u x v``.

    Returns the relative rms distance to the fitted line and its direction.
    """

    d = np.cross(u, v)
    d = d / np.linalg.norm(d)
    e = np.cross(d, v)
    e = e / np.linalg.norm(e)
    c = sections.at(v).center
    ahead = float(body.exit_parameter(c, e))
    behind = float(body.exit_parameter(c, -e))
    midpoints = []
    for t in np.linspace(-0.8 * behind, 0.8 * ahead, MIDPOINT_CHORDS):
        a, b = line_boundary_points(body, Line(c + t * e, d))
        midpoints.append(0.5 * (a + b))
    midpoints = np.array(midpoints)
    mean = midpoints.mean(axis=0)
    _, _, vt = np.linalg.svd(midpoints - mean, full_matrices=False)
    direction = vt[0]
    rel = midpoints - mean
    off = rel - np.outer(rel @ direction, direction)
    rms = float(np.sqrt(np.mean(np.sum(off ** 2, axis=1)))) / body.diameter
    return rms, direction


def check_theorem4(
    body: ConvexBody,
    radius: float,
    tangents: Optional[int] = None,
    count: Optional[int] = None,
    seed: Optional[int] = None,
    tolerances: Optional[Tolerances] = None,
) -> CheckReport:
    """Sections of ``body`` by planes tangent to the ball of ``radius`` about ``O``.

    ``O`` is the center of ``body``, which must be symmetric about it and
    smooth. Raises ``BallTooLarge`` when the ball does not fit strictly inside.
    """

    sampling = get_sampling()
    tangents = DEFAULT_TANGENTS if tangents is None else tangents
    count = sampling.curve_samples if count is None else count
    seed = sampling.seed if seed is None else seed
    tol = get_tolerances() if tolerances is None else tolerances
    require_dimension(body, 3, "t4")
    require_o_symmetric(body, tol, sampling.directions, seed)
    if not body.smooth:
        raise NonSmoothBody(f"t4 needs a smooth body, got a {body.kind}")
    r = float(radius)
    if not r > 0:
        raise GeometryError(f"ball radius must be positive, got {radius}")
    dirs = sphere_directions(body.dim, sampling.directions, seed)
    inradius = float(np.min(body.support(dirs) - dirs @ body.center))
    if r * (1.0 + tol.margin) >= inradius:
        raise BallTooLarge(f"ball of radius {r:g} does not fit strictly inside the body (inradius {inradius:.6g})")

    sections = TangentSections(body, r, tol)
    us = sphere_directions(body.dim, tangents, seed)
    run = CheckRun("t4", {"body": body}, tol, seed, {"radius": r, "inradius": inradius})
    run.samples.update({
        "tangents": tangents,
        "curve": count,
        "boundary": sampling.directions,
        "lateral": LATERAL_DIRECTIONS,
    })

    def ellipses() -> Measure:
        fits = map_samples(
            lambda u: fit_planar_conic(
                section_curve(body, sections.plane(u), count, seed=seed).points, sections.plane(u), tol.ellipse,
            ),
            list(us),
        )
        bad = [i for i, fit in enumerate(fits) if not fit.is_ellipse]
        k, rms = worst(fit.rms_residual for fit in fits)
        k = bad[0] if bad else k
        return Measure(rms, {"direction": us[k], "classification": fits[k].classification}, not bad)

    run.evaluate("tangent_sections_ellipses", HYPOTHESIS, tol.ellipse, ellipses)

    def cylinder() -> Measure:
        margins = map_samples(lambda u: sections.lateral_margin(u, LATERAL_DIRECTIONS, seed), list(us))
        k = int(np.argmin(margins))
        return Measure(float(margins[k]), {"direction": us[k], "margin": float(margins[k])})

    run.evaluate("ball_inside_cylinder", HYPOTHESIS, tol.margin, cylinder, bound=Bound.LOWER)

    found: Dict[str, Any] = {}

    def translation() -> Measure:
        phis, defects = [], []
        for u in us:
            plus, minus = sections.at(u).center, sections.at(-u).center
            phi = plus - minus
            rays = circle_frame(complement_basis(u), count, seed)
            shifted = body.ray_exit(plus, rays) - phi
            defects.append(hausdorff(shifted, body.ray_exit(minus, rays)) / body.diameter)
            phis.append(phi)
        phis = np.array(phis)
        found["phi"] = phis
        lipschitz = max(
            (
                float(np.linalg.norm(phis[i] - phis[j]) / np.linalg.norm(us[i] - us[j]))
                for i in range(len(us))
                for j in range(i + 1, len(us))
            ),
            default=0.0,
        )
        k, defect = worst(defects)
        return Measure(defect, {"direction": us[k], "phi": phis[k], "lipschitz_estimate": lipschitz})

    run.evaluate("translation_phi", CLAIM, tol.hausdorff, translation)

    def pairs() -> List[Any]:
        if "phi" not in found:
            raise GeometryError("translation vectors were not computed")
        out = []
        for u, phi in list(zip(us, found["phi"]))[:ORTHOGONAL_TANGENTS]:
            for v in circle_frame(complement_basis(phi), ORTHOGONAL_SAMPLES, seed):
                out.append((u, phi, v))
        return out

    def orthogonality() -> Measure:
        values, witnesses = [], []
        for u, _, v in pairs():
            phi_v = sections.phi(v)
            values.append(abs(float(phi_v @ u)) / float(np.linalg.norm(phi_v)))
            witnesses.append({"u": u, "v": v, "phi_v": phi_v})
        k, value = worst(values)
        return Measure(value, witnesses[k])

    run.evaluate("phi_orthogonality", CLAIM, tol.symmetry, orthogonality)

    loci: Dict[str, Any] = {}

    def midpoint_lines():
        if "rows" not in loci:
            rows = []
            for u, phi, v in pairs():
                rms, direction = _midpoint_locus(body, sections, u, v)
                rows.append((u, v, rms, _folded_angle(direction, phi)))
            loci["rows"] = rows
        return loci["rows"]

    def midpoint_collinear() -> Measure:
        rows = midpoint_lines()
        k, rms = worst(row[2] for row in rows)
        return Measure(rms, {"u": rows[k][0], "v": rows[k][1]})

    def midpoint_parallel() -> Measure:
        rows = midpoint_lines()
        k, angle = worst(row[3] for row in rows)
        return Measure(angle, {"u": rows[k][0], "v": rows[k][1]})

    run.evaluate("midpoint_locus", CLAIM, tol.collinearity, midpoint_collinear)
    run.evaluate("midpoint_locus_parallel_to_phi", CLAIM, tol.angle, midpoint_parallel)

    ellipsoid_stage(run, "ellipsoid", body, tol, sampling.directions, seed)

    def scaled_sections() -> Measure:
        if "phi" not in found:
            raise GeometryError("translation vectors were not computed")
        values, witnesses, symmetric = [], [], True
        for u, phi in list(zip(us, found["phi"]))[:ORTHOGONAL_TANGENTS]:
            for fraction in SCALED_HEIGHTS:
                height = fraction * r
                sec = sections.at(u, height)
                expected = body.center + height / float(phi @ u) * phi
                values.append(float(np.linalg.norm(sec.center - expected)) / body.diameter)
                witnesses.append({"u": u, "height": height, "center": sec.center, "expected": expected})
                symmetric = symmetric and sec.symmetry.symmetric
        k, value = worst(values)
        return Measure(value, witnesses[k], symmetric)

    run.evaluate("scaled_sections_centered", CONCLUSION, tol.symmetry, scaled_sections)
    run.implication("sections symmetric under a continuous translation field imply an ellipsoid (trusted)")
    return run.finish()


# ---------------------------------------------------------------------------
# Sections inside slabs around planes through a point
# ---------------------------------------------------------------------------

def check_theorem_basico(
    body: ConvexBody,
    point=None,
    epsilon: float = 0.2,
    planes: Optional[int] = None,
    count: Optional[int] = None,
    seed: Optional[int] = None,
    tolerances: Optional[Tolerances] = None,
) -> CheckReport:
    """Centrally symmetric sections in an ``epsilon``-slab around every plane through ``point``.

    ``point`` defaults to the center of ``body``; raises ``NonSmoothBody``
    for bodies that are not smooth.
    """

    sampling = get_sampling()
    planes = DEFAULT_PLANES if planes is None else planes
    count = sampling.curve_samples if count is None else count
    seed = sampling.seed if seed is None else seed
    tol = get_tolerances() if tolerances is None else tolerances
    if not body.smooth:
        raise NonSmoothBody(f"basico needs a smooth strictly convex body, got a {body.kind}")
    require_dimension(body, 3, "basico")
    point = body.center if point is None else np.asarray(point, dtype=float)
    if float(body.gauge(point)) >= 1.0 - tol.margin:
        raise PointNotInterior("the point must lie in the interior of the body")
    epsilon = float(epsilon)
    if not epsilon > 0:
        raise GeometryError(f"slab width must be positive, got {epsilon}")

    normals = sphere_directions(body.dim, planes, seed)
    run = CheckRun("basico", {"body": body}, tol, seed, {
        "point": point,
        "epsilon": epsilon,
        "slab_planes": sampling.slab_planes,
    })
    run.samples.update({"planes": planes, "slab_planes": sampling.slab_planes, "curve": count})
    run.note(UNIFORM_EPSILON_NOTE)

    found: Dict[str, Any] = {}

    def slabs() -> Measure:
        def one(n):
            central = Hyperplane.through(point, n)
            return (
                symmetric_section(body, central, tol),
                [symmetric_section(body, g, tol) for g in Slab.around(central, epsilon).planes(sampling.slab_planes)],
            )

        rows = map_samples(one, list(normals))
        found["central"] = [row[0] for row in rows]
        found["slab"] = [s for row in rows for s in row[1]]
        every = found["central"] + found["slab"]
        k, residual = worst(s.symmetry.residual for s in every)
        return Measure(
            residual,
            {"normal": every[k].plane.normal, "offset": every[k].plane.offset},
            all(s.symmetry.symmetric for s in every),
        )

    stage = run.evaluate("slab_sections_symmetric", HYPOTHESIS, tol.symmetry, slabs)

    central = found.get("central", [])
    offsets = [float(np.linalg.norm(s.center - point)) / body.diameter for s in central]
    fct_case = stage.passed and bool(offsets) and max(offsets) > tol.symmetry
    if fct_case:
        run.note(FCT_NOTE)
        run.implication("False Centre Theorem: symmetric sections through a point not their centre imply an ellipsoid")
        run.skip("shadow_inclusion", CLAIM, "FCT-case")
    elif symmetry_residual(body, point, sampling.directions, seed) > tol.symmetry:
        run.skip("shadow_inclusion", CLAIM, "body is not centrally symmetric about the point")
    else:
        def inclusion() -> Measure:
            if "slab" not in found:
                raise GeometryError("slab sections were not computed")
            lowest, witness = np.inf, {}
            for s in found["slab"]:
                u = 2.0 * point - 2.0 * s.center
                along = float(s.plane.normal @ u)
                if np.linalg.norm(u) <= 1e-9 * body.diameter or abs(along) <= 1e-12 * np.linalg.norm(u):
                    continue
                shadow = shadow_boundary(body, u, count, seed).points
                t = (s.plane.offset - shadow @ s.plane.normal) / along
                projected = shadow + np.outer(t, u)
                value = float(np.min(s.section.norm(s.section.to_local(projected)))) - 1.0
                if value < lowest:
                    lowest, witness = value, {"normal": s.plane.normal, "offset": s.plane.offset, "u": u}
            if not np.isfinite(lowest):
                raise GeometryError("every sampled slab plane is central")
            return Measure(lowest, witness)

        run.evaluate("shadow_inclusion", CLAIM, -tol.tangency, inclusion, bound=Bound.LOWER)
        run.implication("symmetric slab sections with the shadow inclusion imply an ellipsoid (trusted)")

    ellipsoid_stage(run, "ellipsoid", body, tol, sampling.directions, seed)
    return run.finish()


# ---------------------------------------------------------------------------
# Central sections that are Radon curves
# ---------------------------------------------------------------------------

def central_sections(body: ConvexBody, planes: int, seed: int) -> List[PlanarSection]:
    """Sections by planes through the center: hyperplanes in 3-D, random 2-frames above."""

    c = body.center
    if body.dim == 3:
        return [section(body, Hyperplane(n, float(n @ c))) for n in sphere_directions(3, planes, seed)]
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(planes):
        q, _ = np.linalg.qr(rng.standard_normal((body.dim, 2)))
        out.append(section(body, Chart(c, q.T)))
    return out


def check_theorem_radon(
    body: ConvexBody,
    planes: Optional[int] = None,
    count: Optional[int] = None,
    seed: Optional[int] = None,
    tolerances: Optional[Tolerances] = None,
) -> CheckReport:
    """Radon curves as sections through the center of a symmetric ``body``."""

    sampling = get_sampling()
    planes = DEFAULT_PLANES if planes is None else planes
    count = sampling.diameters if count is None else count
    seed = sampling.seed if seed is None else seed
    tol = get_tolerances() if tolerances is None else tolerances
    if body.dim < 3:
        raise GeometryError("central sections need dimension >= 3")
    require_o_symmetric(body, tol, sampling.directions, seed)
    run = CheckRun("radon", {"body": body}, tol, seed)
    run.samples.update({"planes": planes, "diameters": count, "boundary": sampling.directions})

    found: Dict[str, Any] = {}

    def radon() -> Measure:
        results = map_samples(
            lambda sec: is_radon_curve(sec, count, tol.conjugacy, tol.symmetry), central_sections(body, planes, seed),
        )
        found["results"] = results
        k, defect = worst(r.conjugacy_defect for r in results)
        return Measure(defect, results[k].as_dict(), all(r.radon for r in results))

    run.evaluate("sections_radon", HYPOTHESIS, tol.conjugacy, radon)

    if not body.smooth:
        run.skip("normality_symmetric", CLAIM, f"{body.kind} sections have no unique normals")
    else:
        def normality() -> Measure:
            if "results" not in found:
                raise GeometryError("Radon sweeps were not computed")
            dips = [np.inf if r.normality_dip is None else r.normality_dip for r in found["results"]]
            k, dip = worst(dips)
            return Measure(dip, {"section": k, "witness_angle": found["results"][k].normality_witness})

        run.evaluate("normality_symmetric", CLAIM, tol.normality, normality)

    ellipsoid_stage(run, "ellipsoid", body, tol, sampling.directions, seed)
    run.implication("central sections that are Radon curves imply an ellipsoid in dimension three and up (trusted)")
    return run.finish()


__all__ = [
    "DEFAULT_PLANES",
    "DEFAULT_TANGENTS",
    "FCT_NOTE",
    "SymmetricSection",
    "TangentSections",
    "UNIFORM_EPSILON_NOTE",
    "central_sections",
    "check_theorem4",
    "check_theorem_basico",
    "check_theorem_radon",
    "symmetric_section",
]
