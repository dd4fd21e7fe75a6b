"""Preconditions and shared stages of the theorem checks.

The point ``O`` of the characterizations is the reference center of the
body it belongs to, so affine images of a configuration keep their gates.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from apps.convex.bodies.base import ConvexBody
from apps.convex.bodies.ops import symmetry_residual
from apps.convex.conf import Tolerances
from apps.convex.errors import BodiesNotNested, GeometryError, NotOSymmetric
from apps.convex.geometry.fitting import FitResult, fit_quadric

from .report import CheckRun, Measure, Stage, StageRole


def require_dimension(body: ConvexBody, dim: int, check: str):
    if body.dim != dim:
        raise GeometryError(f"{check} runs on {dim}-dimensional bodies, got dimension {body.dim}")


def nesting_gap(inner: ConvexBody, outer: ConvexBody, count: int, seed: int) -> float:
    """``1 - max gauge_outer`` over sampled boundary points of ``inner``."""

    return 1.0 - float(np.max(outer.gauge(inner.boundary_points(count, seed))))


def require_nested(inner: ConvexBody, outer: ConvexBody, tol: Tolerances, count: int, seed: int) -> float:
    """Raise ``BodiesNotNested`` unless ``inner`` lies in the interior of ``outer``."""

    if inner.dim != outer.dim:
        raise BodiesNotNested(f"bodies have dimensions {inner.dim} and {outer.dim}")
    gap = nesting_gap(inner, outer, count, seed)
    if gap <= tol.margin:
        raise BodiesNotNested(f"inner body is not inside the outer one (gap {gap:.3e})")
    return gap


def require_o_symmetric(
    body: ConvexBody,
    tol: Tolerances,
    count: int,
    seed: int,
    label: str = "body",
    center=None,
) -> float:
    """Raise ``NotOSymmetric`` unless ``body`` is symmetric about ``center`` (default: its own center)."""

    center = body.center if center is None else np.asarray(center, dtype=float)
    residual = symmetry_residual(body, center, count, seed)
    if residual > tol.symmetry:
        raise NotOSymmetric(f"{label} is not symmetric about {np.round(center, 9).tolist()} (residual {residual:.3e})")
    return residual


def fit_body(body: ConvexBody, tol: Tolerances, count: int, seed: int) -> FitResult:
    return fit_quadric(body.boundary_points(count, seed), tol.ellipse)


def ellipsoid_stage(
    run: CheckRun,
    name: str,
    body: ConvexBody,
    tol: Tolerances,
    count: int,
    seed: int,
    role: StageRole = StageRole.CONCLUSION,
) -> Optional[Stage]:
    """Quadric fit of sampled boundary points; passes when classified an ellipsoid."""

    def compute() -> Measure:
        fit = fit_body(body, tol, count, seed)
        witness = fit.as_dict()
        if fit.shape is not None:
            witness["shape"] = [list(row) for row in fit.shape]
        return Measure(fit.rms_residual, witness, fit.is_ellipse)

    return run.evaluate(name, role, tol.ellipse, compute)


__all__ = [
    "ellipsoid_stage",
    "fit_body",
    "nesting_gap",
    "require_dimension",
    "require_nested",
    "require_o_symmetric",
]
