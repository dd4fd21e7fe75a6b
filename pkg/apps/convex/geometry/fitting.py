"""Least-squares fits used as numerical surrogates for "is planar" and
"is an ellipse / ellipsoid".

Residuals are scale-free: plane residuals are distances divided by the
diameter of the cloud, conic and quadric residuals are algebraic residuals
on coordinates normalized to unit RMS radius with a unit-norm coefficient
vector.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np

from apps.convex.conf import get_tolerances
from apps.convex.errors import DegenerateCloud, GeometryError, NotCoplanar
from apps.convex.geometry.projective import Chart, Hyperplane, _canonical_sign
from apps.convex.geometry.sampling import cloud_diameter

logger = logging.getLogger(__name__)

# Rank gates on singular values, relative to the largest one
_RANK_TOL = 1e-12
_NULLITY_TOL = 1e-9


class Classification(str, Enum):
    ELLIPSE = "ellipse"
    PARABOLA_OR_DEGENERATE = "parabola-or-degenerate"
    HYPERBOLA = "hyperbola"
    HYPERPLANE = "hyperplane"
    ELLIPSOID = "ellipsoid"
    REJECTED = "rejected"


@dataclass(frozen=True, eq=False)
class FitResult:
    """Outcome of a fit.

    ``model`` holds hyperplane coefficients ``(normal..., offset)``, the six
    conic coefficients ``(a, b, c, d, e, f)`` of ``aX^2+bXY+cY^2+dX+eY+f`` in
    the coordinates of ``chart``, or the unit-norm quadric coefficients.
    ``center`` and ``shape`` are filled for ellipses and ellipsoids
    (``shape`` is the matrix Q of ``(x-c)^T Q (x-c) <= 1``, in chart
    coordinates for conics).
    """

    model: Tuple[float, ...]
    rms_residual: float
    max_residual: float
    classification: Classification
    tolerance: Optional[float] = None
    chart: Optional[Chart] = None
    center: Optional[Tuple[float, ...]] = None
    shape: Optional[Tuple[Tuple[float, ...], ...]] = None

    @property
    def is_ellipse(self) -> bool:
        return self.classification in (Classification.ELLIPSE, Classification.ELLIPSOID)

    def hyperplane(self) -> Hyperplane:
        if self.classification is not Classification.HYPERPLANE:
            raise GeometryError("fit is not a hyperplane fit")
        return Hyperplane(np.array(self.model[:-1]), self.model[-1])

    def as_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "classification": self.classification.value,
            "rms_residual": self.rms_residual,
            "max_residual": self.max_residual,
            "model": list(self.model),
        }
        if self.tolerance is not None:
            out["tolerance"] = self.tolerance
        if self.center is not None:
            out["center"] = list(self.center)
        return out


def _as_cloud(points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2:
        raise DegenerateCloud(f"expected an (m, n) array of points, got shape {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise DegenerateCloud("point cloud contains non-finite values")
    return pts


def fit_hyperplane(points) -> FitResult:
    """Total-least-squares hyperplane through the centroid.

    The normal is the smallest principal direction of the centered scatter,
    signed so its largest component is positive.
    """

    pts = _as_cloud(points)
    m, n = pts.shape
    if m < n + 1:
        raise DegenerateCloud(f"need at least {n + 1} points, got {m}")
    diameter = cloud_diameter(pts)
    if diameter == 0:
        raise DegenerateCloud("all points coincide")
    centroid = pts.mean(axis=0)
    centered = pts - centroid
    _, s, vt = np.linalg.svd(centered, full_matrices=False)
    rank = int(np.sum(s > _RANK_TOL * s[0]))
    if rank < n - 1:
        raise DegenerateCloud(f"scatter rank {rank} < {n - 1}")
    normal = _canonical_sign(vt[-1])
    distances = centered @ normal
    rms = float(np.sqrt(np.mean(distances ** 2)) / diameter)
    worst = float(np.max(np.abs(distances)) / diameter)
    logger.debug("hyperplane fit: m=%s rms=%.3e max=%.3e", m, rms, worst)
    return FitResult(
        model=tuple(normal) + (float(normal @ centroid),),
        rms_residual=rms,
        max_residual=worst,
        classification=Classification.HYPERPLANE,
    )


# ---------------------------------------------------------------------------
# Conics
# ---------------------------------------------------------------------------

def conic_matrix(coefficients) -> np.ndarray:
    """Symmetric 3x3 matrix M with ``X^T M X = 0`` for ``X = (x, y, 1)``."""

    a, b, c, d, e, f = (float(v) for v in coefficients)
    return np.array([
        [a, b / 2, d / 2],
        [b / 2, c, e / 2],
        [d / 2, e / 2, f],
    ])


def _conic_coefficients(matrix: np.ndarray) -> np.ndarray:
    return np.array([
        matrix[0, 0], 2 * matrix[0, 1], matrix[1, 1],
        2 * matrix[0, 2], 2 * matrix[1, 2], matrix[2, 2],
    ])


def conic_center(coefficients) -> np.ndarray:
    m = conic_matrix(coefficients)
    return np.linalg.solve(m[:2, :2], -m[:2, 2])


def conic_polar_line(coefficients, point) -> np.ndarray:
    """Coefficients ``(alpha, beta, gamma)`` of the polar line of ``point``.

    The line is ``alpha*x + beta*y + gamma = 0``; it is the line at infinity
    when ``point`` is the conic's center.
    """

    return conic_matrix(coefficients) @ np.append(np.asarray(point, dtype=float), 1.0)


def _classify_conic(v: np.ndarray, rms: float, tol: float) -> Classification:
    if rms > tol:
        return Classification.REJECTED
    m = conic_matrix(v)
    a, b, c = v[0], v[1], v[2]
    disc = b * b - 4 * a * c
    gate = 1e-10 * (a * a + b * b + c * c + 1e-300)
    if disc < -gate:
        # a + c > 0 after sign normalization, so a, c > 0 here
        return Classification.ELLIPSE if np.linalg.det(m) < 0 else Classification.PARABOLA_OR_DEGENERATE
    if disc > gate:
        return Classification.HYPERBOLA
    return Classification.PARABOLA_OR_DEGENERATE


def fit_planar_conic(
    points,
    plane: Union[Hyperplane, Chart],
    tol: Optional[float] = None,
) -> FitResult:
    """Fit ``aX^2+bXY+cY^2+dX+eY+f = 0`` to coplanar points.

    ``plane`` is a hyperplane of ``R^3`` or any 2-dimensional :class:`Chart`.
    The "ellipse" verdict needs an algebraic residual below ``tol`` (default:
    the ``ellipse`` gate) and a negative discriminant with a real bounded
    normal form.
    """

    tol = get_tolerances().ellipse if tol is None else tol
    chart = plane.chart() if isinstance(plane, Hyperplane) else plane
    if chart.dim != 2:
        raise GeometryError(f"conic fits need a 2-dimensional chart, got dimension {chart.dim}")
    pts = _as_cloud(points)
    if len(pts) < 6:
        raise DegenerateCloud(f"need at least 6 points, got {len(pts)}")
    diameter = cloud_diameter(pts)
    if diameter == 0:
        raise DegenerateCloud("all points coincide")
    off_plane = float(np.max(chart.residual(pts)) / diameter)
    if off_plane > 1e-9:
        raise NotCoplanar(f"points leave the plane by {off_plane:.3e} (relative)")

    uv = chart.to_local(pts)
    mean = uv.mean(axis=0)
    scale = float(np.sqrt(np.mean(np.sum((uv - mean) ** 2, axis=1))))
    x, y = ((uv - mean) / scale).T
    design = np.column_stack([x * x, x * y, y * y, x, y, np.ones_like(x)])
    _, s, vt = np.linalg.svd(design, full_matrices=False)
    if s[-2] <= _NULLITY_TOL * s[0]:
        raise DegenerateCloud("conic is not determined by the points (collinear or too few distinct points)")
    v = vt[-1]
    if v[0] + v[2] < 0:
        v = -v
    r = design @ v
    rms = float(np.sqrt(np.mean(r ** 2)))
    worst = float(np.max(np.abs(r)))
    classification = _classify_conic(v, rms, tol)

    # back to chart coordinates: X = T (u, 1)
    t = np.array([
        [1 / scale, 0, -mean[0] / scale],
        [0, 1 / scale, -mean[1] / scale],
        [0, 0, 1],
    ])
    coefficients = _conic_coefficients(t.T @ conic_matrix(v) @ t)
    coefficients /= np.linalg.norm(coefficients)

    center = shape = None
    if classification is Classification.ELLIPSE:
        c2 = conic_center(coefficients)
        m = conic_matrix(coefficients)
        k = float(c2 @ m[:2, :2] @ c2 - m[2, 2])
        center = tuple(chart.to_global(c2))
        shape = tuple(map(tuple, m[:2, :2] / k))
    logger.debug("conic fit: m=%s rms=%.3e class=%s", len(pts), rms, classification.value)
    return FitResult(
        model=tuple(coefficients),
        rms_residual=rms,
        max_residual=worst,
        classification=classification,
        tolerance=tol,
        chart=chart,
        center=center,
        shape=shape,
    )


# ---------------------------------------------------------------------------
# Quadrics
# ---------------------------------------------------------------------------

def _quadric_design(x: np.ndarray) -> np.ndarray:
    m, n = x.shape
    rows, cols = np.triu_indices(n)
    quad = x[:, rows] * x[:, cols]
    return np.column_stack([quad, x, np.ones(m)])


def _unpack_quadric(v: np.ndarray, n: int):
    rows, cols = np.triu_indices(n)
    k = rows.size
    a = np.zeros((n, n))
    a[rows, cols] = v[:k]
    a = (a + a.T) / 2.0
    return a, v[k:k + n], float(v[-1])


def quadric_matrix(model, dim: int) -> np.ndarray:
    """Symmetric ``(dim+1)x(dim+1)`` matrix of a quadric or conic model.

    The layout matches :func:`fit_quadric` (and :func:`fit_planar_conic` for
    ``dim == 2``): upper-triangle quadratic terms with doubled off-diagonal
    weight, then linear terms, then the constant.
    """

    v = np.asarray(model, dtype=float)
    rows, cols = np.triu_indices(dim)
    k = rows.size
    m = np.zeros((dim + 1, dim + 1))
    m[rows, cols] = v[:k] * np.where(rows == cols, 1.0, 0.5)
    m[cols, rows] = m[rows, cols]
    m[:dim, dim] = m[dim, :dim] = v[k:k + dim] / 2.0
    m[dim, dim] = v[-1]
    return m


def fit_quadric(points, tol: Optional[float] = None) -> FitResult:
    """Fit ``x^T A x + b^T x + f = 0`` in ``R^n`` and test for an ellipsoid.

    The verdict "ellipsoid" needs the algebraic residual below ``tol`` (default:
    the ``ellipse`` gate), a definite quadratic part and a real interior.
    """

    tol = get_tolerances().ellipse if tol is None else tol
    pts = _as_cloud(points)
    m, n = pts.shape
    terms = n * (n + 1) // 2 + n + 1
    if m < terms:
        raise DegenerateCloud(f"need at least {terms} points, got {m}")
    mean = pts.mean(axis=0)
    scale = float(np.sqrt(np.mean(np.sum((pts - mean) ** 2, axis=1))))
    if scale == 0:
        raise DegenerateCloud("all points coincide")
    x = (pts - mean) / scale
    design = _quadric_design(x)
    _, s, vt = np.linalg.svd(design, full_matrices=False)
    if s[-2] <= _NULLITY_TOL * s[0]:
        raise DegenerateCloud("quadric is not determined by the points")
    v = vt[-1]
    a, b, f = _unpack_quadric(v, n)
    if np.trace(a) < 0:
        v, a, b, f = -v, -a, -b, -f
    r = design @ v
    rms = float(np.sqrt(np.mean(r ** 2)))
    worst = float(np.max(np.abs(r)))

    # original coordinates: x = mean + scale * X
    a_x = a / scale ** 2
    b_x = b / scale - 2 * a_x @ mean
    f_x = float(mean @ a_x @ mean - b @ mean / scale + f)
    rows, cols = np.triu_indices(n)
    model = np.concatenate([a_x[rows, cols] * np.where(rows == cols, 1.0, 2.0), b_x, [f_x]])
    model /= np.linalg.norm(model)

    eig = np.linalg.eigvalsh(a)
    center = shape = None
    classification = Classification.PARABOLA_OR_DEGENERATE
    if eig[0] > 1e-9 * eig[-1]:
        c = -0.5 * np.linalg.solve(a_x, b_x)
        k = float(c @ a_x @ c - f_x)
        if k > 0:
            classification = Classification.ELLIPSOID
            center = tuple(c)
            shape = tuple(map(tuple, a_x / k))
    if rms > tol:
        classification = Classification.REJECTED
    logger.debug("quadric fit: m=%s rms=%.3e class=%s", m, rms, classification.value)
    return FitResult(
        model=tuple(model),
        rms_residual=rms,
        max_residual=worst,
        classification=classification,
        tolerance=tol,
        center=center,
        shape=shape,
    )


__all__ = [
    "Classification",
    "FitResult",
    "fit_hyperplane",
    "fit_planar_conic",
    "fit_quadric",
    "conic_matrix",
    "conic_center",
    "conic_polar_line",
    "quadric_matrix",
]
