"""Dimension-generic affine/projective primitives and least-squares fits."""

from .fitting import (
    Classification,
    FitResult,
    conic_center,
    conic_matrix,
    conic_polar_line,
    fit_hyperplane,
    fit_planar_conic,
    fit_quadric,
    quadric_matrix,
)
from .projective import (
    AffineMap,
    Chart,
    HPoint,
    Hyperplane,
    Line,
    ProjectiveMap,
    Slab,
    complement_basis,
    cross_ratio,
    harmonic_conjugate,
)
from .roots import bisect_sign, golden_minimize
from .sampling import circle_frame, cloud_diameter, hausdorff, sphere_directions

__all__ = [
    "AffineMap",
    "Chart",
    "Classification",
    "FitResult",
    "HPoint",
    "Hyperplane",
    "Line",
    "ProjectiveMap",
    "Slab",
    "bisect_sign",
    "circle_frame",
    "cloud_diameter",
    "complement_basis",
    "conic_center",
    "conic_matrix",
    "conic_polar_line",
    "cross_ratio",
    "fit_hyperplane",
    "fit_planar_conic",
    "fit_quadric",
    "golden_minimize",
    "harmonic_conjugate",
    "hausdorff",
    "quadric_matrix",
    "sphere_directions",
]
