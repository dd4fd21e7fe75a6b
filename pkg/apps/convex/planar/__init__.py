"""Two-dimensional section analytics: symmetry, diameters, normality, Radon curves."""

from .diameters import (
    CentralSymmetry,
    affine_diameter_defect,
    central_symmetry,
    conjugate_chords,
    conjugate_diameter,
    is_affine_diameter,
)
from .radon import RadonResult, as_normed_plane, birkhoff_normal, is_radon_curve, normality_dip
from .section import PlanarSection, birkhoff_pair, diameter_through_center, perpendicular, section

__all__ = [
    "CentralSymmetry",
    "PlanarSection",
    "RadonResult",
    "affine_diameter_defect",
    "as_normed_plane",
    "birkhoff_normal",
    "birkhoff_pair",
    "central_symmetry",
    "conjugate_chords",
    "conjugate_diameter",
    "diameter_through_center",
    "is_affine_diameter",
    "is_radon_curve",
    "normality_dip",
    "perpendicular",
    "section",
]
