"""Support cones from exterior points and the curves they cut out."""

from .curves import MIN_CURVE_SAMPLES, CurveSample, HalfPlaneFan
from .predicates import ConeSymmetry, centered_section, is_ellipsoidal_cone, is_symmetric_cone
from .support import (
    SupportCone,
    cone_intersection,
    cone_surface_residual,
    graze,
    graze_planarity,
    is_planar,
    section_curve,
    shadow_boundary,
    shadow_planarity,
    support_cone,
    tangency_residual,
)
from .supporting import SupportingPlanes, common_supporting_planes, contact_chord_residual

__all__ = [
    "ConeSymmetry",
    "CurveSample",
    "HalfPlaneFan",
    "MIN_CURVE_SAMPLES",
    "SupportCone",
    "SupportingPlanes",
    "centered_section",
    "common_supporting_planes",
    "cone_intersection",
    "cone_surface_residual",
    "contact_chord_residual",
    "graze",
    "graze_planarity",
    "is_ellipsoidal_cone",
    "is_planar",
    "is_symmetric_cone",
    "section_curve",
    "shadow_boundary",
    "shadow_planarity",
    "support_cone",
    "tangency_residual",
]
