"""Theorem checks: staged, falsifiable reports on sampled configurations."""

from .apex import check_theorem1, check_theorem2, check_theorem3, partner_plane
from .poles import PoleKind, PoleResult, check_pole, polar_of
from .refinement import RefinementResult, compare_refinement, family_body, sweep_family
from .registry import CheckRegistry, CheckSpec, check_registry
from .report import SCHEMA, Bound, CheckReport, CheckRun, Measure, Outcome, Stage, StageRole, Verdict
from .sections import check_theorem4, check_theorem_basico, check_theorem_radon

__all__ = [
    "Bound",
    "CheckRegistry",
    "CheckReport",
    "CheckRun",
    "CheckSpec",
    "Measure",
    "Outcome",
    "PoleKind",
    "PoleResult",
    "RefinementResult",
    "SCHEMA",
    "Stage",
    "StageRole",
    "Verdict",
    "check_pole",
    "check_registry",
    "check_theorem1",
    "check_theorem2",
    "check_theorem3",
    "check_theorem4",
    "check_theorem_basico",
    "check_theorem_radon",
    "compare_refinement",
    "family_body",
    "partner_plane",
    "polar_of",
    "sweep_family",
]
