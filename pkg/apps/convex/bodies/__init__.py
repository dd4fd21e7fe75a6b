"""Convex bodies as support, gauge and boundary oracles."""

from .affine import AffineImage
from .base import ConvexBody
from .ellipsoid import Ellipsoid
from .ops import (
    Chord,
    OracleCheck,
    flat_interior_point,
    interior_point_on_line,
    is_o_symmetric,
    line_boundary_points,
    midpoint_hyperplane_residual,
    oracle_checks,
    support_point,
    symmetry_residual,
)
from .pball import PBall
from .polytope import Polytope
from .registry import body_registry
from .specs import dump_body_spec, load_body_spec, parse_body_spec

__all__ = [
    "AffineImage",
    "Chord",
    "ConvexBody",
    "Ellipsoid",
    "OracleCheck",
    "PBall",
    "Polytope",
    "body_registry",
    "dump_body_spec",
    "flat_interior_point",
    "interior_point_on_line",
    "is_o_symmetric",
    "line_boundary_points",
    "load_body_spec",
    "midpoint_hyperplane_residual",
    "oracle_checks",
    "parse_body_spec",
    "support_point",
    "symmetry_residual",
]
