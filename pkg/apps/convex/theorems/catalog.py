"""Registration of the theorem checks with a :class:`CheckRegistry`."""

from __future__ import annotations

from .apex import check_theorem1, check_theorem2, check_theorem3
from .poles import check_pole
from .registry import CheckRegistry
from .sections import check_theorem4, check_theorem_basico, check_theorem_radon


def register(registry: CheckRegistry):
    registry.register(
        "t1", check_theorem1, ("inner", "outer"), "apexes",
        "ellipsoidal support cones of an O-symmetric body from every point of an enclosing boundary",
    )
    registry.register(
        "t2", check_theorem2, ("inner", "outer"), "apexes",
        "cone intersections from collinear apex pairs lying on sections of the outer body",
    )
    registry.register(
        "t3", check_theorem3, ("inner", "outer"), "apexes",
        "every apex on the outer body a pole of the inner one",
    )
    registry.register(
        "t4", check_theorem4, ("body",), "tangents",
        "ellipse sections by the tangent planes of an inner ball",
    )
    registry.register(
        "basico", check_theorem_basico, ("body",), "planes",
        "centrally symmetric sections in slabs around the planes through a point",
    )
    registry.register(
        "radon", check_theorem_radon, ("body",), "planes",
        "central sections that are Radon curves",
    )
    registry.register(
        "pole", check_pole, ("body",), "lines",
        "pole and polar of a point, with the graze in the polar",
    )
