"""Exceptions raised by the convex geometry library.

Every failure that callers may want to distinguish has its own class; all of
them derive from :class:`GeometryError`, which is a ``ValueError`` so generic
input validation code keeps working.
"""

from __future__ import annotations

from typing import Optional


class GeometryError(ValueError):
    """Base class for all library errors."""


# --- projective primitives and fitting -------------------------------------

class NonCollinear(GeometryError):
    pass


class DegenerateQuadruple(GeometryError):
    pass


class DegenerateCloud(GeometryError):
    pass


class NotCoplanar(GeometryError):
    pass


class InsufficientSamples(GeometryError):
    pass


# --- bodies ----------------------------------------------------------------

class LineMissesBody(GeometryError):
    pass


class NonSmoothBody(GeometryError):
    pass


class PointNotInterior(GeometryError):
    pass


class BodySpecError(GeometryError):
    """A body specification document could not be parsed.

    ``field`` names the offending key (dotted for nested bodies) and ``line``
    the 1-based line of the document when it is known.
    """

    def __init__(self, message: str, field: Optional[str] = None, line: Optional[int] = None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field:
            where.append(f"field '{field}'")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


# --- cones -----------------------------------------------------------------

class ApexInsideBody(GeometryError):
    pass


class LineMeetsBody(GeometryError):
    pass


class CoincidentApexes(GeometryError):
    pass


class DegenerateCone(GeometryError):
    pass


class RayNotInterior(GeometryError):
    pass


class NotEllipsoidal(GeometryError):
    pass


# --- planar sections -------------------------------------------------------

class PlaneMissesBody(GeometryError):
    pass


class EndpointNotOnBoundary(GeometryError):
    pass


class DegenerateChord(GeometryError):
    pass


class NotAffineDiameter(GeometryError):
    def __init__(self, message: str, defect: float):
        self.defect = defect
        super().__init__(f"{message} (defect {defect:.3e})")


class ConjugateNotFound(GeometryError):
    def __init__(self, message: str, defect: float):
        self.defect = defect
        super().__init__(f"{message} (closure defect {defect:.3e})")


class NotANorm(GeometryError):
    pass


# --- theorem harness -------------------------------------------------------

class PointOnBoundary(GeometryError):
    pass


class DegenerateLines(GeometryError):
    pass


class BodiesNotNested(GeometryError):
    pass


class SearchFailed(GeometryError):
    def __init__(self, message: str, defect: float):
        self.defect = defect
        super().__init__(f"{message} (minimal defect {defect:.3e})")


class NotOSymmetric(GeometryError):
    pass


class BallTooLarge(GeometryError):
    pass


__all__ = [
    "GeometryError",
    "NonCollinear",
    "DegenerateQuadruple",
    "DegenerateCloud",
    "NotCoplanar",
    "InsufficientSamples",
    "LineMissesBody",
    "NonSmoothBody",
    "PointNotInterior",
    "BodySpecError",
    "ApexInsideBody",
    "LineMeetsBody",
    "CoincidentApexes",
    "DegenerateCone",
    "RayNotInterior",
    "NotEllipsoidal",
    "PlaneMissesBody",
    "EndpointNotOnBoundary",
    "DegenerateChord",
    "NotAffineDiameter",
    "ConjugateNotFound",
    "NotANorm",
    "PointOnBoundary",
    "DegenerateLines",
    "BodiesNotNested",
    "SearchFailed",
    "NotOSymmetric",
    "BallTooLarge",
]
