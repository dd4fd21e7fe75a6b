"""Convex bodies exposed through oracles.

Every body has a reference ``center`` in its interior. The gauge is the
Minkowski functional of ``K - center`` so radial boundary points are exact for
every kind. ``support`` is positively homogeneous and accepts any non-zero
direction; ``support_point`` is homogeneous of degree zero.

All oracles take a single vector ``(n,)`` or a stack ``(m, n)`` and return the
matching shape.
"""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from functools import cached_property
from typing import Any, ClassVar, Dict, Optional

import numpy as np

from apps.convex.errors import NonSmoothBody, PointNotInterior
from apps.convex.geometry.projective import AffineMap, _frozen
from apps.convex.geometry.roots import bisect_sign
from apps.convex.geometry.sampling import sphere_directions

logger = logging.getLogger(__name__)

_DIAMETER_DIRECTIONS = 2048


def as_rows(x, dim: int):
    """Return ``(rows, single)`` where ``rows`` is ``(m, dim)``."""

    arr = np.asarray(x, dtype=float)
    single = arr.ndim == 1
    rows = np.atleast_2d(arr)
    if rows.shape[-1] != dim:
        raise ValueError(f"expected vectors of dimension {dim}, got shape {arr.shape}")
    return rows, single


def _out(values: np.ndarray, single: bool):
    return values[0] if single else values


class ConvexBody(ABC):
    """Base class of all body kinds.

    Subclasses implement :meth:`support`, :meth:`support_point`,
    :meth:`gauge` and :meth:`to_spec`; smooth kinds also implement
    :meth:`normal`. Closed forms for :meth:`exit_parameter` are optional.
    """

    kind: ClassVar[str] = ""
    smooth: ClassVar[bool] = True

    def __init__(self, center, name: Optional[str] = None):
        center = _frozen(center, ndim=1)
        if center.size < 2:
            raise ValueError("bodies need dimension n >= 2")
        self.center = center
        self.name = name

    @property
    def dim(self) -> int:
        return self.center.size

    # -- oracles ---------------------------------------------------------

    @abstractmethod
    def support(self, u):
        """Support function ``h(u) = max <x, u>`` over the body."""

    @abstractmethod
    def support_point(self, u):
        """A maximizer of ``<x, u>`` over the body."""

    @abstractmethod
    def gauge(self, x):
        """Minkowski functional of ``K - center`` evaluated at ``x - center``."""

    def normal(self, p):
        """Outer unit normal at boundary point(s) ``p``."""

        raise NonSmoothBody(f"{self.kind} bodies have no unique boundary normal")

    def contains(self, x, tol: float = 1e-10):
        return self.gauge(x) <= 1.0 + tol

    def boundary_residual(self, x):
        return np.abs(self.gauge(x) - 1.0)

    def radial_point(self, directions):
        """Boundary point(s) ``center + t d`` with ``t > 0``."""

        d, single = as_rows(directions, self.dim)
        g = self.gauge(self.center + d)
        return _out(self.center + d / g[:, None], single)

    def boundary_points(self, count: int, seed: int = 0) -> np.ndarray:
        return self.radial_point(sphere_directions(self.dim, count, seed))

    def exit_parameter(self, origin, directions):
        """Largest ``t`` with ``origin + t d`` in the body, for interior ``origin``.

        ``directions`` need not be unit; ``origin`` may be a single point or
        one point per direction.
        """

        d, single = as_rows(directions, self.dim)
        o = np.broadcast_to(np.asarray(origin, dtype=float), d.shape)
        if np.any(self.gauge(o) >= 1.0):
            raise PointNotInterior("ray origin must lie in the interior of the body")
        return _out(self._exit_parameter(o, d), single)

    def _exit_parameter(self, o: np.ndarray, d: np.ndarray) -> np.ndarray:
        hi = 2.0 * self.diameter / np.linalg.norm(d, axis=1)
        return bisect_sign(lambda t: self.gauge(o + t[:, None] * d) - 1.0, np.zeros(len(d)), hi, iterations=80)

    def ray_exit(self, origin, directions):
        """Boundary point(s) where rays from interior ``origin`` leave the body."""

        d, single = as_rows(directions, self.dim)
        t = np.atleast_1d(self.exit_parameter(origin, d))
        o = np.broadcast_to(np.asarray(origin, dtype=float), d.shape)
        return _out(o + t[:, None] * d, single)

    def line_parameters(self, point, direction) -> Optional[np.ndarray]:
        """Closed-form ``(t1, t2)`` of the boundary on a line, ``None`` if it misses.

        Returns ``NotImplemented`` for kinds without a closed form.
        """

        return NotImplemented

    @cached_property
    def diameter(self) -> float:
        u = sphere_directions(self.dim, _DIAMETER_DIRECTIONS, seed=1)
        return float(np.max(self.support(u) + self.support(-u)))

    def transformed(self, amap: AffineMap) -> "ConvexBody":
        from .affine import AffineImage

        return AffineImage(amap, self)

    # -- serialization ---------------------------------------------------

    @abstractmethod
    def parameters(self) -> Dict[str, Any]:
        """Kind-specific fields of the body specification document."""

    def to_spec(self) -> Dict[str, Any]:
        spec: Dict[str, Any] = {"kind": self.kind, "dimension": self.dim}
        if self.name:
            spec["name"] = self.name
        spec.update(self.parameters())
        return spec

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<{type(self).__name__}{label} n={self.dim}>"


__all__ = ["ConvexBody", "as_rows"]
