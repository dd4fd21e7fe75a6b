from __future__ import annotations

import math
from typing import Any, Dict, Optional

import numpy as np

from apps.convex.errors import GeometryError
from apps.convex.geometry.projective import _frozen

from .base import ConvexBody, _out, as_rows


class PBall(ConvexBody):
    """``{x : sum |(x_i - c_i) / a_i|^p <= 1}`` for ``1 < p < inf``.

    The dual exponent ``q = p / (p - 1)`` gives the support function
    ``<c, u> + ||a * u||_q``.
    """

    kind = "pball"

    def __init__(self, exponent: float, semi_axes, center=None, name: Optional[str] = None):
        axes = _frozen(semi_axes, ndim=1)
        super().__init__(np.zeros(axes.size) if center is None else center, name=name)
        if axes.size != self.dim:
            raise GeometryError("semi_axes and center must have the same dimension")
        if np.any(axes <= 0):
            raise GeometryError("semi-axes must be positive")
        p = float(exponent)
        if not (p > 1.0 and math.isfinite(p)):
            raise GeometryError(f"exponent must satisfy 1 < p < inf, got {exponent}")
        self.exponent = p
        self.dual = p / (p - 1.0)
        self.semi_axes = axes

    @classmethod
    def lp_ball(cls, p: float, dim: int = 3, radius: float = 1.0, name: Optional[str] = None) -> "PBall":
        return cls(p, np.full(dim, float(radius)), name=name)

    def _scaled(self, u: np.ndarray) -> np.ndarray:
        return u * self.semi_axes

    def support(self, u):
        u, single = as_rows(u, self.dim)
        w = np.abs(self._scaled(u))
        return _out(u @ self.center + np.linalg.norm(w, ord=self.dual, axis=1), single)

    def support_point(self, u):
        u, single = as_rows(u, self.dim)
        w = self._scaled(u)
        q = self.dual
        norm = np.linalg.norm(w, ord=q, axis=1, keepdims=True)
        z = np.sign(w) * (np.abs(w) / norm) ** (q - 1.0)
        return _out(self.center + self.semi_axes * z, single)

    def gauge(self, x):
        x, single = as_rows(x, self.dim)
        y = np.abs((x - self.center) / self.semi_axes)
        return _out(np.linalg.norm(y, ord=self.exponent, axis=1), single)

    def normal(self, p):
        p, single = as_rows(p, self.dim)
        y = (p - self.center) / self.semi_axes
        scale = np.max(np.abs(y), axis=1, keepdims=True)
        g = np.sign(y) * (np.abs(y) / scale) ** (self.exponent - 1.0) / self.semi_axes
        return _out(g / np.linalg.norm(g, axis=1, keepdims=True), single)

    def parameters(self) -> Dict[str, Any]:
        return {
            "exponent": self.exponent,
            "semi_axes": [float(v) for v in self.semi_axes],
            "center": [float(v) for v in self.center],
        }
