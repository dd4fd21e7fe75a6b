from __future__ import annotations

from typing import Any, Dict, Optional

import numpy as np

from apps.convex.errors import GeometryError
from apps.convex.geometry.projective import AffineMap, _frozen

from .base import ConvexBody, _out, as_rows


class Ellipsoid(ConvexBody):
    """``{x : (x - c)^T Q (x - c) <= 1}`` with ``Q`` symmetric positive definite."""

    kind = "ellipsoid"

    def __init__(self, center, shape, name: Optional[str] = None):
        super().__init__(center, name=name)
        q = _frozen(shape, ndim=2)
        if q.shape != (self.dim, self.dim):
            raise GeometryError(f"shape matrix must be {self.dim}x{self.dim}, got {q.shape}")
        if np.max(np.abs(q - q.T)) > 1e-12 * max(1.0, np.max(np.abs(q))):
            raise GeometryError("shape matrix must be symmetric")
        eig = np.linalg.eigvalsh(q)
        if eig[0] <= 0:
            raise GeometryError(f"shape matrix must be positive definite (smallest eigenvalue {eig[0]:.3e})")
        self.shape = q
        inv = np.linalg.inv(q)
        self._inverse = (inv + inv.T) / 2.0

    @classmethod
    def ball(cls, radius: float = 1.0, center=None, dim: int = 3, name: Optional[str] = None) -> "Ellipsoid":
        if radius <= 0:
            raise GeometryError("ball radius must be positive")
        c = np.zeros(dim) if center is None else np.asarray(center, dtype=float)
        return cls(c, np.eye(c.size) / radius ** 2, name=name)

    @classmethod
    def from_affine(cls, amap: AffineMap, name: Optional[str] = None) -> "Ellipsoid":
        """Image of the unit ball under ``amap``."""

        a = amap.linear
        q = np.linalg.inv(a @ a.T)
        return cls(amap.translation, (q + q.T) / 2.0, name=name)

    def support(self, u):
        u, single = as_rows(u, self.dim)
        quad = np.einsum("ij,jk,ik->i", u, self._inverse, u)
        return _out(u @ self.center + np.sqrt(quad), single)

    def support_point(self, u):
        u, single = as_rows(u, self.dim)
        w = u @ self._inverse
        quad = np.einsum("ij,ij->i", w, u)
        return _out(self.center + w / np.sqrt(quad)[:, None], single)

    def gauge(self, x):
        x, single = as_rows(x, self.dim)
        y = x - self.center
        return _out(np.sqrt(np.maximum(np.einsum("ij,jk,ik->i", y, self.shape, y), 0.0)), single)

    def normal(self, p):
        p, single = as_rows(p, self.dim)
        g = (p - self.center) @ self.shape
        return _out(g / np.linalg.norm(g, axis=1, keepdims=True), single)

    def _quadratic(self, o: np.ndarray, d: np.ndarray):
        y = o - self.center
        a = np.einsum("ij,jk,ik->i", d, self.shape, d)
        b = np.einsum("ij,jk,ik->i", d, self.shape, y)
        c = np.einsum("ij,jk,ik->i", y, self.shape, y) - 1.0
        return a, b, c

    def _exit_parameter(self, o, d):
        a, b, c = self._quadratic(o, d)
        # c < 0, so the larger root is positive and free of cancellation
        return (-b + np.sqrt(b * b - a * c)) / a

    def line_parameters(self, point, direction):
        a, b, c = self._quadratic(np.atleast_2d(point), np.atleast_2d(direction))
        disc = float(b[0] * b[0] - a[0] * c[0])
        if disc <= 0:
            return None
        root = np.sqrt(disc)
        return np.array([(-b[0] - root) / a[0], (-b[0] + root) / a[0]])

    def transformed(self, amap: AffineMap) -> "Ellipsoid":
        inv = np.linalg.inv(amap.linear)
        q = inv.T @ self.shape @ inv
        return Ellipsoid(amap(self.center), (q + q.T) / 2.0, name=self.name)

    def parameters(self) -> Dict[str, Any]:
        return {
            "center": [float(v) for v in self.center],
            "matrix": [[float(v) for v in row] for row in self.shape],
        }
