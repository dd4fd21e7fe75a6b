from __future__ import annotations

from typing import Any, Dict, Optional

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from apps.convex.errors import GeometryError
from apps.convex.geometry.projective import _frozen

from .base import ConvexBody, _out, as_rows


class Polytope(ConvexBody):
    """Convex hull of a vertex list.

    Support evaluation is a max over vertices; gauge and ray exits use the
    facet inequalities ``a . x + b <= 0`` computed by Qhull. The reference
    center is the mean of the hull vertices.
    """

    kind = "polytope"
    smooth = False

    def __init__(self, vertices, name: Optional[str] = None):
        verts = _frozen(vertices, ndim=2)
        try:
            hull = ConvexHull(verts)
        except QhullError as exc:
            raise GeometryError(f"polytope vertices do not span a full-dimensional hull: {exc}") from exc
        super().__init__(verts[hull.vertices].mean(axis=0), name=name)
        self.vertices = verts
        self.hull_vertices = _frozen(verts[hull.vertices])
        normals = hull.equations[:, :-1]
        offsets = hull.equations[:, -1]
        self._normals = normals
        self._offsets = offsets
        # facet distance from the center, positive for an interior center
        self._slack = -(normals @ self.center + offsets)

    @classmethod
    def simplex(cls, dim: int = 3, name: Optional[str] = None) -> "Polytope":
        return cls(np.vstack([np.zeros(dim), np.eye(dim)]), name=name)

    @classmethod
    def cube(cls, dim: int = 3, half_width: float = 1.0, name: Optional[str] = None) -> "Polytope":
        corners = np.array(np.meshgrid(*[[-1.0, 1.0]] * dim, indexing="ij")).reshape(dim, -1).T
        return cls(half_width * corners, name=name)

    def support(self, u):
        u, single = as_rows(u, self.dim)
        return _out(np.max(u @ self.hull_vertices.T, axis=1), single)

    def support_point(self, u):
        u, single = as_rows(u, self.dim)
        return _out(self.hull_vertices[np.argmax(u @ self.hull_vertices.T, axis=1)], single)

    def gauge(self, x):
        x, single = as_rows(x, self.dim)
        ratios = (x - self.center) @ self._normals.T / self._slack
        return _out(np.maximum(np.max(ratios, axis=1), 0.0), single)

    def _exit_parameter(self, o, d):
        slack = -(o @ self._normals.T + self._offsets)
        rate = d @ self._normals.T
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(rate > 0, slack / rate, np.inf)
        return np.min(t, axis=1)

    def parameters(self) -> Dict[str, Any]:
        return {"vertices": [[float(v) for v in row] for row in self.vertices]}
