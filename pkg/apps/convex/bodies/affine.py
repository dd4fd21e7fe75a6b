from __future__ import annotations

from typing import Any, Dict, Optional

import numpy as np

from apps.convex.geometry.projective import AffineMap

from .base import ConvexBody, _out, as_rows


class AffineImage(ConvexBody):
    """``A K + b`` for an invertible affine map and an inner body ``K``.

    Oracles pull back to the inner body: ``h(u) = h_K(A^T u) + <b, u>`` and
    ``gauge(x) = gauge_K(A^{-1}(x - b))``.
    """

    kind = "affine_image"

    def __init__(self, amap: AffineMap, inner: ConvexBody, name: Optional[str] = None):
        if amap.dim != inner.dim:
            raise ValueError(f"map of dimension {amap.dim} cannot act on a body of dimension {inner.dim}")
        super().__init__(amap(inner.center), name=name)
        self.map = amap
        self.inner = inner
        self._pullback = amap.inverse()

    @property
    def smooth(self) -> bool:
        return self.inner.smooth

    def support(self, u):
        u, single = as_rows(u, self.dim)
        return _out(self.inner.support(u @ self.map.linear) + u @ self.map.translation, single)

    def support_point(self, u):
        u, single = as_rows(u, self.dim)
        return _out(self.map(self.inner.support_point(u @ self.map.linear)), single)

    def gauge(self, x):
        x, single = as_rows(x, self.dim)
        return _out(self.inner.gauge(self._pullback(x)), single)

    def normal(self, p):
        p, single = as_rows(p, self.dim)
        g = self.inner.normal(self._pullback(p)) @ self._pullback.linear
        return _out(g / np.linalg.norm(g, axis=1, keepdims=True), single)

    def _exit_parameter(self, o, d):
        return self.inner._exit_parameter(self._pullback(o), d @ self._pullback.linear.T)

    def line_parameters(self, point, direction):
        return self.inner.line_parameters(
            self._pullback(np.asarray(point, dtype=float)),
            np.asarray(direction, dtype=float) @ self._pullback.linear.T,
        )

    def parameters(self) -> Dict[str, Any]:
        return {
            "matrix": [[float(v) for v in row] for row in self.map.linear],
            "offset": [float(v) for v in self.map.translation],
            "inner": self.inner.to_spec(),
        }
