"""Deterministic direction sampling and point-cloud distances."""

from __future__ import annotations

import numpy as np
from scipy.spatial.distance import directed_hausdorff, pdist
from scipy.special import ndtri
from scipy.stats import qmc


def sphere_directions(dim: int, count: int, seed: int = 0) -> np.ndarray:
    """``count`` quasi-uniform unit vectors in ``R^dim``.

    Circles get evenly spaced angles with a seeded phase; higher dimensions map
    a scrambled Halton sequence through the normal quantile function.
    """

    if dim < 2:
        raise ValueError("directions need dimension >= 2")
    if count < 1:
        raise ValueError("need at least one direction")
    if dim == 2:
        phase = np.random.default_rng(seed).random()
        angles = 2.0 * np.pi * (np.arange(count) + phase) / count
        return np.column_stack([np.cos(angles), np.sin(angles)])
    u = qmc.Halton(d=dim, scramble=True, seed=seed).random(count)
    g = ndtri(np.clip(u, 1e-12, 1.0 - 1e-12))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def circle_frame(basis: np.ndarray, count: int, seed: int = 0) -> np.ndarray:
    """Unit vectors spread over the span of the orthonormal rows ``basis``.

    For a 2-row basis the vectors are ordered by angle.
    """

    basis = np.atleast_2d(basis)
    if basis.shape[0] == 1:
        return np.vstack([basis[0] if k % 2 == 0 else -basis[0] for k in range(count)])
    if basis.shape[0] == 2:
        angles = 2.0 * np.pi * np.arange(count) / count
        return np.outer(np.cos(angles), basis[0]) + np.outer(np.sin(angles), basis[1])
    return sphere_directions(basis.shape[0], count, seed) @ basis


def cloud_diameter(points) -> float:
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if len(points) < 2:
        return 0.0
    return float(np.max(pdist(points)))


def hausdorff(a, b) -> float:
    """Symmetric Hausdorff distance between two finite point clouds."""

    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.atleast_2d(np.asarray(b, dtype=float))
    return float(max(directed_hausdorff(a, b)[0], directed_hausdorff(b, a)[0]))


__all__ = ["sphere_directions", "circle_frame", "cloud_diameter", "hausdorff"]
