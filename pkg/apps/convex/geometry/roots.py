"""Vectorized one-dimensional solvers.

The cone and section samplers solve hundreds of independent 1-D problems
with identical structure; these helpers run them in lockstep over numpy
arrays. Scalar problems elsewhere go through ``scipy.optimize``.
"""

from __future__ import annotations

from typing import Callable, Tuple

import numpy as np

_INV_PHI = (np.sqrt(5.0) - 1.0) / 2.0


def bisect_sign(
    func: Callable[[np.ndarray], np.ndarray],
    lo,
    hi,
    iterations: int = 64,
) -> np.ndarray:
    """Locate a sign change of ``func`` inside each bracket ``[lo, hi]``.

    ``func`` must take and return arrays of the brackets' shape; the sign at
    ``lo`` is taken as reference, so brackets may be oriented either way.
    """

    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    ref = np.sign(func(lo))
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        same = np.sign(func(mid)) == ref
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
        if np.all(np.abs(hi - lo) <= 4 * np.finfo(float).eps * np.maximum(np.abs(lo), np.abs(hi))):
            break
    return 0.5 * (lo + hi)


def golden_minimize(
    func: Callable[[np.ndarray], np.ndarray],
    lo,
    hi,
    iterations: int = 100,
) -> Tuple[np.ndarray, np.ndarray]:
    """Golden-section search for the minimum of unimodal ``func`` on ``[lo, hi]``.

    Returns ``(argmin, minimum)`` arrays.
    """

    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    c = hi - _INV_PHI * (hi - lo)
    d = lo + _INV_PHI * (hi - lo)
    fc = func(c)
    fd = func(d)
    for _ in range(iterations):
        left = fc < fd
        hi = np.where(left, d, hi)
        lo = np.where(left, lo, c)
        new_c = np.where(left, hi - _INV_PHI * (hi - lo), d)
        new_d = np.where(left, c, lo + _INV_PHI * (hi - lo))
        fp = func(np.where(left, new_c, new_d))
        fc, fd = np.where(left, fp, fd), np.where(left, fc, fp)
        c, d = new_c, new_d
    x = 0.5 * (lo + hi)
    return x, func(x)


__all__ = ["bisect_sign", "golden_minimize"]
