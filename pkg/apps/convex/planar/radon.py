"""Birkhoff normality and Radon-curve detection on centrally symmetric sections."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np

from apps.convex.conf import get_tolerances
from apps.convex.errors import NotANorm
from apps.convex.geometry.roots import golden_minimize

from .diameters import central_symmetry, conjugate_chords
from .section import PlanarSection, perpendicular

logger = logging.getLogger(__name__)

_SPAN = 10.0


def as_normed_plane(sec: PlanarSection, tol: Optional[float] = None) -> PlanarSection:
    """Recenter ``sec`` on its center of symmetry so its gauge is a norm."""

    sym = central_symmetry(sec, tol)
    if not sym.symmetric:
        raise NotANorm(f"section is not centrally symmetric (residual {sym.residual:.3e})")
    return sec.centered(sym.center)


def normality_dip(normed: PlanarSection, x, y) -> np.ndarray:
    """``(||x|| - min_a ||x + a y||) / ||x||`` row-wise, ``a`` in ``[-A, A]``.

    ``A = 10 ||x|| / ||y||`` (Euclidean lengths). Non-positive iff ``x`` is
    Birkhoff normal to ``y``.
    """

    x = np.atleast_2d(np.asarray(x, dtype=float))
    y = np.atleast_2d(np.asarray(y, dtype=float))
    span = _SPAN * np.linalg.norm(x, axis=1) / np.linalg.norm(y, axis=1)
    _, lowest = golden_minimize(
        lambda a: normed.norm(x + a[:, None] * y),
        -span,
        span,
        iterations=160,
    )
    base = normed.norm(x)
    return (base - lowest) / base


def birkhoff_normal(sec: PlanarSection, x, y, tol: Optional[float] = None) -> bool:
    """Whether ``||x + a y|| >= ||x||`` for all ``a`` in the section's norm.

    ``x`` and ``y`` are vectors of the normed plane centered on the
    section's center of symmetry.
    """

    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if not np.any(x) or not np.any(y):
        raise ValueError("normality needs non-zero vectors")
    tol = get_tolerances().normality if tol is None else tol
    return bool(normality_dip(as_normed_plane(sec), x, y)[0] <= tol)


@dataclass(frozen=True)
class RadonResult:
    """Outcome of the Radon-curve sweep.

    ``radon`` is the conjugate-diameter verdict. The normality scan is the
    cross-check: ``normality_dip`` is the worst failure of ``y ⊣ x`` over
    pairs built with ``x ⊣ y``. ``criteria_agree`` flags a disagreement
    between the two. Witness angles are the diameter directions in radians.
    """

    radon: bool
    conjugacy_defect: float
    conjugacy_witness: float
    normality_symmetric: Optional[bool]
    normality_dip: Optional[float]
    normality_witness: Optional[float]
    samples: int
    tolerance: float

    @property
    def criteria_agree(self) -> bool:
        return self.normality_symmetric is None or self.normality_symmetric == self.radon

    def as_dict(self) -> Dict[str, Any]:
        return {
            "radon": self.radon,
            "conjugacy_defect": self.conjugacy_defect,
            "conjugacy_witness": self.conjugacy_witness,
            "normality_symmetric": self.normality_symmetric,
            "normality_dip": self.normality_dip,
            "normality_witness": self.normality_witness,
            "criteria_agree": self.criteria_agree,
            "samples": self.samples,
            "tolerance": self.tolerance,
        }


def is_radon_curve(
    sec: PlanarSection,
    count: int = 128,
    tol: Optional[float] = None,
    symmetry_tol: Optional[float] = None,
) -> RadonResult:
    """Test whether every diameter of the section has a conjugate diameter.

    Diameters through the center of symmetry are swept over ``count``
    directions in ``[0, pi)``. Smooth sections are cross-checked with the
    symmetry of Birkhoff normality on the same directions.
    """

    tolerances = get_tolerances()
    tol = tolerances.conjugacy if tol is None else tol
    normed = as_normed_plane(sec, symmetry_tol)
    angles = np.pi * np.arange(count) / count
    b = normed.boundary_at(angles)
    a = normed.boundary_at(angles + np.pi)
    _, _, defects = conjugate_chords(normed, a, b)
    worst = int(np.argmax(defects))
    radon = bool(defects[worst] <= tol)

    symmetric = dip = witness = None
    if normed.smooth:
        y = perpendicular(normed.normal(b))
        y = y / normed.norm(y)[:, None]
        dips = normality_dip(normed, y, b)
        k = int(np.argmax(dips))
        dip = float(max(dips[k], 0.0))
        witness = float(angles[k])
        symmetric = bool(dip <= tolerances.normality)

    result = RadonResult(
        radon=radon,
        conjugacy_defect=float(defects[worst]),
        conjugacy_witness=float(angles[worst]),
        normality_symmetric=symmetric,
        normality_dip=dip,
        normality_witness=witness,
        samples=count,
        tolerance=tol,
    )
    if not result.criteria_agree:
        logger.warning(
            "radon criteria disagree: conjugacy defect %.3e, normality dip %.3e",
            result.conjugacy_defect, result.normality_dip,
        )
    return result


__all__ = [
    "RadonResult",
    "as_normed_plane",
    "birkhoff_normal",
    "is_radon_curve",
    "normality_dip",
]
