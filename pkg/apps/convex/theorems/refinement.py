"""Refinement stability of check reports and parameter sweeps over body families."""

from __future__ import annotations

import logging
from typing import Any, Callable, Dict, Iterable, List, NamedTuple, Optional, Tuple

import numpy as np
import pandas as pd

from apps.convex.bodies.base import ConvexBody
from apps.convex.bodies.ellipsoid import Ellipsoid
from apps.convex.bodies.pball import PBall
from apps.convex.errors import GeometryError

from .registry import check_registry
from .report import Bound, CheckReport, Outcome, StageRole

logger = logging.getLogger(__name__)

# A refined residual may exceed the coarse one by this fraction
GROWTH = 0.10


class RefinementResult(NamedTuple):
    stable: bool
    verdict_changed: bool
    offenders: Tuple[Dict[str, Any], ...]

    def as_dict(self) -> Dict[str, Any]:
        return {
            "stable": self.stable,
            "verdict_changed": self.verdict_changed,
            "offenders": list(self.offenders),
        }


def compare_refinement(coarse: CheckReport, fine: CheckReport, floor: float = 1e-12) -> RefinementResult:
    """Compare a report with the same check at doubled sample counts.

    Stable when the verdict is unchanged and no stage residual got worse by
    more than ``GROWTH`` of its coarse value plus ``floor``: larger for
    upper-bounded stages, smaller for lower-bounded ones (margins).
    """

    if coarse.theorem != fine.theorem:
        raise ValueError(f"cannot compare a {coarse.theorem} report with a {fine.theorem} report")
    coarse_stages = {s.name: s for s in coarse.stages}
    offenders: List[Dict[str, Any]] = []
    for stage in fine.stages:
        before = coarse_stages.get(stage.name)
        if before is None or before.residual is None or stage.residual is None:
            continue
        if not (np.isfinite(before.residual) and np.isfinite(stage.residual)):
            continue
        slack = GROWTH * abs(before.residual) + floor
        if stage.bound is Bound.UPPER:
            worse = stage.residual > before.residual + slack
        else:
            worse = stage.residual < before.residual - slack
        if worse:
            offenders.append({"stage": stage.name, "coarse": before.residual, "fine": stage.residual})
    changed = coarse.verdict is not fine.verdict
    if changed or offenders:
        logger.info("%s refinement unstable: verdict %s -> %s, %d stage(s) worse",
                    fine.theorem, coarse.verdict.value, fine.verdict.value, len(offenders))
    return RefinementResult(not changed and not offenders, changed, tuple(offenders))


# ---------------------------------------------------------------------------
# Families
# ---------------------------------------------------------------------------

def _lp(value: float, dim: int, scale: float) -> ConvexBody:
    return PBall.lp_ball(value, dim=dim, radius=scale, name=f"lp{value:g}")


def _stretch(value: float, dim: int, scale: float) -> ConvexBody:
    axes = np.ones(dim) * scale
    axes[-1] *= value
    return Ellipsoid(np.zeros(dim), np.diag(1.0 / axes ** 2), name=f"stretch{value:g}")


FAMILIES: Dict[str, Callable[[float, int, float], ConvexBody]] = {
    "lp": _lp,
    "stretch": _stretch,
}


def family_body(family: str, value: float, dim: int = 3, scale: float = 1.0) -> ConvexBody:
    """Member of a one-parameter body family.

    ``lp``: the ``l_p`` ball of radius ``scale`` with ``p = value``;
    ``stretch``: the ball of radius ``scale`` stretched by ``value`` along the
    last axis.
    """

    try:
        build = FAMILIES[family]
    except KeyError:
        raise ValueError(f"unknown body family '{family}' (choose from {', '.join(sorted(FAMILIES))})") from None
    return build(float(value), dim, float(scale))


def _row(value: float, report: CheckReport) -> Dict[str, Any]:
    hypotheses = [s for s in report.stages if s.role is StageRole.HYPOTHESIS]
    residuals = [np.inf if s.residual is None else s.residual for s in hypotheses]
    failed = next((s.name for s in report.stages if s.outcome is Outcome.FAIL), None)
    row: Dict[str, Any] = {
        "parameter": value,
        "verdict": report.verdict.value,
        "max_hypothesis_residual": max(residuals) if residuals else np.nan,
        "failed_stage": failed,
    }
    for stage in report.stages:
        row[f"residual:{stage.name}"] = np.nan if stage.residual is None else stage.residual
    return row


def sweep_family(
    family: str,
    values: Iterable[float],
    check: str,
    role: str = "body",
    scale: float = 1.0,
    others: Optional[Dict[str, ConvexBody]] = None,
    **kwargs,
) -> pd.DataFrame:
    """Run ``check`` once per family parameter and tabulate the verdicts.

    The family member takes the body role ``role``; ``others`` supplies the
    remaining roles. Checks whose gates reject a member get the verdict
    ``error`` and the exception name in ``failed_stage``.
    """

    spec = check_registry.get(check)
    if spec is None:
        raise ValueError(f"unknown check '{check}'")
    if role not in spec.inputs:
        raise ValueError(f"check {check} has no body role '{role}' (roles: {', '.join(spec.inputs)})")
    others = dict(others or {})
    missing = [r for r in spec.inputs if r != role and r not in others]
    if missing:
        raise ValueError(f"check {check} needs bodies for {', '.join(missing)}")

    rows = []
    for value in values:
        bodies = dict(others, **{role: family_body(family, value, scale=scale)})
        try:
            report = spec.func(*(bodies[r] for r in spec.inputs), **kwargs)
        except GeometryError as exc:
            logger.info("%s at %s=%g: %s", check, family, value, exc)
            rows.append({
                "parameter": float(value),
                "verdict": "error",
                "max_hypothesis_residual": np.nan,
                "failed_stage": type(exc).__name__,
            })
            continue
        rows.append(_row(float(value), report))
    frame = pd.DataFrame(rows)
    logger.debug("sweep of %s over %s: %d rows", check, family, len(frame))
    return frame


__all__ = [
    "FAMILIES",
    "GROWTH",
    "RefinementResult",
    "compare_refinement",
    "family_body",
    "sweep_family",
]
