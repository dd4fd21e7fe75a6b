"""Check reports: staged verdicts with residuals, tolerances and witnesses.

A check is a sequence of stages. Hypothesis stages gate the rest: once a
hypothesis fails, claims and the conclusion are still computed and reported
but not judged. A failing conclusion with every hypothesis passing would
contradict the characterization being checked; it is reported as
``conclusion-violated`` and logged as an error.
"""

from __future__ import annotations

import enum
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple, TypeVar

import numpy as np

from apps.common.functions.files import dumps_json, write_text
from apps.convex.conf import Tolerances, get_sampling
from apps.convex.errors import GeometryError

logger = logging.getLogger(__name__)

SCHEMA = "ellipsoid-forge/report-v1"

EVIDENCE_NOTE = "evidence at sampled family: every stage is checked on finitely many samples"

T = TypeVar("T")
R = TypeVar("R")


class Verdict(str, enum.Enum):
    CONSISTENT = "consistent"
    HYPOTHESIS_VIOLATED = "hypothesis-violated"
    CONCLUSION_VIOLATED = "conclusion-violated"

    @property
    def exit_code(self) -> int:
        return {"consistent": 0, "hypothesis-violated": 2, "conclusion-violated": 3}[self.value]


class StageRole(str, enum.Enum):
    HYPOTHESIS = "hypothesis"
    CLAIM = "claim"
    CONCLUSION = "conclusion"


class Outcome(str, enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    NOT_JUDGED = "not-judged"
    SKIPPED = "skipped"


class Bound(str, enum.Enum):
    # upper: residual <= tolerance passes; lower: residual >= tolerance passes
    UPPER = "upper"
    LOWER = "lower"


class Measure(NamedTuple):
    """What a stage computation returns."""

    residual: Optional[float]
    witness: Dict[str, Any] = {}
    passed: Optional[bool] = None


def plain(value: Any) -> Any:
    """JSON-ready copy of ``value``; non-finite floats become ``None``."""

    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [plain(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


@dataclass(frozen=True)
class Stage:
    name: str
    role: StageRole
    residual: Optional[float]
    tolerance: Optional[float]
    bound: Bound
    passed: Optional[bool]
    outcome: Outcome
    witness: Dict[str, Any] = field(default_factory=dict)

    def as_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "role": self.role.value,
            "residual": plain(self.residual),
            "tolerance": plain(self.tolerance),
            "bound": self.bound.value,
            "verdict": self.outcome.value,
            "witness": plain(self.witness),
        }

    def summary(self) -> str:
        residual = "n/a" if self.residual is None else f"{self.residual:.3e}"
        tolerance = "n/a" if self.tolerance is None else f"{self.tolerance:.1e}"
        sign = "<=" if self.bound is Bound.UPPER else ">="
        return f"{self.role.value:<10} {self.name:<28} {self.outcome.value:<10} residual {residual} {sign} {tolerance}"


@dataclass(frozen=True, eq=False)
class CheckReport:
    """Structured verdict of one theorem check."""

    theorem: str
    bodies: Dict[str, Dict[str, Any]]
    parameters: Dict[str, Any]
    seed: int
    samples: Dict[str, int]
    tolerances: Dict[str, float]
    stages: Tuple[Stage, ...]
    verdict: Verdict
    notes: Tuple[str, ...] = ()
    implications: Tuple[str, ...] = ()
    wall_time: float = 0.0
    config: Optional[Dict[str, Any]] = None

    @property
    def exit_code(self) -> int:
        return self.verdict.exit_code

    def stage(self, name: str) -> Stage:
        for stage in self.stages:
            if stage.name == name:
                return stage
        raise KeyError(f"report of {self.theorem} has no stage '{name}'")

    def with_config(self, config: Dict[str, Any]) -> "CheckReport":
        return replace(self, config=dict(config))

    def as_dict(self, timings: bool = False) -> Dict[str, Any]:
        payload: Dict[str, Any] = {
            "schema": SCHEMA,
            "theorem": self.theorem,
            "verdict": self.verdict.value,
            "bodies": plain(self.bodies),
            "parameters": plain(self.parameters),
            "seed": self.seed,
            "samples": plain(self.samples),
            "tolerances": plain(self.tolerances),
            "stages": [s.as_dict() for s in self.stages],
            "notes": list(self.notes),
            "implications": list(self.implications),
        }
        if self.config is not None:
            payload["config"] = plain(self.config)
        if timings:
            payload["wall_time"] = self.wall_time
        return payload

    def to_json(self, timings: bool = False) -> str:
        return dumps_json(self.as_dict(timings))

    def write(self, path, timings: bool = False):
        write_text(path, self.to_json(timings))
        logger.info("wrote %s report to %s", self.theorem, path)
        return path


class CheckRun:
    """Accumulates the stages of one check and settles the verdict."""

    def __init__(
        self,
        theorem: str,
        bodies: Dict[str, Any],
        tolerances: Tolerances,
        seed: int,
        parameters: Optional[Dict[str, Any]] = None,
    ):
        self.theorem = theorem
        self.bodies = {role: body.to_spec() for role, body in bodies.items()}
        self.tolerances = tolerances
        self.seed = seed
        self.parameters = dict(parameters or {})
        self.samples: Dict[str, int] = {}
        self.stages: List[Stage] = []
        self.notes: List[str] = [EVIDENCE_NOTE]
        self.implications: List[str] = []
        self._start = time.perf_counter()

    def stage(
        self,
        name: str,
        role: StageRole,
        residual: Optional[float],
        tolerance: float,
        bound: Bound = Bound.UPPER,
        witness: Optional[Dict[str, Any]] = None,
        passed: Optional[bool] = None,
    ) -> Stage:
        if residual is None or not math.isfinite(residual):
            within = False
        elif bound is Bound.UPPER:
            within = residual <= tolerance
        else:
            within = residual >= tolerance
        passed = within if passed is None else bool(passed) and within
        entry = Stage(
            name=name,
            role=role,
            residual=None if residual is None else float(residual),
            tolerance=float(tolerance),
            bound=bound,
            passed=passed,
            outcome=Outcome.PASS if passed else Outcome.FAIL,
            witness=dict(witness or {}),
        )
        self.stages.append(entry)
        logger.debug("%s %s: residual %s, %s", self.theorem, name, residual, entry.outcome.value)
        return entry

    def evaluate(
        self,
        name: str,
        role: StageRole,
        tolerance: float,
        compute: Callable[[], Measure],
        bound: Bound = Bound.UPPER,
    ) -> Stage:
        """Run ``compute`` and record its measure; geometry errors fail the stage."""

        try:
            measure = compute()
        except GeometryError as exc:
            logger.info("%s %s raised %s: %s", self.theorem, name, type(exc).__name__, exc)
            witness = {"error": type(exc).__name__, "message": str(exc)}
            defect = getattr(exc, "defect", None)
            if defect is not None:
                witness["defect"] = defect
            return self.stage(name, role, defect, tolerance, bound, witness, passed=False)
        return self.stage(name, role, measure.residual, tolerance, bound, measure.witness, measure.passed)

    def skip(self, name: str, role: StageRole, reason: str) -> Stage:
        entry = Stage(name, role, None, None, Bound.UPPER, None, Outcome.SKIPPED, {"reason": reason})
        self.stages.append(entry)
        return entry

    def note(self, text: str):
        if text not in self.notes:
            self.notes.append(text)

    def implication(self, text: str):
        self.implications.append(text)

    @property
    def hypotheses_hold(self) -> bool:
        return not any(s.role is StageRole.HYPOTHESIS and s.outcome is Outcome.FAIL for s in self.stages)

    def finish(self) -> CheckReport:
        stages = list(self.stages)
        if not self.hypotheses_hold:
            verdict = Verdict.HYPOTHESIS_VIOLATED
            stages = [
                replace(s, outcome=Outcome.NOT_JUDGED)
                if s.role is not StageRole.HYPOTHESIS and s.outcome in (Outcome.PASS, Outcome.FAIL)
                else s
                for s in stages
            ]
        elif any(s.outcome is Outcome.FAIL for s in stages):
            verdict = Verdict.CONCLUSION_VIOLATED
            failed = [s for s in stages if s.outcome is Outcome.FAIL]
            self.note("all hypotheses passed but later stages failed: see the witnesses of "
                      + ", ".join(s.name for s in failed))
            for s in failed:
                logger.error("%s: %s failed with every hypothesis passing: %s", self.theorem, s.name, plain(s.witness))
        else:
            verdict = Verdict.CONSISTENT
        logger.info("%s: %s", self.theorem, verdict.value)
        return CheckReport(
            theorem=self.theorem,
            bodies=self.bodies,
            parameters=self.parameters,
            seed=self.seed,
            samples=dict(self.samples),
            tolerances=self.tolerances.as_dict(),
            stages=tuple(stages),
            verdict=verdict,
            notes=tuple(self.notes),
            implications=tuple(self.implications),
            wall_time=time.perf_counter() - self._start,
        )


def map_samples(func: Callable[[T], R], items: Sequence[T], workers: Optional[int] = None) -> List[R]:
    """``[func(item) for item in items]``, threaded when ``workers > 1``; order is kept."""

    workers = get_sampling().workers if workers is None else workers
    if workers <= 1 or len(items) < 2:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def worst(values: Iterable[float]) -> Tuple[int, float]:
    """Index and value of the largest entry, ``inf`` counting as largest."""

    values = np.asarray(list(values), dtype=float)
    values = np.where(np.isnan(values), np.inf, values)
    k = int(np.argmax(values))
    return k, float(values[k])


__all__ = [
    "Bound",
    "CheckReport",
    "CheckRun",
    "EVIDENCE_NOTE",
    "Measure",
    "Outcome",
    "SCHEMA",
    "Stage",
    "StageRole",
    "Verdict",
    "map_samples",
    "plain",
    "worst",
]
