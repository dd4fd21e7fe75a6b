"""Shared plumbing of the ``forge_*`` management commands.

Exit statuses: 0 consistent or completed, 1 usage or IO error, 2 a
hypothesis violated, 3 a conclusion violated with every hypothesis passing.
"""

from __future__ import annotations

import logging
import sys
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Optional, Sequence

import numpy as np
from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from apps.convex.bodies.base import ConvexBody
from apps.convex.bodies.specs import load_body_spec
from apps.convex.conf import Tolerances, get_sampling, get_tolerances
from apps.convex.errors import GeometryError
from apps.convex.theorems.report import CheckReport, Verdict

error_logger = logging.getLogger(name="app_errors")
debug_logger = logging.getLogger(__name__)

USAGE_ERROR = 1


@dataclass
class RunConfig:
    """Everything a run depends on; echoed into its outputs."""

    command: str
    operation: Optional[str] = None
    bodies: Dict[str, str] = field(default_factory=dict)
    profile: str = "default"
    tolerances: Dict[str, float] = field(default_factory=dict)
    samples: Dict[str, Optional[int]] = field(default_factory=dict)
    seed: int = 0
    parameters: Dict[str, Any] = field(default_factory=dict)
    outputs: Dict[str, str] = field(default_factory=dict)
    timings: bool = False

    def as_dict(self) -> Dict[str, Any]:
        return asdict(self)


def parse_vector(text: str, name: str = "vector") -> np.ndarray:
    """``"2,0,0"`` -> ``array([2., 0., 0.])``."""

    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise CommandError(f"--{name} expects comma-separated numbers, got '{text}'", returncode=USAGE_ERROR)
    if not values:
        raise CommandError(f"--{name} is empty", returncode=USAGE_ERROR)
    return np.array(values)


def parse_assignments(items: Optional[Sequence[str]], option: str) -> Dict[str, str]:
    """``["a=1", "b=2"]`` -> ``{"a": "1", "b": "2"}``."""

    out: Dict[str, str] = {}
    for item in items or []:
        name, sep, value = item.partition("=")
        if not sep or not name.strip():
            raise CommandError(f"--{option} expects name=value, got '{item}'", returncode=USAGE_ERROR)
        out[name.strip()] = value.strip()
    return out


class ForgeCommand(BaseCommand):
    """Base class: common options, body loading, tolerances and exit codes."""

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)

        # argparse exits with status 2 on usage errors, which is a verdict code here
        def usage_error(message):
            if parser.called_from_command_line:
                parser.print_usage(sys.stderr)
                parser.exit(USAGE_ERROR, f"{parser.prog}: error: {message}\n")
            raise CommandError(f"Error: {message}", returncode=USAGE_ERROR)

        parser.error = usage_error
        return parser

    def add_run_arguments(self, parser):
        parser.add_argument("--seed", type=int, help="Sampling seed (default: FORGE_SEED)")
        parser.add_argument("--count", "--m", type=int, dest="count", help="Curve samples per sampled object (default: FORGE_CURVE_SAMPLES)")
        parser.add_argument("--profile", help="Tolerance profile: default, strict or loose (default: FORGE_TOLERANCE_PROFILE)")
        parser.add_argument(
            "--tol",
            action="append",
            default=[],
            metavar="NAME=VALUE",
            help="Override one tolerance gate (can be provided multiple times)",
        )
        parser.add_argument("--out", help="Output path")
        parser.add_argument("--timings", action="store_true", help="Include wall time in reports")

    # -- inputs --------------------------------------------------------------

    def load_body(self, path: Optional[str], role: str) -> ConvexBody:
        if not path:
            raise CommandError(f"--{role} is required", returncode=USAGE_ERROR)
        try:
            return load_body_spec(path)
        except OSError as exc:
            raise CommandError(f"cannot read {role} spec {path}: {exc}", returncode=USAGE_ERROR)
        except GeometryError as exc:
            raise CommandError(f"{role} spec {path}: {exc}", returncode=USAGE_ERROR)

    def tolerances(self, options) -> Tolerances:
        overrides = parse_assignments(options.get("tol"), "tol")
        try:
            return get_tolerances(options.get("profile"), overrides)
        except ValueError as exc:
            raise CommandError(str(exc), returncode=USAGE_ERROR)

    def run_config(self, options, operation=None, bodies=None, samples=None, parameters=None) -> RunConfig:
        sampling = get_sampling()
        tol = self.tolerances(options)
        seed = sampling.seed if options.get("seed") is None else options["seed"]
        outputs = {"report": options["out"]} if options.get("out") else {}
        return RunConfig(
            command=self.command_name,
            operation=operation,
            bodies=dict(bodies or {}),
            profile=options.get("profile") or getattr(settings, "FORGE_TOLERANCE_PROFILE", "default"),
            tolerances=tol.as_dict(),
            samples=dict({"count": options.get("count")}, **(samples or {})),
            seed=seed,
            parameters=dict(parameters or {}),
            outputs=outputs,
            timings=bool(options.get("timings")),
        )

    @property
    def command_name(self) -> str:
        return self.__module__.rsplit(".", 1)[-1]

    # -- outputs -------------------------------------------------------------

    def emit_report(self, report: CheckReport, config: RunConfig) -> CheckReport:
        """Print one line per stage, write the report and return it with its config."""

        report = report.with_config(config.as_dict())
        for stage in report.stages:
            self.stdout.write(stage.summary())
        self.stdout.write(f"verdict    {report.theorem:<28} {report.verdict.value}")
        path = config.outputs.get("report")
        if path:
            try:
                report.write(path, timings=config.timings)
            except OSError as exc:
                raise CommandError(f"cannot write {path}: {exc}", returncode=USAGE_ERROR)
        return report

    def finish(self, verdict: Verdict):
        """Raise the verdict's exit status once every artifact is written."""

        if verdict is Verdict.CONSISTENT:
            return
        if verdict is Verdict.CONCLUSION_VIOLATED:
            error_logger.error("%s: conclusion violated with every hypothesis passing", self.command_name)
        raise CommandError(verdict.value, returncode=verdict.exit_code)

    def guarded(self, func, *args, **kwargs):
        """Call ``func``; geometry errors become usage/IO failures."""

        try:
            return func(*args, **kwargs)
        except GeometryError as exc:
            debug_logger.info("%s failed: %s", self.command_name, exc)
            raise CommandError(f"{type(exc).__name__}: {exc}", returncode=USAGE_ERROR)


__all__ = [
    "ForgeCommand",
    "RunConfig",
    "USAGE_ERROR",
    "parse_assignments",
    "parse_vector",
]
