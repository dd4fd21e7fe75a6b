from __future__ import annotations

import logging

import numpy as np
from django.core.management.base import CommandError

from apps.common.functions.files import write_csv, write_json
from apps.convex.management.base import USAGE_ERROR, ForgeCommand, parse_assignments, parse_vector
from apps.convex.theorems.refinement import FAMILIES, sweep_family
from apps.convex.theorems.registry import check_registry
from apps.convex.theorems.report import Verdict

error_logger = logging.getLogger(name="app_errors")


def parse_values(text: str) -> np.ndarray:
    """``"1.5:3:7"`` (start:stop:count) or ``"2,3,4"``."""

    if ":" in text:
        parts = text.split(":")
        try:
            start, stop, num = float(parts[0]), float(parts[1]), int(parts[2])
        except (ValueError, IndexError):
            raise CommandError(f"--values expects start:stop:count, got '{text}'", returncode=USAGE_ERROR)
        if num < 1:
            raise CommandError("--values needs a positive count", returncode=USAGE_ERROR)
        return np.linspace(start, stop, num)
    return parse_vector(text, "values")


class Command(ForgeCommand):
    help = "Run one check over a one-parameter body family and write the table of verdicts as CSV."

    def add_arguments(self, parser):
        parser.add_argument("--family", required=True, choices=sorted(FAMILIES), help="Body family")
        parser.add_argument("--values", required=True, help="Parameters: start:stop:count or a comma list")
        parser.add_argument("--check", required=True, choices=check_registry.ids(), help="Check to run per parameter")
        parser.add_argument("--role", default="body", help="Body role the family member takes (default: body)")
        parser.add_argument("--scale", type=float, default=1.0, help="Radius of the family members (default: 1)")
        parser.add_argument(
            "--other",
            action="append",
            default=[],
            metavar="ROLE=PATH",
            help="Spec file for another body role (can be provided multiple times)",
        )
        parser.add_argument("--samples", type=int, help="Outer sample count of the check")
        parser.add_argument("--ball-radius", type=float, help="Radius of the ball about O (t4)")
        parser.add_argument("--epsilon", type=float, help="Slab width (basico)")
        self.add_run_arguments(parser)

    def handle(self, *args, **options):
        spec = check_registry.get(options["check"])
        values = parse_values(options["values"])
        others = parse_assignments(options.get("other"), "other")
        bodies = {role: self.load_body(path, role) for role, path in others.items()}

        kwargs = {"seed": None, "tolerances": self.tolerances(options)}
        if spec.sample_arg and options.get("samples"):
            kwargs[spec.sample_arg] = options["samples"]
        if options.get("count") is not None and spec.id != "pole":
            kwargs["count"] = options["count"]
        if spec.id == "t4":
            if options.get("ball_radius") is None:
                raise CommandError("sweeping t4 needs --ball-radius", returncode=USAGE_ERROR)
            kwargs["radius"] = options["ball_radius"]
        if spec.id == "basico" and options.get("epsilon") is not None:
            kwargs["epsilon"] = options["epsilon"]
        if spec.id == "pole":
            raise CommandError("the pole check takes a point, not a body family sweep", returncode=USAGE_ERROR)

        config = self.run_config(
            options,
            operation=spec.id,
            bodies=others,
            samples={spec.sample_arg: options.get("samples")} if spec.sample_arg else {},
            parameters={
                "family": options["family"],
                "values": values.tolist(),
                "role": options["role"],
                "scale": options["scale"],
                **{k: v for k, v in kwargs.items() if k in ("radius", "epsilon")},
            },
        )
        kwargs["seed"] = config.seed

        try:
            frame = sweep_family(
                options["family"], values, spec.id, role=options["role"], scale=options["scale"], others=bodies, **kwargs,
            )
        except ValueError as exc:
            raise CommandError(str(exc), returncode=USAGE_ERROR)

        for row in frame.itertuples(index=False):
            self.stdout.write(
                f"{options['family']}={row.parameter:<10g} {row.verdict:<20} "
                f"max hypothesis residual {row.max_hypothesis_residual:.3e}"
            )

        if options.get("out"):
            config.outputs = {"table": options["out"], "meta": options["out"] + ".json"}
            try:
                write_csv(options["out"], frame)
                write_json(options["out"] + ".json", config.as_dict())
            except OSError as exc:
                raise CommandError(f"cannot write {options['out']}: {exc}", returncode=USAGE_ERROR)

        if (frame["verdict"] == Verdict.CONCLUSION_VIOLATED.value).any():
            self.finish(Verdict.CONCLUSION_VIOLATED)
