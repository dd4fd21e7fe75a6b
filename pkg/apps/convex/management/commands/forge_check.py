from __future__ import annotations

import logging

from django.core.management.base import CommandError

from apps.convex.geometry.projective import HPoint
from apps.convex.management.base import USAGE_ERROR, ForgeCommand, parse_vector
from apps.convex.theorems.registry import check_registry

debug_logger = logging.getLogger(__name__)


class Command(ForgeCommand):
    help = "Run one theorem check on bodies read from spec files and write its JSON report."

    def add_arguments(self, parser):
        parser.add_argument("check", choices=check_registry.ids(), help="Check to run")
        parser.add_argument("--body", help="Body spec (t4, basico, radon, pole)")
        parser.add_argument("--inner", help="Inner body spec (t1, t2, t3)")
        parser.add_argument("--outer", help="Outer body spec (t1, t2, t3)")
        parser.add_argument(
            "--samples",
            "--apexes",
            type=int,
            dest="samples",
            help="Outer sample count: apexes (t1-t3), tangent planes (t4), planes (basico, radon), lines (pole)",
        )
        parser.add_argument("--point", help="Interior point p as comma-separated coordinates (t2, basico)")
        parser.add_argument("--ball-radius", type=float, help="Radius of the ball about O (t4)")
        parser.add_argument("--epsilon", type=float, help="Slab width (basico, default 0.2)")
        parser.add_argument(
            "--pole",
            help="Point for the pole check; n coordinates, or n+1 homogeneous ones for points at infinity",
        )
        self.add_run_arguments(parser)

    def _parameters(self, check, options, dim):
        kwargs = {}
        if check in ("t2", "basico") and options.get("point"):
            kwargs["point"] = parse_vector(options["point"], "point")
        if check == "t4":
            if options.get("ball_radius") is None:
                raise CommandError("check t4 needs --ball-radius", returncode=USAGE_ERROR)
            kwargs["radius"] = options["ball_radius"]
        if check == "basico" and options.get("epsilon") is not None:
            kwargs["epsilon"] = options["epsilon"]
        if check == "pole":
            if not options.get("pole"):
                raise CommandError("check pole needs --pole", returncode=USAGE_ERROR)
            coords = parse_vector(options["pole"], "pole")
            if len(coords) == dim + 1:
                kwargs["pole"] = HPoint(tuple(coords))
            elif len(coords) == dim:
                kwargs["pole"] = coords
            else:
                raise CommandError(f"--pole needs {dim} or {dim + 1} coordinates", returncode=USAGE_ERROR)
        return kwargs

    def handle(self, *args, **options):
        check = options["check"]
        spec = check_registry.get(check)
        paths = {role: options.get(role) for role in spec.inputs}
        bodies = {role: self.load_body(path, role) for role, path in paths.items()}
        dim = bodies[spec.inputs[0]].dim
        kwargs = self._parameters(check, options, dim)

        samples = {spec.sample_arg: options["samples"]} if spec.sample_arg and options.get("samples") else {}
        config = self.run_config(
            options,
            operation=check,
            bodies=paths,
            samples=samples,
            parameters={k: (v.coords if isinstance(v, HPoint) else v) for k, v in kwargs.items()},
        )
        kwargs.update(samples)
        if check != "pole" and options.get("count") is not None:
            kwargs["count"] = options["count"]
        kwargs["seed"] = config.seed
        kwargs["tolerances"] = self.tolerances(options)

        debug_logger.info("forge_check %s with %s", check, ", ".join(f"{r}={p}" for r, p in paths.items()))
        report = self.guarded(spec.func, *(bodies[r] for r in spec.inputs), **kwargs)
        report = self.emit_report(report, config)
        self.finish(report.verdict)
