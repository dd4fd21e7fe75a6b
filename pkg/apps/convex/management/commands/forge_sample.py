from __future__ import annotations

import logging

from django.core.management.base import CommandError

from apps.convex.conf import get_sampling
from apps.convex.cones.support import apex_fan, cone_intersection, graze, section_curve, shadow_boundary
from apps.convex.geometry.fitting import fit_hyperplane
from apps.convex.geometry.projective import Hyperplane
from apps.convex.management.base import USAGE_ERROR, ForgeCommand, parse_vector

debug_logger = logging.getLogger(__name__)

OPERATIONS = ("graze", "shadow", "omega", "section")


class Command(ForgeCommand):
    help = "Sample a graze, shadow boundary, cone intersection or plane section and export it as CSV."

    def add_arguments(self, parser):
        parser.add_argument("operation", choices=OPERATIONS, help="Curve to sample")
        parser.add_argument("--body", required=True, help="Body spec")
        parser.add_argument("--apex", help="Apex x (graze, omega)")
        parser.add_argument("--apex2", help="Second apex y (omega)")
        parser.add_argument("--direction", help="Light direction (shadow)")
        parser.add_argument("--normal", help="Plane normal (section)")
        parser.add_argument("--offset", type=float, default=0.0, help="Plane offset <normal, x> = offset (section)")
        self.add_run_arguments(parser)

    def _require(self, options, name):
        if not options.get(name):
            raise CommandError(f"{options['operation']} needs --{name}", returncode=USAGE_ERROR)
        return parse_vector(options[name], name)

    def _sample(self, body, options, count, seed):
        operation = options["operation"]
        if operation == "graze":
            apex = self._require(options, "apex")
            return graze(body, apex, count, fan=apex_fan(body, apex, count, seed)), {"apex": apex.tolist()}
        if operation == "shadow":
            u = self._require(options, "direction")
            return shadow_boundary(body, u, count, seed), {"direction": u.tolist()}
        if operation == "omega":
            x, y = self._require(options, "apex"), self._require(options, "apex2")
            return cone_intersection(body, x, y, count, seed), {"apex": x.tolist(), "apex2": y.tolist()}
        normal = self._require(options, "normal")
        try:
            plane = Hyperplane.from_normal(normal, options["offset"])
        except ValueError as exc:
            raise CommandError(str(exc), returncode=USAGE_ERROR)
        return section_curve(body, plane, count, seed=seed), {"normal": normal.tolist(), "offset": options["offset"]}

    def handle(self, *args, **options):
        body = self.load_body(options["body"], "body")
        sampling = get_sampling()
        count = sampling.curve_samples if options.get("count") is None else options["count"]
        if count < sampling.min_curve_samples:
            raise CommandError(
                f"--count {count} is below the curve minimum {sampling.min_curve_samples} (FORGE_MIN_CURVE_SAMPLES)",
                returncode=USAGE_ERROR,
            )
        config = self.run_config(options, operation=options["operation"], bodies={"body": options["body"]})
        config.samples["count"] = count
        if options.get("out"):
            config.outputs = {"curve": options["out"], "meta": options["out"] + ".json"}

        sample, parameters = self.guarded(self._sample, body, options, count, config.seed)
        config.parameters = parameters
        rms = fit_hyperplane(sample.points).rms_residual if len(sample) >= 3 else 0.0
        self.stdout.write(
            f"{options['operation']:<10} {len(sample)} points, max residual {sample.max_residual:.3e}, "
            f"plane fit rms {rms:.3e}"
        )
        if options.get("out"):
            try:
                sample.export(options["out"], extra={"plane_fit_rms": rms, "config": config.as_dict()})
            except OSError as exc:
                raise CommandError(f"cannot write {options['out']}: {exc}", returncode=USAGE_ERROR)
        debug_logger.info("sampled %s of %r", options["operation"], body)
