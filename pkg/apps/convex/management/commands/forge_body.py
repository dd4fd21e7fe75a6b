from __future__ import annotations

import logging

from django.core.management.base import CommandError

from apps.common.functions.files import write_json
from apps.convex.bodies.ops import oracle_checks
from apps.convex.conf import get_sampling
from apps.convex.management.base import USAGE_ERROR, ForgeCommand
from apps.convex.theorems.report import plain

error_logger = logging.getLogger(name="app_errors")


class Command(ForgeCommand):
    help = "Validate a body spec file: parse it and run the support/gauge oracle gates."

    def add_arguments(self, parser):
        parser.add_argument("operation", choices=("validate",), help="Operation on the body spec")
        parser.add_argument("--body", required=True, help="Body spec")
        self.add_run_arguments(parser)

    def handle(self, *args, **options):
        body = self.load_body(options["body"], "body")
        count = get_sampling().directions if options.get("count") is None else options["count"]
        config = self.run_config(options, operation="validate", bodies={"body": options["body"]})
        config.samples["count"] = count

        checks = self.guarded(oracle_checks, body, count, config.seed)
        for check in checks:
            verdict = "pass" if check.passed else "fail"
            self.stdout.write(f"oracle     {check.name:<28} {verdict:<10} residual {check.residual:.3e} <= {check.tolerance:.1e}")

        if options.get("out"):
            payload = {
                "body": body.to_spec(),
                "smooth": body.smooth,
                "diameter": body.diameter,
                "checks": [check._asdict() for check in checks],
                "config": config.as_dict(),
            }
            try:
                write_json(options["out"], plain(payload))
            except OSError as exc:
                raise CommandError(f"cannot write {options['out']}: {exc}", returncode=USAGE_ERROR)

        failed = [check.name for check in checks if not check.passed]
        if failed:
            error_logger.error("body %s fails oracle checks: %s", options["body"], ", ".join(failed))
            raise CommandError(f"body fails oracle checks: {', '.join(failed)}", returncode=USAGE_ERROR)
        self.stdout.write(f"valid      {body.kind} in dimension {body.dim}")
