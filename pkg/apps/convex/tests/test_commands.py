import json
import os
import tempfile
from io import StringIO
from unittest import mock

import numpy as np
import pandas as pd
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings

from apps.convex.bodies import Ellipsoid, PBall, dump_body_spec
from apps.convex.theorems import SCHEMA, CheckRun, StageRole
from apps.convex.theorems.registry import check_registry


@override_settings(FORGE_DIRECTIONS=128)
class CommandTestCase(SimpleTestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = self._tmp.name

    def tearDown(self):
        self._tmp.cleanup()

    def spec(self, name, body):
        path = os.path.join(self.tmp, f"{name}.json")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(dump_body_spec(body))
        return path

    def path(self, name):
        return os.path.join(self.tmp, name)

    def call(self, *args, **options):
        out = StringIO()
        call_command(*args, stdout=out, **options)
        return out.getvalue()

    def load(self, path):
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)


class ForgeBodyTests(CommandTestCase):
    def test_validate_sphere(self):
        out = self.call("forge_body", "validate", body=self.spec("sphere", Ellipsoid.ball()), out=self.path("v.json"))
        self.assertIn("valid", out)
        self.assertEqual(len([line for line in out.splitlines() if line.startswith("oracle")]), 6)
        payload = self.load(self.path("v.json"))
        self.assertTrue(all(check["passed"] for check in payload["checks"]))
        self.assertEqual(payload["config"]["command"], "forge_body")

    def test_bad_spec_reports_the_line(self):
        path = self.path("bad.json")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write('{\n  "kind": "ellipsoid",\n  "dimension": 3,\n  "radius": -1\n}\n')
        with self.assertRaises(CommandError) as ctx:
            self.call("forge_body", "validate", body=path)
        self.assertEqual(ctx.exception.returncode, 1)

    def test_missing_file(self):
        with self.assertRaises(CommandError) as ctx:
            self.call("forge_body", "validate", body=self.path("nowhere.json"))
        self.assertEqual(ctx.exception.returncode, 1)


class ForgeSampleTests(CommandTestCase):
    def test_graze_of_the_unit_sphere(self):
        out_path = self.path("graze.csv")
        out = self.call(
            "forge_sample", "graze", body=self.spec("sphere", Ellipsoid.ball()), apex="2,0,0", count=200, out=out_path,
        )
        self.assertIn("200 points", out)
        frame = pd.read_csv(out_path)
        np.testing.assert_allclose(frame["x1"], 0.5, atol=1e-10)
        meta = self.load(out_path + ".json")
        self.assertEqual(meta["count"], 200)
        self.assertEqual(meta["config"]["operation"], "graze")
        self.assertLess(meta["plane_fit_rms"], 1e-10)

    def test_short_curves_are_refused(self):
        with self.assertRaises(CommandError) as ctx:
            self.call("forge_sample", "graze", body=self.spec("sphere", Ellipsoid.ball()), apex="2,0,0", count=10)
        self.assertEqual(ctx.exception.returncode, 1)

    @override_settings(FORGE_MIN_CURVE_SAMPLES=8)
    def test_curve_minimum_is_configurable(self):
        out = self.call("forge_sample", "graze", body=self.spec("sphere", Ellipsoid.ball()), apex="2,0,0", count=10)
        self.assertIn("10 points", out)

    def test_section(self):
        out = self.call("forge_sample", "section", body=self.spec("sphere", Ellipsoid.ball()), normal="0,0,1", offset=0.5)
        self.assertIn("section", out)

    def test_missing_apex(self):
        with self.assertRaises(CommandError) as ctx:
            self.call("forge_sample", "graze", body=self.spec("sphere", Ellipsoid.ball()))
        self.assertEqual(ctx.exception.returncode, 1)

    def test_apex_inside_is_an_input_error(self):
        with self.assertRaises(CommandError) as ctx:
            self.call("forge_sample", "graze", body=self.spec("sphere", Ellipsoid.ball()), apex="0.5,0,0")
        self.assertEqual(ctx.exception.returncode, 1)


class ForgeCheckTests(CommandTestCase):
    def test_radon_report(self):
        body = self.spec("egg", Ellipsoid(np.zeros(3), np.diag([1.0, 2.0, 4.0])))
        report_path = self.path("radon.json")
        out = self.call("forge_check", "radon", body=body, samples=2, count=32, out=report_path)
        self.assertIn("verdict", out)
        self.assertIn("sections_radon", out)
        payload = self.load(report_path)
        self.assertEqual(payload["schema"], SCHEMA)
        self.assertEqual(payload["verdict"], "consistent")
        self.assertEqual(payload["config"]["command"], "forge_check")
        self.assertEqual(payload["config"]["samples"]["planes"], 2)
        self.assertNotIn("wall_time", payload)

    def test_reports_are_byte_identical(self):
        body = self.spec("egg", Ellipsoid(np.zeros(3), np.diag([1.0, 2.0, 4.0])))
        report_path = self.path("radon.json")
        runs = []
        for _ in range(2):
            self.call("forge_check", "radon", body=body, samples=2, count=16, seed=5, out=report_path)
            with open(report_path, "rb") as fh:
                runs.append(fh.read())
        self.assertEqual(runs[0], runs[1])

    def test_t4_on_l4_ball_exits_with_hypothesis_violated(self):
        report_path = self.path("t4.json")
        with self.assertRaises(CommandError) as ctx:
            self.call(
                "forge_check", "t4", body=self.spec("lp4", PBall.lp_ball(4.0, radius=2.0)),
                ball_radius=1.0, samples=2, count=32, out=report_path,
            )
        self.assertEqual(ctx.exception.returncode, 2)
        self.assertEqual(self.load(report_path)["verdict"], "hypothesis-violated")

    def test_conclusion_violated_exits_3_after_writing_the_report(self):
        def broken(body, **kwargs):
            run = CheckRun("radon", {"body": body}, kwargs["tolerances"], kwargs["seed"])
            run.stage("sections_radon", StageRole.HYPOTHESIS, 0.0, 1e-7)
            run.stage("ellipsoid", StageRole.CONCLUSION, 1.0, 1e-6)
            return run.finish()

        spec = check_registry.get("radon")._replace(func=broken)
        report_path = self.path("broken.json")
        with mock.patch.object(check_registry, "get", return_value=spec):
            with self.assertLogs("app_errors", level="ERROR"):
                with self.assertRaises(CommandError) as ctx:
                    self.call("forge_check", "radon", body=self.spec("sphere", Ellipsoid.ball()), out=report_path)
        self.assertEqual(ctx.exception.returncode, 3)
        self.assertEqual(self.load(report_path)["verdict"], "conclusion-violated")

    def test_pole_with_timings(self):
        report_path = self.path("pole.json")
        self.call(
            "forge_check", "pole", body=self.spec("sphere", Ellipsoid.ball()), pole="2,0,0",
            samples=32, timings=True, out=report_path,
        )
        payload = self.load(report_path)
        self.assertIn("wall_time", payload)
        self.assertEqual(payload["parameters"]["pole"], [2.0, 0.0, 0.0, 1.0])

    def test_tolerance_override_is_echoed(self):
        report_path = self.path("tol.json")
        self.call(
            "forge_check", "pole", body=self.spec("sphere", Ellipsoid.ball()), pole="2,0,0",
            samples=32, tol=["pole=1e-6"], out=report_path,
        )
        self.assertEqual(self.load(report_path)["tolerances"]["pole"], 1e-6)

    def test_unknown_tolerance(self):
        with self.assertRaises(CommandError) as ctx:
            self.call("forge_check", "pole", body=self.spec("sphere", Ellipsoid.ball()), pole="2,0,0", tol=["nope=1"])
        self.assertEqual(ctx.exception.returncode, 1)

    def test_t4_needs_a_radius(self):
        with self.assertRaises(CommandError) as ctx:
            self.call("forge_check", "t4", body=self.spec("sphere", Ellipsoid.ball(2.0)))
        self.assertEqual(ctx.exception.returncode, 1)

    def test_unknown_check_is_a_usage_error(self):
        with self.assertRaises(CommandError) as ctx:
            self.call("forge_check", "t9")
        self.assertEqual(ctx.exception.returncode, 1)

    def test_missing_body(self):
        with self.assertRaises(CommandError) as ctx:
            self.call("forge_check", "t1", inner=self.spec("sphere", Ellipsoid.ball()))
        self.assertEqual(ctx.exception.returncode, 1)


class ForgeSweepTests(CommandTestCase):
    def test_lp_sweep(self):
        table = self.path("sweep.csv")
        out = self.call("forge_sweep", family="lp", values="2,4", check="radon", samples=2, count=32, out=table)
        self.assertEqual(len(out.strip().splitlines()), 2)
        frame = pd.read_csv(table)
        self.assertEqual(list(frame["verdict"]), ["consistent", "hypothesis-violated"])
        self.assertEqual(self.load(table + ".json")["parameters"]["family"], "lp")

    def test_range_values(self):
        out = self.call("forge_sweep", family="stretch", values="1:1.5:2", check="radon", samples=1, count=16)
        self.assertIn("stretch=1.5", out)
