import numpy as np
from django.test import SimpleTestCase, override_settings

from apps.convex.bodies import Ellipsoid
from apps.convex.conf import get_tolerances
from apps.convex.theorems import (
    CheckRegistry,
    StageRole,
    Verdict,
    check_registry,
    check_theorem1,
    check_theorem4,
    check_theorem_radon,
    compare_refinement,
    family_body,
    sweep_family,
)
from apps.convex.theorems.report import CheckRun


class CheckRegistryTests(SimpleTestCase):
    def test_builtin_checks_are_registered(self):
        self.assertEqual(check_registry.ids(), ["basico", "pole", "radon", "t1", "t2", "t3", "t4"])
        self.assertEqual(check_registry.get("t1").inputs, ("inner", "outer"))
        self.assertEqual(check_registry.get("t4").sample_arg, "tangents")
        self.assertIs(check_registry.get("radon").func, check_theorem_radon)

    def test_duplicates_are_rejected(self):
        registry = CheckRegistry()
        registry.register("x", check_theorem_radon, ("body",))
        with self.assertRaises(ValueError):
            registry.register("x", check_theorem_radon, ("body",))

    def test_non_callables_are_rejected(self):
        with self.assertRaises(TypeError):
            CheckRegistry().register("x", "not a function", ("body",))

    def test_unknown_check(self):
        self.assertIsNone(check_registry.get("t9"))


def _report(residual, hypothesis=0.0):
    run = CheckRun("demo", {"body": Ellipsoid.ball()}, get_tolerances(), 1)
    run.stage("h", StageRole.HYPOTHESIS, hypothesis, 1e-6)
    run.stage("c", StageRole.CONCLUSION, residual, 1.0)
    return run.finish()


class RefinementTests(SimpleTestCase):
    def test_small_growth_is_stable(self):
        result = compare_refinement(_report(1e-3), _report(1.05e-3))
        self.assertTrue(result.stable)
        self.assertFalse(result.offenders)

    def test_large_growth_is_flagged(self):
        result = compare_refinement(_report(1e-3), _report(2e-3))
        self.assertFalse(result.stable)
        self.assertEqual(result.offenders[0]["stage"], "c")

    def test_floor_absorbs_rounding_noise(self):
        self.assertTrue(compare_refinement(_report(1e-16), _report(5e-16), floor=1e-12).stable)

    def test_verdict_change_is_unstable(self):
        result = compare_refinement(_report(1e-3), _report(1e-3, hypothesis=1.0))
        self.assertTrue(result.verdict_changed)
        self.assertFalse(result.stable)

    def test_reports_of_different_checks(self):
        other = CheckRun("other", {"body": Ellipsoid.ball()}, get_tolerances(), 1).finish()
        with self.assertRaises(ValueError):
            compare_refinement(_report(0.0), other)

    @override_settings(FORGE_DIRECTIONS=128)
    def test_doubling_samples_on_an_ellipsoid(self):
        body = family_body("stretch", 1.5)
        coarse = check_theorem_radon(body, planes=2, count=16)
        fine = check_theorem_radon(body, planes=2, count=32)
        self.assertTrue(compare_refinement(coarse, fine, floor=1e-9).stable)

    @override_settings(FORGE_DIRECTIONS=128)
    def test_doubling_curve_samples_for_opposite_apexes(self):
        inner = Ellipsoid(np.zeros(3), np.diag([1.0, 4.0, 9.0]))
        coarse = check_theorem1(inner, Ellipsoid.ball(3.0), apexes=3, count=24)
        fine = check_theorem1(inner, Ellipsoid.ball(3.0), apexes=3, count=48)
        self.assertIs(fine.verdict, Verdict.CONSISTENT)
        self.assertTrue(compare_refinement(coarse, fine, floor=1e-9).stable)

    @override_settings(FORGE_DIRECTIONS=128)
    def test_doubling_curve_samples_for_tangent_sections(self):
        coarse = check_theorem4(Ellipsoid.ball(2.0), 1.0, tangents=4, count=16)
        fine = check_theorem4(Ellipsoid.ball(2.0), 1.0, tangents=4, count=32)
        self.assertIs(fine.verdict, Verdict.CONSISTENT)
        self.assertTrue(compare_refinement(coarse, fine, floor=1e-9).stable)


@override_settings(FORGE_DIRECTIONS=128)
class SweepTests(SimpleTestCase):
    def test_family_members(self):
        self.assertEqual(family_body("lp", 3.0).kind, "pball")
        stretched = family_body("stretch", 2.0, scale=0.5)
        self.assertAlmostEqual(float(stretched.support([0.0, 0.0, 1.0])), 1.0)
        with self.assertRaises(ValueError):
            family_body("torus", 1.0)

    def test_lp_sweep(self):
        frame = sweep_family("lp", [2.0, 4.0], "radon", planes=2, count=32)
        self.assertEqual(list(frame["parameter"]), [2.0, 4.0])
        self.assertEqual(list(frame["verdict"]), [Verdict.CONSISTENT.value, Verdict.HYPOTHESIS_VIOLATED.value])
        self.assertIn("residual:sections_radon", frame.columns)
        self.assertEqual(frame.loc[1, "failed_stage"], "sections_radon")

    def test_gate_errors_become_rows(self):
        frame = sweep_family("stretch", [1.0], "t4", radius=1.5, tangents=2)
        self.assertEqual(frame.loc[0, "verdict"], "error")
        self.assertEqual(frame.loc[0, "failed_stage"], "BallTooLarge")

    def test_missing_roles(self):
        with self.assertRaises(ValueError):
            sweep_family("lp", [2.0], "t1", role="inner")
