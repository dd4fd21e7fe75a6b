import numpy as np
from django.test import SimpleTestCase, override_settings
from hypothesis import given, settings as hsettings, strategies as st

from apps.convex.bodies import Ellipsoid, PBall
from apps.convex.errors import PointOnBoundary
from apps.convex.geometry import AffineMap, HPoint
from apps.convex.theorems import Outcome, PoleKind, Verdict, check_pole, polar_of


def _offset_along(polar, axis):
    # offset of the plane along a coordinate axis, independent of orientation
    return polar.offset / polar.normal[axis]


class PolarTests(SimpleTestCase):
    def test_exterior_point_of_the_unit_ball(self):
        result = polar_of(Ellipsoid.ball(), [2.0, 0.0, 0.0], 64)
        self.assertIs(result.classification, PoleKind.HYPERPLANE)
        self.assertAlmostEqual(abs(result.polar.normal[0]), 1.0, places=10)
        self.assertAlmostEqual(_offset_along(result.polar, 0), 0.5, places=10)
        self.assertLess(result.cross_ratio_residual, 1e-10)
        self.assertLess(result.graze_agreement, 1e-8)

    def test_center_has_its_polar_at_infinity(self):
        result = polar_of(Ellipsoid.ball(), [0.0, 0.0, 0.0], 64)
        self.assertTrue(result.polar.infinite)
        self.assertIs(result.classification, PoleKind.CENTRE)
        self.assertIsNone(result.graze_agreement)

    def test_ideal_point_has_a_central_polar(self):
        result = polar_of(Ellipsoid.ball(), HPoint.at_infinity([1.0, 0.0, 0.0]), 64)
        self.assertIs(result.classification, PoleKind.HYPERPLANE)
        self.assertAlmostEqual(abs(result.polar.normal[0]), 1.0, places=9)
        self.assertAlmostEqual(result.polar.offset, 0.0, places=9)
        self.assertLess(result.graze_agreement, 1e-8)

    def test_every_point_off_the_boundary_is_a_pole_of_an_ellipsoid(self):
        body = Ellipsoid([0.1, 0.2, -0.3], np.diag([1.0, 4.0, 9.0]))
        for point in ([2.0, 1.0, 0.5], [0.2, 0.1, -0.2], [-1.5, 0.0, 1.0]):
            with self.subTest(point=point):
                result = polar_of(body, point, 48)
                self.assertTrue(result.is_pole)
                self.assertLess(result.residual, 1e-9)

    @hsettings(max_examples=8, deadline=None, derandomize=True)
    @given(seed=st.integers(0, 10_000))
    def test_affine_images_keep_the_verdict(self, seed):
        amap = AffineMap.random(3, np.random.default_rng(seed))
        body = Ellipsoid.ball().transformed(amap)
        result = polar_of(body, amap(np.array([2.0, 0.5, 0.0])), 32)
        self.assertIs(result.classification, PoleKind.HYPERPLANE)

    def test_generic_point_is_not_a_pole_of_an_l4_ball(self):
        result = polar_of(PBall.lp_ball(4.0), [2.0, 1.0, 0.5], 64)
        self.assertIs(result.classification, PoleKind.NOT_A_POLE)
        self.assertGreater(result.residual, 1e-4)

    def test_boundary_point_is_rejected(self):
        with self.assertRaises(PointOnBoundary):
            polar_of(Ellipsoid.ball(), [1.0, 0.0, 0.0])

    def test_as_dict(self):
        payload = polar_of(Ellipsoid.ball(), [2.0, 0.0, 0.0], 32).as_dict()
        self.assertEqual(payload["classification"], "projective hyperplane of symmetry")
        self.assertEqual(len(payload["polar"]), 4)
        self.assertFalse(payload["polar_at_infinity"])


@override_settings(FORGE_DIRECTIONS=128)
class CheckPoleTests(SimpleTestCase):
    def test_exterior_pole_with_graze_in_polar(self):
        report = check_pole(Ellipsoid.ball(), [2.0, 0.0, 0.0], lines=48)
        self.assertIs(report.verdict, Verdict.CONSISTENT)
        self.assertIs(report.stage("graze_in_polar").outcome, Outcome.PASS)

    def test_center_notes_the_polar_at_infinity(self):
        report = check_pole(Ellipsoid.ball(), [0.0, 0.0, 0.0], lines=48)
        self.assertIs(report.verdict, Verdict.CONSISTENT)
        self.assertIs(report.stage("graze_in_polar").outcome, Outcome.SKIPPED)
        self.assertTrue(any("infinity" in note for note in report.notes))

    def test_non_pole_violates_the_hypothesis(self):
        report = check_pole(PBall.lp_ball(4.0), [2.0, 1.0, 0.5], lines=48)
        self.assertIs(report.verdict, Verdict.HYPOTHESIS_VIOLATED)
        self.assertEqual(report.exit_code, 2)
