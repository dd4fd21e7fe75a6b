import numpy as np
from django.test import SimpleTestCase, override_settings
from hypothesis import given, settings as hsettings, strategies as st

from apps.convex.bodies import Ellipsoid, PBall, Polytope
from apps.convex.conf import get_tolerances
from apps.convex.errors import BallTooLarge, BodiesNotNested, NonSmoothBody, NotOSymmetric
from apps.convex.geometry import AffineMap
from apps.convex.theorems import (
    Outcome,
    Verdict,
    check_theorem1,
    check_theorem2,
    check_theorem3,
    check_theorem4,
    check_theorem_basico,
    check_theorem_radon,
)
from apps.convex.theorems.sections import FCT_NOTE, UNIFORM_EPSILON_NOTE, TangentSections


@override_settings(FORGE_DIRECTIONS=128, FORGE_CURVE_SAMPLES=32)
class OppositeApexTests(SimpleTestCase):
    def test_ellipsoid_in_a_ball(self):
        inner = Ellipsoid(np.zeros(3), np.diag([1.0, 4.0, 9.0]))
        report = check_theorem1(inner, Ellipsoid.ball(3.0), apexes=4, count=48)
        self.assertIs(report.verdict, Verdict.CONSISTENT, [s.summary() for s in report.stages])
        self.assertIs(report.stage("omega_planar").outcome, Outcome.PASS)

    def test_l4_ball_fails_a_hypothesis(self):
        report = check_theorem1(PBall.lp_ball(4.0, radius=0.5), Ellipsoid.ball(2.0), apexes=4, count=24)
        self.assertIs(report.verdict, Verdict.HYPOTHESIS_VIOLATED)
        self.assertIs(report.stage("ellipsoidal_cones").outcome, Outcome.FAIL)
        self.assertIs(report.stage("ellipsoid").outcome, Outcome.NOT_JUDGED)

    def test_bodies_must_be_nested(self):
        with self.assertRaises(BodiesNotNested):
            check_theorem1(Ellipsoid.ball(2.0), Ellipsoid.ball(1.0), apexes=2, count=12)

    def test_affine_image_keeps_the_verdict(self):
        amap = AffineMap.random(3, np.random.default_rng(3))
        inner = Ellipsoid(np.zeros(3), np.diag([1.0, 4.0, 9.0])).transformed(amap)
        report = check_theorem1(inner, Ellipsoid.ball(3.0).transformed(amap), apexes=3, count=48)
        self.assertIs(report.verdict, Verdict.CONSISTENT, [s.summary() for s in report.stages])


@override_settings(FORGE_DIRECTIONS=128, FORGE_CURVE_SAMPLES=32)
class CollinearApexTests(SimpleTestCase):
    def test_cone_intersections_on_great_circles(self):
        report = check_theorem2(Ellipsoid.ball(1.0 / np.sqrt(2.0)), Ellipsoid.ball(), apexes=3, count=24)
        self.assertIs(report.verdict, Verdict.CONSISTENT, [s.summary() for s in report.stages])
        self.assertLess(report.stage("cone_intersection_in_section").residual, 1e-6)
        self.assertLess(report.stage("concentric").residual, 1e-7)

    def test_non_homothetic_pair_fails_the_hypothesis(self):
        inner = Ellipsoid(np.zeros(3), np.diag([4.0, 9.0, 16.0]))
        report = check_theorem2(inner, Ellipsoid.ball(), apexes=3, count=24)
        self.assertIs(report.verdict, Verdict.HYPOTHESIS_VIOLATED)
        self.assertIs(report.stage("homothetic").outcome, Outcome.NOT_JUDGED)

    @hsettings(max_examples=2, deadline=None, derandomize=True)
    @given(seed=st.integers(0, 10_000))
    def test_affine_image_keeps_the_verdict(self, seed):
        amap = AffineMap.random(3, np.random.default_rng(seed))
        inner = Ellipsoid.ball(1.0 / np.sqrt(2.0)).transformed(amap)
        report = check_theorem2(inner, Ellipsoid.ball().transformed(amap), apexes=3, count=24)
        self.assertIs(report.verdict, Verdict.CONSISTENT, [s.summary() for s in report.stages])


@override_settings(FORGE_DIRECTIONS=128, FORGE_CURVE_SAMPLES=32)
class PoleApexTests(SimpleTestCase):
    def test_small_ellipsoid_in_a_ball(self):
        inner = Ellipsoid(np.zeros(3), np.diag([1.0, 2.0, 4.0]) / 0.16)
        report = check_theorem3(inner, Ellipsoid.ball(2.0), apexes=4, count=24)
        self.assertIs(report.verdict, Verdict.CONSISTENT, [s.summary() for s in report.stages])
        self.assertGreater(report.stage("almost_free").residual, 0.0)

    @hsettings(max_examples=2, deadline=None, derandomize=True)
    @given(seed=st.integers(0, 10_000))
    def test_affine_image_keeps_the_verdict(self, seed):
        amap = AffineMap.random(3, np.random.default_rng(seed))
        inner = Ellipsoid(np.zeros(3), np.diag([1.0, 2.0, 4.0]) / 0.16).transformed(amap)
        report = check_theorem3(inner, Ellipsoid.ball(2.0).transformed(amap), apexes=4, count=24)
        self.assertIs(report.verdict, Verdict.CONSISTENT, [s.summary() for s in report.stages])

    def test_large_inner_ball_leaves_the_outer_body(self):
        report = check_theorem3(Ellipsoid.ball(0.9), Ellipsoid.ball(1.0), apexes=3, count=24)
        self.assertIs(report.verdict, Verdict.HYPOTHESIS_VIOLATED)
        self.assertIs(report.stage("omega_inside_outer").outcome, Outcome.FAIL)

    def test_outer_body_must_share_the_center(self):
        with self.assertRaises(NotOSymmetric):
            check_theorem3(Ellipsoid.ball(0.3), Ellipsoid.ball(2.0, center=[0.5, 0.0, 0.0]), apexes=2, count=12)


@override_settings(FORGE_DIRECTIONS=128, FORGE_CURVE_SAMPLES=32)
class TangentBallTests(SimpleTestCase):
    def test_sphere_translations(self):
        report = check_theorem4(Ellipsoid.ball(2.0), 1.0, tangents=4)
        self.assertIs(report.verdict, Verdict.CONSISTENT, [s.summary() for s in report.stages])
        np.testing.assert_allclose(np.linalg.norm(report.stage("translation_phi").witness["phi"]), 2.0, atol=1e-8)
        self.assertAlmostEqual(report.stage("ball_inside_cylinder").residual, np.sqrt(3.0) - 1.0, places=6)

    def test_phi_of_the_sphere(self):
        sections = TangentSections(Ellipsoid.ball(2.0), 1.0, get_tolerances())
        u = np.array([0.0, 0.6, 0.8])
        np.testing.assert_allclose(sections.phi(u), 2.0 * u, atol=1e-9)

    def near_sphere(self):
        a = np.eye(3) + 0.1 * np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 0.5], [0.0, 0.5, 0.0]])
        return Ellipsoid(np.zeros(3), np.linalg.inv(a @ a.T) / 4.0)

    def test_ellipsoid_translations(self):
        body = self.near_sphere()
        report = check_theorem4(body, 1.0, tangents=4)
        self.assertIs(report.verdict, Verdict.CONSISTENT, [s.summary() for s in report.stages])
        m_inv = np.linalg.inv(body.shape)
        u = np.array([0.0, 0.6, 0.8])
        sections = TangentSections(body, 1.0, get_tolerances())
        np.testing.assert_allclose(sections.phi(u), 2.0 * m_inv @ u / (u @ m_inv @ u), atol=1e-7)

    def test_similarity_keeps_the_verdict(self):
        q, _ = np.linalg.qr(np.random.default_rng(11).standard_normal((3, 3)))
        amap = AffineMap.from_linear(1.5 * q, [0.3, -0.2, 0.1])
        body = self.near_sphere()
        image = body.transformed(amap)
        report = check_theorem4(image, 1.5, tangents=4)
        self.assertIs(report.verdict, Verdict.CONSISTENT, [s.summary() for s in report.stages])
        u = np.array([0.6, 0.0, 0.8])
        tol = get_tolerances()
        np.testing.assert_allclose(
            TangentSections(image, 1.5, tol).phi(q @ u), 1.5 * q @ TangentSections(body, 1.0, tol).phi(u), atol=1e-7,
        )

    def test_l4_sections_are_not_ellipses(self):
        report = check_theorem4(PBall.lp_ball(4.0, radius=2.0), 1.0, tangents=4)
        self.assertIs(report.verdict, Verdict.HYPOTHESIS_VIOLATED)
        self.assertIs(report.stage("tangent_sections_ellipses").outcome, Outcome.FAIL)

    def test_ball_must_fit(self):
        with self.assertRaises(BallTooLarge):
            check_theorem4(Ellipsoid.ball(2.0), 2.0, tangents=2)

    def test_polytopes_are_rejected(self):
        with self.assertRaises(NonSmoothBody):
            check_theorem4(Polytope.cube(), 0.5, tangents=2)


@override_settings(FORGE_DIRECTIONS=128, FORGE_CURVE_SAMPLES=32)
class SlabTests(SimpleTestCase):
    def test_ellipsoid_sections_are_symmetric(self):
        body = Ellipsoid(np.zeros(3), np.diag([1.0, 2.0, 4.0]))
        report = check_theorem_basico(body, epsilon=0.2, planes=3)
        self.assertIs(report.verdict, Verdict.CONSISTENT, [s.summary() for s in report.stages])
        self.assertIs(report.stage("shadow_inclusion").outcome, Outcome.PASS)
        self.assertIn(UNIFORM_EPSILON_NOTE, report.notes)

    def test_off_center_point_of_a_sphere(self):
        report = check_theorem_basico(Ellipsoid.ball(), point=[0.1, 0.0, 0.0], epsilon=0.1, planes=3)
        self.assertIs(report.verdict, Verdict.CONSISTENT, [s.summary() for s in report.stages])
        self.assertIn(FCT_NOTE, report.notes)
        self.assertIs(report.stage("shadow_inclusion").outcome, Outcome.SKIPPED)
        self.assertTrue(report.implications)

    def test_l4_ball_has_asymmetric_slab_sections(self):
        report = check_theorem_basico(PBall.lp_ball(4.0), epsilon=0.2, planes=3)
        self.assertIs(report.verdict, Verdict.HYPOTHESIS_VIOLATED)

    def test_polytopes_are_rejected(self):
        with self.assertRaises(NonSmoothBody):
            check_theorem_basico(Polytope.cube())


@override_settings(FORGE_DIRECTIONS=128)
class RadonSectionTests(SimpleTestCase):
    def test_ellipsoid(self):
        body = Ellipsoid([0.2, 0.0, -0.1], np.diag([1.0, 2.0, 4.0]))
        report = check_theorem_radon(body, planes=3, count=32)
        self.assertIs(report.verdict, Verdict.CONSISTENT, [s.summary() for s in report.stages])

    def test_four_dimensional_ball(self):
        report = check_theorem_radon(Ellipsoid.ball(dim=4), planes=2, count=32)
        self.assertIs(report.verdict, Verdict.CONSISTENT, [s.summary() for s in report.stages])

    def test_l4_ball(self):
        report = check_theorem_radon(PBall.lp_ball(4.0), planes=3, count=32)
        self.assertIs(report.verdict, Verdict.HYPOTHESIS_VIOLATED)

    def test_cube_skips_normality(self):
        report = check_theorem_radon(Polytope.cube(), planes=2, count=16)
        self.assertIs(report.stage("normality_symmetric").outcome, Outcome.SKIPPED)

    def test_body_must_be_symmetric(self):
        with self.assertRaises(NotOSymmetric):
            check_theorem_radon(Polytope.simplex(3), planes=2, count=16)
