import numpy as np
from django.test import SimpleTestCase

from apps.convex.bodies import Ellipsoid, PBall
from apps.convex.cones import (
    centered_section,
    common_supporting_planes,
    contact_chord_residual,
    is_ellipsoidal_cone,
    is_symmetric_cone,
    support_cone,
)
from apps.convex.errors import LineMeetsBody, NotEllipsoidal, RayNotInterior
from apps.convex.geometry import Line


def circular_cone(count=64):
    """The cone ``x^2 + y^2 = z^2, z >= 0`` circumscribed about a ball."""

    return support_cone(Ellipsoid.ball(1.0, [0.0, 0.0, np.sqrt(2.0)]), np.zeros(3), count)


def chord_midpoint_offsets(plane, center, count=50, seed=0):
    """Midpoints of chords of ``plane ∩ {x^2 + y^2 = z^2}`` through ``center``, as offsets."""

    basis = plane.chart().basis
    rng = np.random.default_rng(seed)
    offsets = []
    for angle in rng.uniform(0.0, np.pi, count):
        d = np.cos(angle) * basis[0] + np.sin(angle) * basis[1]
        a = d[0] ** 2 + d[1] ** 2 - d[2] ** 2
        b = 2.0 * (center[0] * d[0] + center[1] * d[1] - center[2] * d[2])
        offsets.append(-b / (2.0 * a))
    return np.abs(offsets)


class EllipsoidalConeTests(SimpleTestCase):
    def test_cone_over_sphere(self):
        fit = is_ellipsoidal_cone(support_cone(Ellipsoid.ball(), [2.0, 0.0, 0.0]))
        self.assertTrue(fit.is_ellipse)
        self.assertLess(fit.rms_residual, 1e-10)

    def test_cone_over_ellipsoid(self):
        body = Ellipsoid(np.zeros(3), np.diag([1.0, 4.0, 9.0]))
        fit = is_ellipsoidal_cone(support_cone(body, [2.0, 0.0, 0.0]))
        self.assertTrue(fit.is_ellipse)
        self.assertLess(fit.rms_residual, 1e-9)

    def test_cone_over_l4_ball(self):
        fit = is_ellipsoidal_cone(support_cone(PBall.lp_ball(4.0), [2.0, 0.0, 0.0]))
        self.assertFalse(fit.is_ellipse)
        self.assertGreater(fit.rms_residual, 1e-4)

    def test_cone_in_four_dimensions(self):
        body = Ellipsoid(np.zeros(4), np.diag([1.0, 2.0, 3.0, 4.0]))
        fit = is_ellipsoidal_cone(support_cone(body, [2.0, 0.0, 0.0, 0.0], 96))
        self.assertTrue(fit.is_ellipse)


class CenteredSectionTests(SimpleTestCase):
    def test_axis_gives_a_horizontal_section(self):
        plane = centered_section(circular_cone(), Line(np.zeros(3), [0.0, 0.0, 1.0]))
        self.assertAlmostEqual(abs(plane.normal[2]), 1.0, places=8)

    def test_tilted_ray_section_is_centered_on_the_ray(self):
        w = np.array([0.2, 0.0, 1.0]) / np.linalg.norm([0.2, 0.0, 1.0])
        plane = centered_section(circular_cone(), Line(np.zeros(3), w))
        self.assertGreater(abs(plane.normal[0]), 1e-3)
        center = plane.intersect_line(Line(np.zeros(3), w)).affine()
        self.assertLess(np.max(chord_midpoint_offsets(plane, center)), 1e-8 * np.linalg.norm(center))

    def test_ray_direction_sign_is_ignored(self):
        w = np.array([0.2, 0.0, 1.0]) / np.linalg.norm([0.2, 0.0, 1.0])
        up = centered_section(circular_cone(), w)
        down = centered_section(circular_cone(), -w)
        np.testing.assert_allclose(up.normal, down.normal, atol=1e-12)

    def test_sphere_cone_toward_the_center(self):
        cone = support_cone(Ellipsoid.ball(), [2.0, 0.0, 0.0])
        plane = centered_section(cone, Line(np.array([2.0, 0.0, 0.0]), [-1.0, 0.0, 0.0]))
        self.assertAlmostEqual(abs(plane.normal[0]), 1.0, places=8)

    def test_ray_outside_the_cone(self):
        with self.assertRaises(RayNotInterior):
            centered_section(circular_cone(), Line(np.zeros(3), [1.0, 0.0, 0.5]))

    def test_ray_missing_the_apex(self):
        with self.assertRaises(RayNotInterior):
            centered_section(circular_cone(), Line(np.array([0.1, 0.0, 0.0]), [0.0, 0.0, 1.0]))

    def test_non_ellipsoidal_cone(self):
        cone = support_cone(PBall.lp_ball(4.0), [2.0, 0.0, 0.0])
        with self.assertRaises(NotEllipsoidal):
            centered_section(cone, Line(np.array([2.0, 0.0, 0.0]), [-1.0, 0.0, 0.0]))


class SymmetricConeTests(SimpleTestCase):
    def test_circular_cone_axis(self):
        verdict = is_symmetric_cone(circular_cone(), Line(np.zeros(3), [0.0, 0.0, 1.0]))
        self.assertTrue(verdict.symmetric)
        self.assertLess(verdict.residual, 1e-10)

    def test_tilted_axis_fails(self):
        tilt = np.deg2rad(10.0)
        verdict = is_symmetric_cone(circular_cone(), [np.sin(tilt), 0.0, np.cos(tilt)])
        self.assertFalse(verdict.symmetric)
        self.assertGreater(verdict.residual, 1e-2)

    def test_l4_cone_reports_a_residual(self):
        cone = support_cone(PBall.lp_ball(4.0), [2.0, 1.0, 0.0])
        verdict = is_symmetric_cone(cone, Line(np.array([2.0, 1.0, 0.0]), [-2.0, -1.0, 0.0]), count=16)
        self.assertGreaterEqual(verdict.residual, 0.0)

    def test_axis_outside(self):
        with self.assertRaises(RayNotInterior):
            is_symmetric_cone(circular_cone(), [1.0, 0.0, 0.2])


class ContactChordTests(SimpleTestCase):
    def test_supporting_planes_of_the_unit_ball(self):
        planes = common_supporting_planes(Ellipsoid.ball(), [2.0, 0.0, 1.5], [0.0, 2.0, 1.5])
        for plane, contact in zip(planes.planes, planes.contacts):
            self.assertAlmostEqual(plane.offset, 1.0, places=10)
            self.assertAlmostEqual(float(np.linalg.norm(contact)), 1.0, places=10)
            self.assertTrue(plane.contains(contact, tol=1e-10))

    def test_line_through_the_body(self):
        with self.assertRaises(LineMeetsBody):
            common_supporting_planes(Ellipsoid.ball(), [2.0, 0.0, 0.0], [0.0, 2.0, 0.0])

    def test_ellipsoid_contact_chord_is_parallel_to_the_meet(self):
        body = Ellipsoid(np.zeros(3), np.diag([1.0, 4.0, 9.0]))
        self.assertLess(contact_chord_residual(body, [2.0, 0.0, 1.0], [0.0, 2.0, 1.0], 48), 1e-6)

    def test_ball_contact_chord(self):
        body = Ellipsoid.ball(1.0, [0.3, -0.2, 0.1])
        self.assertLess(contact_chord_residual(body, [2.5, 0.0, 1.6], [0.0, 2.0, 1.6], 48), 1e-6)
