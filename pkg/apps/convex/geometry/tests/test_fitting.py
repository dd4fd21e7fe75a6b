import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings as hsettings, strategies as st

from apps.convex.errors import DegenerateCloud, NotCoplanar
from apps.convex.geometry import (
    AffineMap,
    Classification,
    Hyperplane,
    conic_center,
    conic_polar_line,
    fit_hyperplane,
    fit_planar_conic,
    fit_quadric,
)


def unit_circle(count=64, height=0.0):
    angles = 2 * np.pi * np.arange(count) / count
    return np.column_stack([np.cos(angles), np.sin(angles), np.full(count, height)])


class HyperplaneFitTests(SimpleTestCase):
    def test_circle_in_vertical_plane(self):
        angles = 2 * np.pi * np.arange(100) / 100
        pts = np.column_stack([np.full(100, 0.5), np.cos(angles), np.sin(angles)])
        fit = fit_hyperplane(pts)
        self.assertEqual(fit.classification, Classification.HYPERPLANE)
        self.assertLess(fit.rms_residual, 1e-12)
        plane = fit.hyperplane()
        np.testing.assert_allclose(plane.normal, [1.0, 0.0, 0.0], atol=1e-12)
        self.assertAlmostEqual(plane.offset, 0.5, places=12)

    def test_fit_is_equivariant_under_rigid_motions(self):
        rng = np.random.default_rng(11)
        pts = unit_circle(40, 0.3) * [2.0, 1.0, 1.0]
        rotation, _ = np.linalg.qr(rng.standard_normal((3, 3)))
        shift = rng.standard_normal(3)
        moved = pts @ rotation.T + shift
        before = fit_hyperplane(pts).hyperplane()
        after = fit_hyperplane(moved).hyperplane()
        self.assertAlmostEqual(abs(after.normal @ (rotation @ before.normal)), 1.0, places=10)
        np.testing.assert_allclose(after.signed_distance(moved), 0.0, atol=1e-10)

    def test_noise_shows_up_in_residual(self):
        rng = np.random.default_rng(5)
        pts = unit_circle(200)
        pts[:, 2] += 1e-3 * rng.standard_normal(200)
        fit = fit_hyperplane(pts)
        self.assertGreater(fit.rms_residual, 1e-5)
        self.assertLess(fit.rms_residual, 1e-3)

    def test_collinear_cloud_is_degenerate(self):
        t = np.linspace(-1, 1, 10)
        with self.assertRaises(DegenerateCloud):
            fit_hyperplane(np.column_stack([t, 2 * t, -t]))

    def test_too_few_points(self):
        with self.assertRaises(DegenerateCloud):
            fit_hyperplane(np.eye(3)[:2])


class ConicFitTests(SimpleTestCase):
    def test_unit_circle_at_height_one(self):
        fit = fit_planar_conic(unit_circle(50, 1.0), Hyperplane(np.array([0.0, 0.0, 1.0]), 1.0))
        self.assertEqual(fit.classification, Classification.ELLIPSE)
        self.assertLess(fit.rms_residual, 1e-12)
        np.testing.assert_allclose(fit.center, [0.0, 0.0, 1.0], atol=1e-10)
        np.testing.assert_allclose(np.linalg.eigvalsh(np.array(fit.shape)), [1.0, 1.0], atol=1e-9)

    def test_oblique_section_of_round_cone(self):
        # x^2 + y^2 = z^2 cut by z = 1 + 0.3 x
        angles = 2 * np.pi * np.arange(80) / 80
        r = 1.0 / (1.0 - 0.3 * np.cos(angles))
        pts = np.column_stack([r * np.cos(angles), r * np.sin(angles), r])
        plane = Hyperplane.from_normal([-0.3, 0.0, 1.0], 1.0)
        fit = fit_planar_conic(pts, plane)
        self.assertEqual(fit.classification, Classification.ELLIPSE)
        self.assertLess(fit.rms_residual, 1e-10)

    def test_steep_section_of_round_cone_is_hyperbola(self):
        # z = 0.5 + 2 x meets both nappes
        t = np.linspace(-2.0, 2.0, 60)
        pts = []
        for y in t:
            # x^2 + y^2 = (0.5 + 2x)^2  ->  3x^2 + 2x + 0.25 - y^2 = 0
            disc = 4 - 12 * (0.25 - y * y)
            for sgn in (-1.0, 1.0):
                x = (-2 + sgn * np.sqrt(disc)) / 6
                pts.append([x, y, 0.5 + 2 * x])
        plane = Hyperplane.from_normal([-2.0, 0.0, 1.0], 0.5)
        fit = fit_planar_conic(np.array(pts), plane)
        self.assertEqual(fit.classification, Classification.HYPERBOLA)

    def test_square_is_rejected(self):
        s = np.linspace(-1, 1, 20)
        one = np.ones_like(s)
        edges = np.vstack([
            np.column_stack([s, -one]), np.column_stack([s, one]),
            np.column_stack([-one, s]), np.column_stack([one, s]),
        ])
        pts = np.column_stack([edges, np.zeros(len(edges))])
        fit = fit_planar_conic(pts, Hyperplane(np.array([0.0, 0.0, 1.0]), 0.0))
        self.assertEqual(fit.classification, Classification.REJECTED)
        self.assertFalse(fit.is_ellipse)

    def test_points_off_the_plane(self):
        with self.assertRaises(NotCoplanar):
            fit_planar_conic(unit_circle(20, 0.1), Hyperplane(np.array([0.0, 0.0, 1.0]), 0.0))

    def test_collinear_points_do_not_determine_a_conic(self):
        t = np.linspace(-1, 1, 12)
        pts = np.column_stack([t, 0.5 * t, np.zeros_like(t)])
        with self.assertRaises(DegenerateCloud):
            fit_planar_conic(pts, Hyperplane(np.array([0.0, 0.0, 1.0]), 0.0))

    def test_pole_and_polar_of_circle(self):
        fit = fit_planar_conic(unit_circle(30), Hyperplane(np.array([0.0, 0.0, 1.0]), 0.0))
        chart = fit.chart
        pole = chart.to_local(np.array([[2.0, 0.0, 0.0]]))[0]
        line = conic_polar_line(fit.model, pole)
        # polar of (2, 0) is x = 1/2 in chart coordinates
        foot = chart.to_local(np.array([[0.5, 0.0, 0.0]]))[0]
        self.assertAlmostEqual(float(line[:2] @ foot + line[2]), 0.0, places=10)
        np.testing.assert_allclose(conic_center(fit.model), [0.0, 0.0], atol=1e-10)

    @hsettings(max_examples=40, deadline=None, derandomize=True)
    @given(seed=st.integers(min_value=0, max_value=2**31 - 1))
    def test_affine_images_of_circles_are_ellipses(self, seed):
        rng = np.random.default_rng(seed)
        amap = AffineMap.random(3, rng)
        pts = amap(unit_circle(40, 0.2))
        plane = fit_hyperplane(pts).hyperplane()
        fit = fit_planar_conic(pts, plane)
        self.assertEqual(fit.classification, Classification.ELLIPSE)
        self.assertLess(fit.rms_residual, 1e-10)


class QuadricFitTests(SimpleTestCase):
    def test_recovers_ellipsoid(self):
        rng = np.random.default_rng(2)
        g = rng.standard_normal((200, 3))
        sphere = g / np.linalg.norm(g, axis=1, keepdims=True)
        axes = np.array([2.0, 1.0, 0.5])
        center = np.array([0.3, -0.2, 1.0])
        pts = sphere * axes + center
        fit = fit_quadric(pts)
        self.assertEqual(fit.classification, Classification.ELLIPSOID)
        self.assertLess(fit.rms_residual, 1e-10)
        np.testing.assert_allclose(fit.center, center, atol=1e-9)
        np.testing.assert_allclose(np.diag(np.array(fit.shape)), 1 / axes ** 2, atol=1e-8)

    def test_rounded_cube_is_rejected(self):
        rng = np.random.default_rng(4)
        g = rng.standard_normal((400, 3))
        pts = g / np.sum(np.abs(g) ** 4, axis=1, keepdims=True) ** 0.25
        fit = fit_quadric(pts)
        self.assertEqual(fit.classification, Classification.REJECTED)

    def test_planar_cloud_does_not_determine_quadric(self):
        with self.assertRaises(DegenerateCloud):
            fit_quadric(unit_circle(40))
