import numpy as np
from django.test import SimpleTestCase
from scipy.optimize import minimize_scalar

from apps.convex.bodies import Ellipsoid, PBall, Polytope
from apps.convex.errors import GeometryError, NonSmoothBody, PlaneMissesBody
from apps.convex.geometry import Chart, Hyperplane, fit_planar_conic, sphere_directions
from apps.convex.planar import PlanarSection, birkhoff_pair, diameter_through_center, section


def constrained_support(body, plane, sec, u):
    """``max <v, x>`` over ``body ∩ plane`` by minimizing ``h(v + t n) - t * offset``."""

    v = u @ sec.chart.basis
    res = minimize_scalar(
        lambda t: float(body.support(v + t * plane.normal) - t * plane.offset),
        bounds=(-50.0, 50.0),
        method="bounded",
        options={"xatol": 1e-13},
    )
    return res.fun - v @ sec.origin


class SectionTests(SimpleTestCase):
    def test_equatorial_section_of_the_sphere(self):
        sec = section(Ellipsoid.ball(), Hyperplane(np.array([0.0, 0.0, 1.0]), 0.0))
        u = sphere_directions(2, 64, seed=1)
        np.testing.assert_allclose(sec.support(u), 1.0, atol=1e-12)
        np.testing.assert_allclose(sec.origin, 0.0, atol=1e-15)

    def test_shifted_section_of_the_sphere(self):
        sec = section(Ellipsoid.ball(), Hyperplane(np.array([0.0, 0.0, 1.0]), 0.5))
        u = sphere_directions(2, 64, seed=2)
        np.testing.assert_allclose(sec.support(u), np.sqrt(3.0) / 2.0, atol=1e-12)
        np.testing.assert_allclose(sec.norm(sec.boundary(16)), 1.0, atol=1e-12)

    def test_oblique_section_of_an_ellipsoid_is_an_ellipse(self):
        body = Ellipsoid(np.zeros(3), np.diag([1.0, 4.0, 9.0]))
        plane = Hyperplane.from_normal([1.0, 1.0, 1.0], 0.1)
        sec = section(body, plane)
        points = sec.to_global(sec.boundary(64))
        fit = fit_planar_conic(points, plane)
        self.assertTrue(fit.is_ellipse)
        self.assertLess(fit.rms_residual, 1e-9)

    def test_support_matches_constrained_maximization(self):
        body = Ellipsoid([0.1, 0.0, -0.2], np.diag([1.0, 4.0, 9.0]))
        plane = Hyperplane.from_normal([1.0, 1.0, 1.0], 0.1)
        sec = section(body, plane)
        for u in sphere_directions(2, 12, seed=3):
            with self.subTest(u=u):
                self.assertAlmostEqual(float(sec.support(u)), constrained_support(body, plane, sec, u), delta=1e-9)

    def test_support_of_a_polytope_section(self):
        cube = Polytope.cube()
        sec = section(cube, Hyperplane(np.array([0.0, 0.0, 1.0]), 0.25))
        for u in sphere_directions(2, 8, seed=6):
            with self.subTest(u=u):
                self.assertAlmostEqual(float(sec.support(u)), float(cube.support(u @ sec.chart.basis)), places=9)

    def test_support_gates(self):
        sec = section(PBall.lp_ball(4.0), Hyperplane.from_normal([0.3, -0.2, 1.0], 0.2))
        u = sphere_directions(2, 64, seed=4)
        v = sphere_directions(2, 64, seed=5)
        np.testing.assert_allclose(sec.support(3.0 * u), 3.0 * sec.support(u), rtol=1e-12)
        self.assertTrue(np.all(sec.support(u + v) <= sec.support(u) + sec.support(v) + 1e-12))

    def test_plane_missing_the_body(self):
        with self.assertRaises(PlaneMissesBody):
            section(Ellipsoid.ball(), Hyperplane(np.array([0.0, 0.0, 1.0]), 1.5))

    def test_hyperplane_sections_need_three_dimensions(self):
        with self.assertRaises(GeometryError):
            section(Ellipsoid.ball(dim=4), Hyperplane(np.array([0.0, 0.0, 0.0, 1.0]), 0.0))

    def test_chart_section_in_four_dimensions(self):
        chart = Chart(np.zeros(4), np.array([[1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]]))
        sec = section(Ellipsoid(np.zeros(4), np.diag([1.0, 1.0, 4.0, 1.0])), chart)
        self.assertAlmostEqual(float(sec.support(np.array([0.0, 1.0]))), 0.5, places=9)


class PlanarBodyTests(SimpleTestCase):
    def test_of_body_requires_a_planar_body(self):
        with self.assertRaises(GeometryError):
            PlanarSection.of_body(Ellipsoid.ball())

    def test_of_body_uses_the_body_oracles(self):
        body = Ellipsoid(np.array([1.0, 2.0]), np.diag([0.25, 1.0]))
        sec = PlanarSection.of_body(body)
        np.testing.assert_allclose(sec.support_point(np.array([1.0, 0.0])), [2.0, 0.0])
        self.assertAlmostEqual(sec.diameter, 4.0, delta=1e-2)

    def test_diameter_through_center(self):
        chord = diameter_through_center(PlanarSection.of_body(Ellipsoid.ball(dim=2)), 0.0)
        np.testing.assert_allclose(chord.a, [-1.0, 0.0], atol=1e-15)
        np.testing.assert_allclose(chord.b, [1.0, 0.0], atol=1e-15)

    def test_birkhoff_pair_on_the_disk(self):
        x, y = birkhoff_pair(PlanarSection.of_body(Ellipsoid.ball(dim=2)), [1.0, 1.0])
        np.testing.assert_allclose(x, np.array([1.0, 1.0]) / np.sqrt(2.0))
        self.assertAlmostEqual(float(x @ y), 0.0, places=15)

    def test_polygon_has_no_normal(self):
        with self.assertRaises(NonSmoothBody):
            PlanarSection.of_body(Polytope.simplex(2)).normal([0.5, 0.0])
