import json
import os
import tempfile

import numpy as np
from django.test import SimpleTestCase

from apps.convex.bodies import (
    AffineImage,
    ConvexBody,
    Ellipsoid,
    PBall,
    Polytope,
    body_registry,
    dump_body_spec,
    load_body_spec,
    parse_body_spec,
)
from apps.convex.bodies.registry import BodyRegistry
from apps.convex.errors import BodySpecError
from apps.convex.geometry import AffineMap

EGG = """{
  "kind": "ellipsoid",
  "dimension": 3,
  "name": "egg",
  "center": [0.1, 0, 0],
  "matrix": [[1, 0, 0], [0, 4, 0], [0, 0, 9]]
}
"""


class ParseTests(SimpleTestCase):
    def test_ellipsoid_document(self):
        body = parse_body_spec(EGG)
        self.assertIsInstance(body, Ellipsoid)
        self.assertEqual(body.name, "egg")
        np.testing.assert_array_equal(body.shape, np.diag([1.0, 4.0, 9.0]))

    def test_ball_shortcut(self):
        body = parse_body_spec('{"kind": "ellipsoid", "dimension": 2, "radius": 2}')
        np.testing.assert_allclose(body.support([1.0, 0.0]), 2.0)

    def test_pball_and_polytope_documents(self):
        ball = parse_body_spec('{"kind": "pball", "dimension": 3, "exponent": 4, "radius": 1}')
        self.assertIsInstance(ball, PBall)
        self.assertEqual(ball.exponent, 4.0)
        square = parse_body_spec('{"kind": "polytope", "dimension": 2, "vertices": [[1,1],[-1,1],[-1,-1],[1,-1]]}')
        self.assertIsInstance(square, Polytope)
        np.testing.assert_allclose(square.center, [0.0, 0.0])

    def test_nested_affine_image(self):
        doc = {
            "kind": "affine_image",
            "dimension": 3,
            "matrix": [[2, 0, 0], [0, 1, 0], [0, 0.5, 1]],
            "offset": [0, 0, 1],
            "inner": {"kind": "pball", "dimension": 3, "exponent": 3, "semi_axes": [1, 1, 1]},
        }
        body = parse_body_spec(json.dumps(doc))
        self.assertIsInstance(body, AffineImage)
        self.assertIsInstance(body.inner, PBall)
        np.testing.assert_allclose(body.center, [0.0, 0.0, 1.0])


class RoundTripTests(SimpleTestCase):
    def test_parse_dump_parse_is_bit_exact(self):
        rng = np.random.default_rng(12)
        bodies = [
            parse_body_spec(EGG),
            Ellipsoid.from_affine(AffineMap.random(3, rng), name="random egg"),
            PBall(np.pi, rng.uniform(0.5, 2.0, 3), center=rng.standard_normal(3)),
            Polytope(rng.standard_normal((12, 3))),
            AffineImage(AffineMap.random(3, rng), Polytope.cube()),
        ]
        for body in bodies:
            with self.subTest(body=body):
                text = dump_body_spec(body)
                again = parse_body_spec(text)
                self.assertEqual(dump_body_spec(again), text)
                self.assertEqual(again.to_spec(), body.to_spec())

    def test_load_from_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "egg.json")
            with open(path, "w", encoding="utf-8") as f:
                f.write(EGG)
            self.assertEqual(load_body_spec(path).to_spec(), parse_body_spec(EGG).to_spec())


class ParseErrorTests(SimpleTestCase):
    def assertSpecError(self, text, field=None, line=None):
        with self.assertRaises(BodySpecError) as ctx:
            parse_body_spec(text)
        self.assertEqual(ctx.exception.field, field)
        if line is not None:
            self.assertEqual(ctx.exception.line, line)
        return ctx.exception

    def test_invalid_json_reports_line(self):
        self.assertSpecError('{\n  "kind": "ellipsoid",\n  "dimension": 3,,\n}', line=3)

    def test_missing_and_unknown_kind(self):
        self.assertSpecError('{"dimension": 3}', field="kind")
        err = self.assertSpecError('{"kind": "torus", "dimension": 3}', field="kind", line=1)
        self.assertIn("torus", str(err))

    def test_wrong_center_length_names_field_and_line(self):
        text = EGG.replace('"center": [0.1, 0, 0]', '"center": [0.1, 0]')
        self.assertSpecError(text, field="center", line=5)

    def test_unknown_field(self):
        self.assertSpecError('{"kind": "polytope", "dimension": 2, "vertices": [[0,0],[1,0],[0,1]], "colour": 1}', field="colour")

    def test_nested_field_is_dotted(self):
        doc = {
            "kind": "affine_image",
            "dimension": 2,
            "matrix": [[1, 0], [0, 1]],
            "inner": {"kind": "ellipsoid", "dimension": 2, "matrix": [[1, 0, 0]]},
        }
        self.assertSpecError(json.dumps(doc), field="inner.matrix")

    def test_nested_error_reports_its_own_line(self):
        text = (
            '{\n'
            '  "kind": "affine_image",\n'
            '  "dimension": 3,\n'
            '  "matrix": [[2, 0, 0], [0, 1, 0], [0, 0, 1]],\n'
            '  "inner": {\n'
            '    "kind": "ellipsoid",\n'
            '    "dimension": 3,\n'
            '    "matrix": [[1, 0], [0, 1]]\n'
            '  }\n'
            '}\n'
        )
        self.assertSpecError(text, field="inner.matrix", line=8)

    def test_outer_error_skips_keys_of_an_earlier_inner_body(self):
        text = (
            '{\n'
            '  "kind": "affine_image",\n'
            '  "dimension": 2,\n'
            '  "inner": {"kind": "ellipsoid", "dimension": 2, "matrix": [[1, 0], [0, 1]]},\n'
            '  "matrix": [[1, 0]]\n'
            '}\n'
        )
        self.assertSpecError(text, field="matrix", line=5)

    def test_invalid_geometry_is_a_spec_error(self):
        self.assertSpecError('{"kind": "ellipsoid", "dimension": 2, "matrix": [[1, 0], [0, -1]]}')
        self.assertSpecError('{"kind": "pball", "dimension": 2, "exponent": 1, "radius": 1}')

    def test_dimension_must_be_integer(self):
        self.assertSpecError('{"kind": "ellipsoid", "dimension": 1.5, "radius": 1}', field="dimension")


class RegistryTests(SimpleTestCase):
    def test_builtin_kinds_are_registered(self):
        self.assertEqual(
            set(body_registry.all()),
            {"ellipsoid", "pball", "polytope", "affine_image"},
        )
        self.assertIs(body_registry.get("pball"), PBall)

    def test_duplicates_and_wrong_types_are_rejected(self):
        registry = BodyRegistry()
        registry.register("ellipsoid", Ellipsoid, lambda doc, dim, name: None)
        with self.assertRaises(ValueError):
            registry.register("ellipsoid", Ellipsoid, lambda doc, dim, name: None)
        with self.assertRaises(TypeError):
            registry.register("blob", dict, lambda doc, dim, name: None)
        self.assertTrue(issubclass(registry.get("ellipsoid"), ConvexBody))
