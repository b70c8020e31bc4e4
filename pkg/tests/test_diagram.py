import unittest
from tangle_tribes.diagram import TangleDiagram, derive_sign, parse_diagram, serialize
from tangle_tribes.enums import Chirality, ComponentKind, CrossingKind, Role, ZMembership
from tangle_tribes.exceptions import (
    ComponentNotClosed, DiagramValidationError, MissingChoice, NotASelfCrossing, RoleMismatch, UnknownCrossing
)
from tangle_tribes.fixtures import fixture_names, flat_gauss_diagrams, load_fixture
from tangle_tribes.group import SurfacePresentation


def codes_of(text: str) -> list[str]:
    try:
        parse_diagram(text)
    except DiagramValidationError as error:
        return error.codes
    return []


class ParseTestCase(unittest.TestCase):
    def test_fixtures_round_trip(self):
        for name in fixture_names():
            with self.subTest(name=name):
                diagram = load_fixture(name)
                self.assertEqual(parse_diagram(serialize(diagram)), diagram)

    def test_signs_and_chiralities(self):
        trefoil = load_fixture("sphere-trefoil")
        self.assertEqual(trefoil.crossing_ids, ("x1", "x2", "x3"))
        self.assertEqual([crossing.sign for crossing in trefoil.crossings], [1, 1, 1])
        self.assertIs(trefoil.crossing("x1").chirality, Chirality.left)
        self.assertIs(trefoil.crossing("x2").chirality, Chirality.right)

    def test_derive_sign(self):
        self.assertEqual(derive_sign(Chirality.left, Role.over), 1)
        self.assertEqual(derive_sign(Chirality.left, Role.under), -1)
        self.assertEqual(derive_sign(Chirality.right, Role.under), 1)

    def test_flat_detection(self):
        triangle = load_fixture("triangle")
        self.assertTrue(triangle.flat)
        self.assertIsNone(triangle.crossing("u").sign)
        self.assertTrue(serialize(triangle).splitlines()[1] == "flat")

    def test_comments_and_blank_lines(self):
        diagram = parse_diagram("# header\n\nsurface genus=0 boundary=2  # annulus\ncomponent K1 closed\nwalk: t t\n")
        self.assertEqual(diagram.surface.format_word(diagram.total(0)), "tt")
        self.assertEqual(len(diagram.crossings), 0)

    def test_missing_walk_is_trivial(self):
        diagram = parse_diagram("surface genus=0 boundary=0\ncomponent K1 closed\n")
        self.assertEqual(len(diagram.components[0]), 0)

    def test_missing_surface(self):
        self.assertEqual(codes_of("component K1 closed\nwalk: 1\n"), ["syntax-error"])
        self.assertEqual(codes_of(""), ["syntax-error"])

    def test_wrong_number_of_visits(self):
        codes = codes_of("surface genus=0 boundary=0\ncomponent K1 closed\nwalk: x1:over\nsign x1 +\n")
        self.assertIn("crossing-visited-wrong-number-of-times", codes)

    def test_long_on_closed_surface(self):
        self.assertIn("long-on-closed-surface", codes_of("surface genus=1 boundary=0\ncomponent K1 long\nwalk: a\n"))

    def test_alphabet_mismatch(self):
        self.assertEqual(codes_of("surface genus=0 boundary=2\ncomponent K1 closed\nwalk: a\n"), ["alphabet-mismatch"])

    def test_missing_chirality(self):
        codes = codes_of("surface genus=0 boundary=0\ncomponent K1 closed\nwalk: x1:over x1:under\n")
        self.assertEqual(codes, ["missing-chirality"])
        codes = codes_of("surface genus=0 boundary=0\nflat\ncomponent K1 closed\nwalk: x1:first x1:second\n")
        self.assertEqual(codes, ["missing-chirality"])

    def test_inconsistent_sign(self):
        codes = codes_of("surface genus=0 boundary=0\ncomponent K1 closed\nwalk: x1:over:R x1:under\nsign x1 +\n")
        self.assertEqual(codes, ["inconsistent-sign"])

    def test_role_mismatch(self):
        codes = codes_of("surface genus=0 boundary=0\ncomponent K1 closed\nwalk: x1:over x1:over\nsign x1 +\n")
        self.assertIn("role-mismatch", codes)
        codes = codes_of("surface genus=0 boundary=0\ncomponent K1 closed\nwalk: x1:second:L x1:first\n")
        self.assertEqual(codes, ["role-mismatch"])

    def test_violations_carry_line_numbers(self):
        try:
            parse_diagram("surface genus=0 boundary=2\ncomponent K1 closed\nwalk: t x1:over\nsign x1 +\n")
        except DiagramValidationError as error:
            self.assertEqual(error.violations[0].line, 3)
        else:
            self.fail("the diagram should not parse")


class StructureTestCase(unittest.TestCase):
    def test_crossing_kinds(self):
        self.assertIs(load_fixture("hopf").crossing_kind("x1"), CrossingKind.mixed)
        self.assertIs(load_fixture("sphere-trefoil").crossing_kind("x1"), CrossingKind.closed_self)
        self.assertIs(load_fixture("long-trefoil").crossing_kind("x1"), CrossingKind.long_self)

    def test_component_types(self):
        hopf = load_fixture("hopf")
        self.assertEqual(hopf.component_type("x1"), (1, 2))
        self.assertEqual(hopf.component_type("x2"), (2, 1))
        self.assertEqual(load_fixture("sphere-trefoil").component_type("x2"), (1, 1))

    def test_order_types(self):
        long_trefoil = load_fixture("long-trefoil")
        self.assertIs(long_trefoil.components[0].kind, ComponentKind.long)
        self.assertEqual(long_trefoil.order_type("x1"), 1)
        self.assertEqual(long_trefoil.order_type("x2"), -1)
        with self.assertRaises(RoleMismatch):
            load_fixture("sphere-trefoil").order_type("x1")

    def test_halves(self):
        diagram = load_fixture("annulus-two")
        surface = diagram.surface
        self.assertEqual(surface.format_word(diagram.inner_half("x1")), "t")
        self.assertEqual(surface.format_word(diagram.outer_half("x1")), "tt")
        self.assertEqual(surface.format_word(diagram.inner_half("x2")), "1")
        halves = diagram.extract_halves("x2")
        self.assertEqual(surface.format_word(halves.positive), "ttt")
        self.assertEqual(surface.format_word(halves.negative), "1")
        self.assertIs(halves.z_membership, ZMembership.positive)

    def test_left_and_right_halves(self):
        torus = load_fixture("torus")
        halves = torus.extract_halves("x1")
        self.assertEqual(torus.surface.format_word(halves.left), "aa")
        self.assertEqual(torus.surface.format_word(halves.right), "b")

    def test_halves_need_a_closed_self_crossing(self):
        with self.assertRaises(NotASelfCrossing):
            load_fixture("hopf").inner_half("x1")
        with self.assertRaises(ComponentNotClosed):
            load_fixture("long-trefoil").extract_halves("x1")
        with self.assertRaises(UnknownCrossing):
            load_fixture("hopf").crossing("x9")

    def test_prefix_classes(self):
        diagram = load_fixture("annulus-two")
        surface = diagram.surface
        self.assertEqual([surface.format_word(word) for word in diagram.pass_classes(0)], ["t", "tt", "ttt", "ttt"])
        self.assertEqual(surface.format_word(diagram.component_class(0)), "ttt")
        self.assertTrue(load_fixture("long-trefoil").component_class(0).is_identity)


class DerivedDiagramTestCase(unittest.TestCase):
    def test_crossing_change(self):
        trefoil = load_fixture("sphere-trefoil")
        changed = trefoil.crossing_change("x1")
        self.assertEqual(changed.crossing_sign("x1"), -1)
        self.assertIs(changed.crossing("x1").chirality, Chirality.left)
        self.assertIs(changed.locate("x1")[0].role, Role.under)
        self.assertEqual(changed.crossing_change("x1"), trefoil)

    def test_flatten_and_lift(self):
        annulus = load_fixture("annulus")
        flat = annulus.flatten()
        self.assertTrue(flat.flat)
        self.assertEqual(flat.lift({"x1": Role.over}), annulus)
        self.assertEqual(len(list(load_fixture("triangle").all_lifts())), 8)
        with self.assertRaises(MissingChoice):
            flat.lift({})
        with self.assertRaises(RoleMismatch):
            annulus.lift({"x1": Role.over})
        with self.assertRaises(RoleMismatch):
            flat.component_type("x1")

    def test_rotate_basepoint(self):
        trefoil = load_fixture("sphere-trefoil")
        rotated = trefoil.rotate_basepoint(0, 2)
        self.assertEqual(rotated.crossing_ids, ("x2", "x3", "x1"))
        self.assertEqual([rotated.crossing_sign(crossing_id) for crossing_id in rotated.crossing_ids], [1, 1, 1])
        self.assertIs(rotated.crossing("x1").chirality, Chirality.right)
        self.assertIs(rotated.crossing("x2").chirality, Chirality.right)

    def test_rotate_keeps_class_up_to_conjugacy(self):
        diagram = load_fixture("genus2-boundary")
        rotated = diagram.rotate_basepoint(0, 3)
        surface = diagram.surface
        self.assertEqual(
            surface.conjugacy_canonical(rotated.component_class(0)), surface.conjugacy_canonical(diagram.component_class(0))
        )

    def test_rotate_long_component(self):
        with self.assertRaises(ComponentNotClosed):
            load_fixture("long-trefoil").rotate_basepoint(0, 2)

    def test_carrier_genus(self):
        flat = "surface genus=0 boundary=0\nflat\ncomponent K1 closed\nwalk: {}\n"
        self.assertEqual(parse_diagram(flat.format("x1:first:L x2:first:L x1:second x2:second")).carrier_genus(), 1)
        self.assertEqual(parse_diagram(flat.format("x1:first:R x2:first:L x1:second x2:second")).carrier_genus(), 1)
        self.assertEqual(parse_diagram(flat.format("x1:first:L x2:first:R x2:second x1:second")).carrier_genus(), 0)
        self.assertEqual(load_fixture("triangle").carrier_genus(), 0)
        self.assertEqual(load_fixture("torus").carrier_genus(), 0)
        with self.assertRaises(ComponentNotClosed):
            load_fixture("long-trefoil").carrier_genus()

    def test_planar_gauss_codes(self):
        sphere = SurfacePresentation(0, 0)
        codes = list(flat_gauss_diagrams(sphere, 2))
        self.assertEqual(len(codes), 12)
        self.assertEqual(sum(1 for diagram in codes if diagram.carrier_genus() == 0), 8)
        self.assertTrue(all(diagram.carrier_genus() == 0 for diagram in flat_gauss_diagrams(sphere, 1)))

    def test_rename(self):
        renamed = load_fixture("hopf").rename({"x1": "y1"})
        self.assertEqual(renamed.crossing_ids, ("y1", "x2"))
        self.assertIsInstance(renamed, TangleDiagram)


if __name__ == '__main__':
    unittest.main()
