import itertools
import random
import unittest
import warnings
from dataclasses import replace
from tangle_tribes.classifier import CrossingClassifier
from tangle_tribes.diagram import parse_diagram
from tangle_tribes.enums import Coarsening, CrossingKind, IndexSelector
from tangle_tribes.exceptions import RoleMismatch, UndecidedComparison, UndecidedKey, UnsupportedCoarsening
from tangle_tribes.fixtures import load_fixture, random_diagram
from tangle_tribes.group import SurfacePresentation
from tangle_tribes.moves import random_walk
from tangle_tribes.types import MoveWeights

GENUS2_CURL = """\
surface genus=2 boundary=0
component K1 closed
walk: a x1:over b x1:under
sign x1 +
"""

GENUS2_NULL = """\
surface genus=2 boundary=0
component K1 closed
walk: a x1:over A x1:under
sign x1 +
"""

# kappa = abab, the positive halves are c and (ab) c (ab)^-1
GENUS2_CONJUGATE = """\
surface genus=2 boundary=0
component K1 closed
walk: x1:under c x1:over Cab x2:under c x2:over Cab
sign x1 +
sign x2 +
"""


class ClassicalTestCase(unittest.TestCase):
    def test_trefoil_has_one_phratry(self):
        classifier = CrossingClassifier(load_fixture("sphere-trefoil"))
        self.assertEqual(classifier.tribes().sets(), {frozenset({"x1", "x2", "x3"})})
        self.assertEqual(classifier.phratries().sets(), {frozenset({"x1", "x2", "x3"})})

    def test_winding_separates_tribes(self):
        classifier = CrossingClassifier(load_fixture("annulus-two"))
        self.assertFalse(classifier.same_tribe("x1", "x2"))
        self.assertEqual(classifier.tribes().classes, (("x1",), ("x2",)))
        self.assertEqual(classifier.universal_index("x1").key, "2")
        self.assertEqual(classifier.universal_index("x2").key, "3")

    def test_mixed_crossings(self):
        classifier = CrossingClassifier(load_fixture("hopf"))
        value = classifier.classify("x1")
        self.assertIs(value.kind, CrossingKind.mixed)
        self.assertEqual(value.component_type, (1, 2))
        self.assertFalse(classifier.same_tribe("x1", "x2"))

    def test_order_type_splits_long_knots(self):
        classifier = CrossingClassifier(load_fixture("long-trefoil"))
        self.assertEqual(classifier.classify("x2").order, -1)
        self.assertEqual(classifier.tribes().classes, (("x1", "x3"), ("x2",)))

    def test_crossing_change_splits_phratry(self):
        diagram = load_fixture("sphere-trefoil").crossing_change("x1")
        classifier = CrossingClassifier(diagram)
        self.assertTrue(classifier.same_tribe("x1", "x2"))
        self.assertFalse(classifier.same_phratry("x1", "x2"))
        self.assertTrue(classifier.dual_verdict("x1", "x2").is_equal)
        self.assertEqual(classifier.phratries().sets(), {frozenset({"x1"}), frozenset({"x2", "x3"})})

    def test_flat_diagrams_are_rejected(self):
        classifier = CrossingClassifier(load_fixture("triangle"))
        with self.assertRaises(RoleMismatch):
            classifier.classify("u")
        with self.assertRaises(RoleMismatch):
            classifier.index_polynomial()


class IndexTestCase(unittest.TestCase):
    def test_default_coarsening(self):
        self.assertIs(CrossingClassifier(load_fixture("annulus")).default_coarsening(), Coarsening.exact_abelian)
        self.assertIs(CrossingClassifier(load_fixture("torus")).default_coarsening(), Coarsening.exact_abelian)
        self.assertIs(CrossingClassifier(load_fixture("genus2-boundary")).default_coarsening(), Coarsening.mod_kappa)

    def test_torus_index(self):
        classifier = CrossingClassifier(load_fixture("torus"))
        self.assertEqual(classifier.universal_index("x1").key, "(2,0)")
        self.assertEqual(classifier.homology_index("x1"), (2, 0))
        self.assertEqual(classifier.intersection_index("x1"), -2)

    def test_exact_abelian_needs_an_abelian_group(self):
        classifier = CrossingClassifier(load_fixture("genus2-boundary"))
        with self.assertRaises(UnsupportedCoarsening):
            classifier.universal_index("x1", Coarsening.exact_abelian)
        self.assertIsNotNone(classifier.universal_index("x1", Coarsening.mod_centralizer).key)

    def test_hyperbolic_keys_are_opaque(self):
        classifier = CrossingClassifier(parse_diagram(GENUS2_CURL))
        self.assertIsNone(classifier.universal_index("x1").key)
        self.assertIsNone(classifier.universal_index("x1", Coarsening.mod_centralizer).key)
        self.assertEqual(classifier.index_polynomial().coefficients, {"~a": 1})
        self.assertEqual(classifier.index_polynomial(coarsening=Coarsening.mod_centralizer).coefficients, {"~a": 1})
        self.assertEqual(classifier.universal_index("x1", Coarsening.homology).key, "(1,0,0,0)")

    def test_centralizer_of_a_null_homotopic_knot_is_unsupported(self):
        classifier = CrossingClassifier(parse_diagram(GENUS2_NULL))
        self.assertIsNone(classifier.universal_index("x1").key)
        with self.assertRaises(UnsupportedCoarsening):
            classifier.universal_index("x1", Coarsening.mod_centralizer)

    def test_hyperbolic_centralizer_groups_conjugate_values(self):
        diagram = parse_diagram(GENUS2_CONJUGATE)
        diagram = replace(diagram, surface=replace(diagram.surface, search_bound=4))
        classifier = CrossingClassifier(diagram)
        polynomial = classifier.index_polynomial(coarsening=Coarsening.mod_centralizer)
        self.assertEqual(polynomial.coefficients, {"~c": 2})
        with self.assertRaises(UndecidedKey):
            classifier.index_polynomial()

    def test_polynomials(self):
        trefoil = CrossingClassifier(load_fixture("sphere-trefoil"))
        self.assertEqual(trefoil.index_polynomial().coefficients, {"trivial": 3})
        hopf = CrossingClassifier(load_fixture("hopf"))
        self.assertEqual(hopf.index_polynomial().coefficients, {"(1,2) trivial": 1, "(2,1) trivial": 1})
        long_trefoil = CrossingClassifier(load_fixture("long-trefoil"))
        self.assertEqual(long_trefoil.index_polynomial().coefficients, {"+1 trivial": 2, "-1 trivial": 1})

    def test_polynomial_selectors(self):
        hopf = CrossingClassifier(load_fixture("hopf"))
        self.assertEqual(hopf.index_polynomial(IndexSelector.component_only).coefficients, {"(1,2)": 1, "(2,1)": 1})
        torus = CrossingClassifier(load_fixture("torus"))
        self.assertEqual(torus.index_polynomial(IndexSelector.intersection).coefficients, {"-2": 1})
        annulus = CrossingClassifier(load_fixture("annulus-two"))
        self.assertEqual(annulus.index_polynomial(IndexSelector.homology).coefficients, {"2": 1, "3": 1})
        self.assertEqual(str(CrossingClassifier(load_fixture("annulus")).index_polynomial()), "+1[1]")

    def test_polynomial_cancellation(self):
        diagram = load_fixture("sphere-trefoil").crossing_change("x1")
        self.assertEqual(CrossingClassifier(diagram).index_polynomial().coefficients, {"trivial": 1})

    def test_report(self):
        lines = CrossingClassifier(load_fixture("annulus-two")).report()
        self.assertEqual(str(lines[0]), "x1 τ=(1,1) sign=+1 h=2 tribe=T1 phratry=P1")
        self.assertEqual(lines[1].machine(), "crossing=x2\ttau=1,1\to=-\tsign=+1\th=3\ttribe=T2\tphratry=P2")


class InvarianceTestCase(unittest.TestCase):
    def test_nontrivial_polynomial_survives_every_move(self):
        for name, seed in (("annulus", 3), ("annulus-two", 8), ("torus", 11)):
            trace = random_walk(load_fixture(name), 40, seed)
            expected = CrossingClassifier(trace.start).index_polynomial(IndexSelector.nontrivial).coefficients
            for diagram in trace.diagrams:
                polynomial = CrossingClassifier(diagram).index_polynomial(IndexSelector.nontrivial)
                self.assertEqual(polynomial.coefficients, expected, name)

    def test_universal_polynomial_survives_second_and_third_moves(self):
        weights = MoveWeights(r1_add=0, r1_remove=0)
        for name, seed in (("annulus", 5), ("torus", 2), ("hopf", 7)):
            trace = random_walk(load_fixture(name), 30, seed, weights=weights)
            expected = CrossingClassifier(trace.start).index_polynomial().coefficients
            for diagram in trace.diagrams:
                self.assertEqual(CrossingClassifier(diagram).index_polynomial().coefficients, expected, name)

    def test_nontrivial_leaves_out_curl_values(self):
        classifier = CrossingClassifier(load_fixture("annulus-two"))
        self.assertFalse(classifier.has_curl_value("x1"))
        self.assertTrue(classifier.has_curl_value("x2"))
        self.assertEqual(classifier.index_polynomial(IndexSelector.nontrivial).coefficients, {"2": 1})
        trefoil = CrossingClassifier(load_fixture("sphere-trefoil"))
        self.assertEqual(trefoil.index_polynomial(IndexSelector.nontrivial).coefficients, {})
        self.assertFalse(CrossingClassifier(load_fixture("hopf")).has_curl_value("x1"))

    def test_tribes_do_not_depend_on_the_basepoint(self):
        rng = random.Random(17)
        for surface in (SurfacePresentation(0, 2), SurfacePresentation(1, 0), SurfacePresentation(0, 3)):
            for _ in range(25):
                diagram = random_diagram(surface, rng.randint(1, 4), rng, components=rng.randint(1, 2))
                candidates = [index for index, component in enumerate(diagram.components) if component.passes]
                index = rng.choice(candidates)
                position = rng.randint(1, len(diagram.components[index].passes))
                rotated = diagram.rotate_basepoint(index, position)
                before, after = CrossingClassifier(diagram), CrossingClassifier(rotated)
                for v, w in itertools.combinations(diagram.crossing_ids, 2):
                    self.assertEqual(before.same_tribe(v, w), after.same_tribe(v, w), (surface.header(), v, w))

    def test_flat_tribes_are_tribes_of_some_lift(self):
        rng = random.Random(29)
        for surface in (SurfacePresentation(0, 0), SurfacePresentation(0, 2), SurfacePresentation(1, 0)):
            for _ in range(15):
                diagram = random_diagram(surface, rng.randint(2, 4), rng, flat=True)
                flat = CrossingClassifier(diagram)
                lifts = [CrossingClassifier(lift) for lift in diagram.all_lifts()]
                self.assertEqual(len(lifts), 2 ** len(diagram.crossings))
                for v, w in itertools.combinations(diagram.crossing_ids, 2):
                    expected = any(lift.same_tribe(v, w) for lift in lifts)
                    self.assertEqual(flat.flat_same_tribe(v, w), expected, (surface.header(), v, w))


class FlatTestCase(unittest.TestCase):
    def test_curls_form_a_self_dual_phratry(self):
        classifier = CrossingClassifier(load_fixture("triangle"))
        self.assertTrue(classifier.flat_same_tribe("u", "v"))
        self.assertTrue(classifier.flat_same_phratry("u", "w"))
        self.assertTrue(classifier.flat_dual_phratry("u", "u"))
        self.assertTrue(classifier.is_self_dual("v"))
        phratries = classifier.flat_phratries()
        self.assertEqual(phratries.classes, (("u", "v", "w"),))
        self.assertEqual(phratries.label("u"), "P1*self-dual")

    def test_flat_types(self):
        value = CrossingClassifier(load_fixture("annulus").flatten()).flat_classify("x1")
        self.assertEqual(value.components, (1, 1))
        self.assertIsNone(value.refined.order)

    def test_flat_queries_need_flat_diagrams(self):
        with self.assertRaises(RoleMismatch):
            CrossingClassifier(load_fixture("annulus")).flat_classify("x1")
        with self.assertRaises(RoleMismatch):
            CrossingClassifier(load_fixture("annulus")).flat_tribes()

    def test_genus_two_flat_knot_is_not_self_dual(self):
        classifier = CrossingClassifier(load_fixture("genus2-flat"))
        self.assertFalse(any(classifier.is_self_dual(f"v{index}") for index in range(1, 6)))
        self.assertEqual(classifier.report()[0].crossing_id, "v1")


class UndecidedTestCase(unittest.TestCase):
    def test_undecided_comparisons_raise(self):
        text = """\
surface genus=2 boundary=0
component K1 closed
walk: c x1:over ab x1:under x2:over ba x2:under
sign x1 +
sign x2 +
"""
        diagram = parse_diagram(text)
        diagram = replace(diagram, surface=replace(diagram.surface, search_bound=4))
        classifier = CrossingClassifier(diagram)
        verdict = classifier.tribe_verdict("x1", "x2")
        if verdict.is_undecided:
            with self.assertRaises(UndecidedComparison):
                classifier.same_tribe("x1", "x2")
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always")
                partition = classifier.tribes()
            self.assertEqual(partition.undecided, (("x1", "x2"),))
            self.assertTrue(caught)
        else:
            self.assertEqual(classifier.same_tribe("x1", "x2"), verdict.is_equal)


if __name__ == '__main__':
    unittest.main()
