import random
import unittest
from tangle_tribes.classifier import CrossingClassifier
from tangle_tribes.enums import ComponentKind
from tangle_tribes.fixtures import fixture_names, fixture_text, load_fixture, random_diagram
from tangle_tribes.group import SurfacePresentation
from tangle_tribes.selftest import (
    CHECKS, CheckResult, check_abelian_universal_index, check_classical_knots, check_crossing_change,
    check_genus2_flat, check_links_and_long_knots, check_oracle, check_self_dual_gate, run_selftest
)


class FixtureTestCase(unittest.TestCase):
    def test_names(self):
        self.assertEqual(fixture_names(), [
            "annulus", "annulus-two", "genus2-boundary", "genus2-flat", "hopf", "long-trefoil", "sphere-trefoil",
            "sphere-unknot", "torus", "triangle",
        ])

    def test_unknown_fixture(self):
        with self.assertRaises(KeyError):
            fixture_text("missing")
        with self.assertRaises(KeyError):
            load_fixture("missing")

    def test_fixture_text(self):
        self.assertTrue(fixture_text("sphere-unknot").startswith("surface genus=0 boundary=0"))

    def test_random_diagrams(self):
        rng = random.Random(5)
        surface = SurfacePresentation(0, 2)
        for _ in range(20):
            diagram = random_diagram(surface, rng.randint(0, 5), rng, components=rng.randint(1, 3))
            self.assertEqual(diagram.validate(), [])
            self.assertLessEqual(len(diagram.crossings), 5)

    def test_random_flat_long_diagram(self):
        rng = random.Random(2)
        diagram = random_diagram(SurfacePresentation(0, 1), 4, rng, flat=True, long=True)
        self.assertTrue(diagram.flat)
        self.assertIs(diagram.components[0].kind, ComponentKind.long)
        self.assertEqual(len(diagram.crossings), 4)

    def test_random_diagrams_are_reproducible(self):
        surface = SurfacePresentation(1, 0)
        first = random_diagram(surface, 4, random.Random(9), max_word_length=2)
        second = random_diagram(surface, 4, random.Random(9), max_word_length=2)
        self.assertEqual(first, second)

    def test_no_components(self):
        with self.assertRaises(ValueError):
            random_diagram(SurfacePresentation(0, 0), 1, random.Random(0), components=0)


class SelfTestTestCase(unittest.TestCase):
    def test_genus2_flat_indices(self):
        result = check_genus2_flat(random.Random(0), 1)
        self.assertTrue(result.passed, str(result))
        self.assertEqual(result.checked, 10)

    def test_quick_checks_pass(self):
        for check in (check_classical_knots, check_links_and_long_knots, check_abelian_universal_index,
                      check_crossing_change, check_self_dual_gate):
            with self.subTest(check=check.__name__):
                result = check(random.Random(1), 1)
                self.assertTrue(result.passed, str(result))

    def test_default_counts(self):
        self.assertGreaterEqual(check_abelian_universal_index(random.Random(2), 1).checked, 1000)
        self.assertEqual(check_crossing_change(random.Random(2), 1).checked, 500)

    def test_oracle_check_covers_planar_codes(self):
        result = check_oracle(random.Random(0), 1)
        self.assertTrue(result.passed, str(result))
        self.assertEqual(result.checked, 1 + 10 + 8)

    def test_genus2_flat_tribes(self):
        classifier = CrossingClassifier(load_fixture("genus2-flat"))
        self.assertEqual(len(classifier.flat_tribes().classes), 5)

    def test_result_format(self):
        result = CheckResult("demo", 3, ["one", "two"])
        self.assertFalse(result.passed)
        self.assertEqual(str(result), "FAIL demo: 3 checked, 2 failures\n  one\n  two")
        self.assertEqual(str(CheckResult("demo", 1)), "PASS demo: 1 checked, 0 failures")

    def test_checks_are_registered(self):
        self.assertEqual(len(CHECKS), 9)
        with self.assertRaises(ValueError):
            run_selftest(scale=0)


if __name__ == '__main__':
    unittest.main()
