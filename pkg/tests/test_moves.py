import unittest
import warnings
from tangle_tribes.diagram import parse_diagram
from tangle_tribes.enums import MoveKind
from tangle_tribes.exceptions import InvalidSite, PathNotOnDiagram, TraceSyntaxError
from tangle_tribes.fixtures import load_fixture
from tangle_tribes.moves import (
    Move, all_sites, apply_move, check_trace, enumerate_moves, format_trace, fresh_ids, parse_trace, pull_crossing,
    pull_sprout, r1_remove_sites, r2_remove_sites, random_walk, replay
)
from tangle_tribes.types import ExplorationBudget, MoveWeights

STAR = """\
surface genus=0 boundary=0
flat
component A closed
walk: 1 x:first:L 1 y:first:L 1 t:first:L 1
component B closed
walk: 1 x:second 1
component C closed
walk: 1 y:second 1
component D closed
walk: 1 t:second 1
"""


class FirstMoveTestCase(unittest.TestCase):
    def setUp(self):
        self.annulus = load_fixture("annulus")

    def test_curl_round_trip(self):
        curl = Move(MoveKind.r1_add, ("n1",), ((0, 0),), side=1, over=0)
        curled, step = apply_move(self.annulus, curl)
        self.assertEqual(step.created, ("n1",))
        self.assertEqual(curled.crossing_ids, ("n1", "x1"))
        self.assertEqual(curled.crossing_sign("n1"), 1)
        self.assertEqual(r1_remove_sites(curled), [Move(MoveKind.r1_remove, ("n1",))])
        restored, step = apply_move(curled, Move(MoveKind.r1_remove, ("n1",)))
        self.assertEqual(step.removed, ("n1",))
        self.assertEqual(restored, self.annulus)

    def test_essential_loops_are_not_removable(self):
        self.assertEqual(r1_remove_sites(self.annulus), [])
        with self.assertRaises(InvalidSite):
            apply_move(self.annulus, Move(MoveKind.r1_remove, ("x1",)))

    def test_bad_sites(self):
        with self.assertRaises(InvalidSite):
            apply_move(self.annulus, Move(MoveKind.r1_add, ("n1",), ((0, 9),), over=0))
        with self.assertRaises(InvalidSite):
            apply_move(self.annulus, Move(MoveKind.r1_add, ("x1",), ((0, 0),), over=0))
        with self.assertRaises(InvalidSite):
            apply_move(self.annulus, Move(MoveKind.r1_add, ("n1",), ((0, 0),)))

    def test_flat_curl(self):
        triangle = load_fixture("triangle")
        self.assertEqual(len(r1_remove_sites(triangle)), 3)
        curled, _ = apply_move(triangle, Move(MoveKind.r1_add, ("n1",), ((0, 6),), side=-1))
        self.assertTrue(curled.flat)
        self.assertIsNone(curled.crossing("n1").sign)


class SecondMoveTestCase(unittest.TestCase):
    def test_sprout_has_the_requested_half(self):
        annulus = load_fixture("annulus")
        trace = pull_sprout(annulus, (0, 0), "t")
        final = trace.final
        self.assertEqual(trace.moves[0].kind, MoveKind.r2_add)
        self.assertEqual(final.crossing_ids, ("n1", "n2", "x1"))
        self.assertEqual(final.surface.format_word(final.extract_halves("n1").positive), "t")
        self.assertEqual(final.surface.format_word(final.extract_halves("n2").positive), "t")
        self.assertEqual(final.crossing_sign("n1"), -final.crossing_sign("n2"))
        self.assertTrue(check_trace(trace).ok)

    def test_bigon_round_trip(self):
        annulus = load_fixture("annulus")
        sprouted = pull_sprout(annulus, (0, 0), "t").final
        self.assertEqual(r2_remove_sites(sprouted), [Move(MoveKind.r2_remove, ("n1", "n2"))])
        restored, step = apply_move(sprouted, Move(MoveKind.r2_remove, ("n1", "n2")))
        self.assertEqual(step.dual_pairs, (("n1", "n2"),))
        self.assertEqual(restored, annulus)

    def test_tongue_validation(self):
        annulus = load_fixture("annulus")
        with self.assertRaises(InvalidSite):
            apply_move(annulus, Move(MoveKind.r2_add, ("n1", "n1"), ((0, 0), (0, 1)), annulus.surface.identity, over=0))
        with self.assertRaises(InvalidSite):
            apply_move(annulus, Move(MoveKind.r2_add, ("n1", "n2"), ((0, 0), (0, 1)), None, over=0))
        with self.assertRaises(InvalidSite):
            apply_move(annulus, Move(MoveKind.r2_remove, ("x1", "x1")))


class ThirdMoveTestCase(unittest.TestCase):
    def test_pull_crossing_passes_a_strand(self):
        diagram = parse_diagram(STAR)
        trace = pull_crossing(diagram, "x", "t")
        self.assertEqual([move.kind for move in trace.moves], [MoveKind.r2_add, MoveKind.r3])
        final = trace.final
        self.assertEqual(tuple(walk_pass.crossing_id for walk_pass in final.components[0].passes), ("y", "x", "t"))
        self.assertTrue(check_trace(trace).ok)

    def test_pull_adjacent_crossing_is_empty(self):
        self.assertEqual(len(pull_crossing(load_fixture("sphere-trefoil"), "x1", "x2")), 0)

    def test_pull_without_a_path(self):
        text = "surface genus=0 boundary=0\nflat\ncomponent A closed\nwalk: u:first:L u:second\n" \
               "component B closed\nwalk: v:first:R v:second\n"
        with self.assertRaises(PathNotOnDiagram):
            pull_crossing(parse_diagram(text), "u", "v")


class EnumerationTestCase(unittest.TestCase):
    def test_fresh_ids(self):
        diagram = load_fixture("annulus")
        self.assertEqual(fresh_ids(diagram, 2), ("n1", "n2"))
        self.assertEqual(fresh_ids(diagram, 1, avoid=("n1",)), ("n2",))

    def test_sites(self):
        self.assertEqual(all_sites(load_fixture("annulus")), [(0, 0), (0, 1), (0, 2)])
        self.assertEqual(len(all_sites(load_fixture("hopf"))), 6)

    def test_enumerate_respects_the_budget(self):
        annulus = load_fixture("annulus")
        moves = enumerate_moves(annulus, ExplorationBudget(max_crossings=1))
        self.assertEqual(moves, [])
        moves = enumerate_moves(annulus, ExplorationBudget(max_crossings=2))
        self.assertEqual({move.kind for move in moves}, {MoveKind.r1_add})
        self.assertEqual(len(moves), 3 * 2 * 2)

    def test_enumerate_counts_tongues(self):
        annulus = load_fixture("annulus")
        moves = enumerate_moves(annulus, ExplorationBudget(max_crossings=3, max_word_length=0))
        tongues = [move for move in moves if move.kind is MoveKind.r2_add]
        self.assertEqual(len(tongues), 6 * 1 * 2 * 2 * 2)
        self.assertEqual(enumerate_moves(annulus, insertions=False), [])


class TraceTestCase(unittest.TestCase):
    def test_format_move(self):
        trace = pull_sprout(load_fixture("annulus"), (0, 0), "t")
        self.assertEqual(
            format_trace(trace), "R2-add site=K1@0 site=K1@0 word=T side=+ over=1 swap=0 new=n1,n2 | +n1,n2\n"
        )

    def test_log_replays(self):
        start = load_fixture("sphere-trefoil")
        trace = random_walk(start, 8, seed=3)
        replayed = parse_trace(format_trace(trace), start)
        self.assertEqual(replayed.final, trace.final)
        self.assertEqual(replayed.moves, trace.moves)

    def test_comments_in_logs(self):
        start = load_fixture("annulus")
        replayed = parse_trace("# curl\nR1-add site=K1@0 side=- over=0 new=n1 | +n1\n\nR1-remove crossing=n1\n", start)
        self.assertEqual(len(replayed), 2)
        self.assertEqual(replayed.final, start)

    def test_syntax_errors(self):
        start = load_fixture("annulus")
        with self.assertRaises(TraceSyntaxError) as context:
            parse_trace("# nothing\nbogus move\n", start)
        self.assertEqual(context.exception.line, 2)
        with self.assertRaises(TraceSyntaxError):
            parse_trace("R1-add site=K9@0 side=+ over=0 new=n1\n", start)

    def test_replay_and_correspondence(self):
        start = load_fixture("annulus")
        trace = replay(start, [
            Move(MoveKind.r1_add, ("n1",), ((0, 1),), side=1, over=1),
            Move(MoveKind.r1_remove, ("n1",)),
        ])
        self.assertEqual(trace.correspondence(), {"x1": "x1"})
        self.assertEqual(trace.before(1), trace.diagrams[0])
        self.assertTrue(check_trace(trace).ok)


class RandomWalkTestCase(unittest.TestCase):
    def test_walks_are_deterministic(self):
        start = load_fixture("torus")
        self.assertEqual(format_trace(random_walk(start, 10, seed=7)), format_trace(random_walk(start, 10, seed=7)))

    def test_walks_preserve_indices(self):
        for name in ("annulus", "torus", "hopf", "long-trefoil", "triangle"):
            with self.subTest(name=name):
                trace = random_walk(load_fixture(name), 12, seed=11)
                report = check_trace(trace)
                self.assertTrue(report.ok, report.violations)
                self.assertEqual(report.steps, len(trace))

    def test_stalled_walk_warns(self):
        weights = MoveWeights(r1_add=0, r1_remove=1, r2_add=0, r2_remove=1, r3=0)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            trace = random_walk(load_fixture("annulus"), 5, seed=1, weights=weights)
        self.assertEqual(len(trace), 0)
        self.assertTrue(caught)

    def test_negative_steps(self):
        with self.assertRaises(ValueError):
            random_walk(load_fixture("annulus"), -1, seed=0)


if __name__ == '__main__':
    unittest.main()
