import io
import os
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout
from tangle_tribes.cli import EXIT_FAILURE, EXIT_INPUT, EXIT_OK, RunConfig, build_parser, main, read_source, run
from tangle_tribes.enums import Coarsening, IndexSelector
from tangle_tribes.exceptions import InputError, TangleTribesError

BROKEN = """\
surface genus=0 boundary=0
component K1 closed
walk: x1:over 1
"""


def invoke(*argv: str) -> tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        status = main(list(argv))
    return status, out.getvalue(), err.getvalue()


class ConfigTestCase(unittest.TestCase):
    def test_defaults(self):
        args = build_parser().parse_args(["poly", "fixture:torus"])
        config = RunConfig.from_args(args, environ={})
        self.assertEqual(config.paths, ("fixture:torus",))
        self.assertIs(config.selector, IndexSelector.universal)
        self.assertIsNone(config.coarsening)
        self.assertFalse(config.color)
        self.assertFalse(config.machine)

    def test_flags(self):
        args = build_parser().parse_args([
            "--machine", "--bound", "6", "-vv", "poly", "fixture:torus",
            "--selector", "homology", "--coarsening", "mod-kappa",
        ])
        config = RunConfig.from_args(args, environ={"TDG_COLOR": "always"})
        self.assertTrue(config.machine)
        self.assertTrue(config.color)
        self.assertEqual(config.bound, 6)
        self.assertEqual(config.verbosity, 2)
        self.assertIs(config.selector, IndexSelector.homology)
        self.assertIs(config.coarsening, Coarsening.mod_kappa)

    def test_explore_budget(self):
        args = build_parser().parse_args(["explore", "fixture:annulus", "--budget-crossings", "3", "--depth", "1"])
        config = RunConfig.from_args(args, environ={})
        self.assertEqual(config.budget.max_crossings, 3)
        self.assertEqual(config.budget.max_depth, 1)
        self.assertEqual(config.budget.max_word_length, 1)

    def test_randomwalk_needs_a_seed(self):
        with redirect_stderr(io.StringIO()), self.assertRaises(SystemExit):
            build_parser().parse_args(["randomwalk", "fixture:annulus"])


class CommandTestCase(unittest.TestCase):
    def test_validate(self):
        status, out, _ = invoke("validate", "fixture:sphere-trefoil", "fixture:triangle")
        self.assertEqual(status, EXIT_OK)
        self.assertIn("fixture:sphere-trefoil: ok (classical, 1 components, 3 crossings)", out)
        self.assertIn("fixture:triangle: ok (flat", out)

    def test_validate_reports_every_file(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "broken.tdg")
            with open(path, "w", encoding="utf-8") as file:
                file.write(BROKEN)
            status, out, _ = invoke("validate", path, "fixture:annulus", "fixture:nowhere")
        self.assertEqual(status, EXIT_INPUT)
        self.assertIn(f"{path}:", out)
        self.assertIn("fixture:annulus: ok", out)
        self.assertIn("fixture:nowhere: unknown fixture", out)

    def test_tribes(self):
        status, out, _ = invoke("tribes", "fixture:sphere-trefoil")
        self.assertEqual(status, EXIT_OK)
        self.assertEqual(len(out.splitlines()), 1)
        self.assertIn("{x1,x2,x3}", out)

    def test_machine_tribes(self):
        status, out, _ = invoke("--machine", "tribes", "fixture:annulus-two")
        self.assertEqual(status, EXIT_OK)
        lines = out.splitlines()
        self.assertEqual(len(lines), 2)
        self.assertTrue(lines[0].startswith("class=T1"))
        self.assertTrue(lines[0].endswith("\tcrossings=x1"))
        self.assertTrue(lines[1].endswith("\tcrossings=x2"))

    def test_phratries(self):
        status, out, _ = invoke("phratries", "fixture:hopf")
        self.assertEqual(status, EXIT_OK)
        self.assertTrue(out.startswith("P1"))

    def test_classify(self):
        status, out, _ = invoke("classify", "fixture:long-trefoil")
        self.assertEqual(status, EXIT_OK)
        lines = out.splitlines()
        self.assertEqual(len(lines), 3)
        self.assertTrue(lines[0].startswith("x1 "))
        self.assertIn("o=", lines[1])

    def test_poly(self):
        status, out, _ = invoke("poly", "fixture:annulus-two")
        self.assertEqual(status, EXIT_OK)
        self.assertIn("[2]", out)
        self.assertIn("[3]", out)
        status, out, _ = invoke("--machine", "poly", "fixture:torus", "--selector", "homology")
        self.assertEqual(status, EXIT_OK)
        self.assertTrue(all(line.startswith("key=") for line in out.splitlines()))

    def test_flat_diagrams_have_no_polynomial(self):
        status, out, err = invoke("poly", "fixture:triangle")
        self.assertEqual(status, EXIT_INPUT)
        self.assertEqual(out, "")
        self.assertTrue(err)

    def test_replay(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "curl.log")
            with open(path, "w", encoding="utf-8") as file:
                file.write("R1-add site=K1@0 side=- over=0 new=n1 | +n1\nR1-remove crossing=n1\n")
            status, out, _ = invoke("replay", "fixture:annulus", path)
        self.assertEqual(status, EXIT_OK)
        self.assertIn("ok: 2 steps", out)
        self.assertTrue(out.startswith("surface genus=0 boundary=2"))

    def test_replay_of_a_bad_log(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "bad.log")
            with open(path, "w", encoding="utf-8") as file:
                file.write("bogus move\n")
            status, out, err = invoke("replay", "fixture:annulus", path)
        self.assertEqual(status, EXIT_INPUT)
        self.assertEqual(out, "")
        self.assertTrue(err)

    def test_randomwalk(self):
        status, out, _ = invoke("randomwalk", "fixture:sphere-trefoil", "--seed", "5", "--steps", "6")
        self.assertEqual(status, EXIT_OK)
        self.assertRegex(out, r"ok: \d+ steps")
        again = invoke("randomwalk", "fixture:sphere-trefoil", "--seed", "5", "--steps", "6")
        self.assertEqual(again[1], out)

    def test_explore_unknot(self):
        status, out, _ = invoke("explore", "fixture:sphere-unknot", "--depth", "0")
        self.assertEqual(status, EXIT_OK)
        self.assertIn("ok", out)

    def test_missing_files(self):
        status, out, err = invoke("tribes", os.path.join(tempfile.gettempdir(), "no-such-diagram.tdg"))
        self.assertEqual(status, EXIT_INPUT)
        self.assertIn("Cannot read", err)

    def test_run_writes_to_the_given_streams(self):
        out = io.StringIO()
        status = run(RunConfig("tribes", paths=("fixture:annulus",)), out=out)
        self.assertEqual(status, EXIT_OK)
        self.assertIn("{x1}", out.getvalue())

    def test_colour(self):
        out = io.StringIO()
        run(RunConfig("tribes", paths=("fixture:annulus",), color=True), out=out)
        self.assertIn("\x1b[", out.getvalue())
        out = io.StringIO()
        run(RunConfig("tribes", paths=("fixture:annulus",), color=True, machine=True), out=out)
        self.assertNotIn("\x1b[", out.getvalue())

    def test_exit_codes_are_distinct(self):
        self.assertEqual(len({EXIT_OK, EXIT_FAILURE, EXIT_INPUT}), 3)

    def test_unreadable_input_is_a_package_error(self):
        self.assertTrue(issubclass(InputError, TangleTribesError))
        with self.assertRaises(TangleTribesError) as context:
            read_source("fixture:nowhere")
        self.assertIsInstance(context.exception, InputError)
        self.assertEqual(context.exception.reason, "unknown fixture")
        self.assertEqual(str(context.exception), "Cannot read fixture:nowhere: unknown fixture")


if __name__ == '__main__':
    unittest.main()
