from __future__ import annotations
import argparse
import logging
import os
import sys
from dataclasses import dataclass, replace
from typing import Mapping, Optional, Sequence, TextIO

from .classifier import CrossingClassifier
from .diagram import TangleDiagram, parse_diagram, serialize
from .enums import *
from .exceptions import DiagramValidationError, InputError, MoveError, TangleTribesError
from .explorer import build_phratry_graph, compare_with_classifier
from .fixtures import fixture_text
from .moves import check_trace, format_trace, parse_trace, random_walk
from .selftest import run_selftest
from .types import ExplorationBudget, Partition

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INPUT = 2

FIXTURE_PREFIX = "fixture:"
COLOR_VALUES = ("1", "true", "always")
COMMANDS = ("validate", "classify", "tribes", "phratries", "poly", "replay", "randomwalk", "explore", "selftest")


@dataclass(frozen=True)
class RunConfig:
    """The settings of one command line run.

    Attributes:
        command (str): The subcommand.
        paths (tuple[str, ...]): Diagram paths or ``fixture:<name>`` references.
        trace (Optional[str]): The trace log path of ``replay``.
        coarsening (Optional[Coarsening]): The quotient of the universal index, ``None`` for the surface default.
        selector (IndexSelector): The index an index polynomial sums over.
        budget (ExplorationBudget): The limits of ``explore``, and the crossing and word limits of ``randomwalk``.
        seed (Optional[int]): The seed of ``randomwalk``.
        steps (int): The number of random moves.
        bound (Optional[int]): Overrides the search bound on closed surfaces of genus at least 2.
        machine (bool): Emit tab separated ``key=value`` records instead of human readable lines.
        color (bool): Colour labels in human readable output.
        scale (int): The instance multiplier of ``selftest``.
        verbosity (int): ``0`` for warnings only, ``1`` for info, ``2`` for debug logging.
    """
    command: str
    paths: tuple[str, ...] = ()
    trace: Optional[str] = None
    coarsening: Optional[Coarsening] = None
    selector: IndexSelector = IndexSelector.universal
    budget: ExplorationBudget = ExplorationBudget()
    seed: Optional[int] = None
    steps: int = 20
    bound: Optional[int] = None
    machine: bool = False
    color: bool = False
    scale: int = 1
    verbosity: int = 0

    @classmethod
    def from_args(cls, args: argparse.Namespace, environ: Optional[Mapping[str, str]] = None) -> RunConfig:
        """Builds the settings from parsed arguments and the environment."""
        environ = os.environ if environ is None else environ
        paths = getattr(args, "paths", None) or ([args.path] if getattr(args, "path", None) else [])
        budget = ExplorationBudget(
            max_crossings=getattr(args, "budget_crossings", None),
            max_word_length=getattr(args, "budget_word", 1),
            max_depth=getattr(args, "depth", 2),
        )
        coarsening = getattr(args, "coarsening", None)
        return cls(
            command=args.command,
            paths=tuple(paths),
            trace=getattr(args, "trace", None),
            coarsening=Coarsening(coarsening) if coarsening else None,
            selector=IndexSelector(getattr(args, "selector", None) or IndexSelector.universal.value),
            budget=budget,
            seed=getattr(args, "seed", None),
            steps=getattr(args, "steps", 20),
            bound=args.bound,
            machine=args.machine,
            color=environ.get("TDG_COLOR", "").lower() in COLOR_VALUES,
            scale=getattr(args, "scale", 1),
            verbosity=args.verbose,
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tangle-tribes",
        description="Tribes, phratries and crossing indices of tangle diagrams on surfaces.",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="log to stderr, twice for debug output")
    parser.add_argument("--machine", action="store_true", help="emit tab separated key=value records")
    parser.add_argument("--bound", type=int, default=None,
                        help="search bound for closed surfaces of genus at least 2 (default: 32)")
    commands = parser.add_subparsers(dest="command", required=True)

    validate = commands.add_parser("validate", help="check diagram files")
    validate.add_argument("paths", nargs="+", metavar="PATH")

    classify = commands.add_parser("classify", help="report the types and classes of every crossing")
    classify.add_argument("path", metavar="PATH")
    classify.add_argument("--coarsening", choices=[item.value for item in Coarsening])

    for name, description in (("tribes", "partition the crossings into tribes"),
                              ("phratries", "partition the crossings into phratries")):
        command = commands.add_parser(name, help=description)
        command.add_argument("path", metavar="PATH")

    poly = commands.add_parser("poly", help="compute an index polynomial")
    poly.add_argument("path", metavar="PATH")
    poly.add_argument("--selector", choices=[item.value for item in IndexSelector], default="universal")
    poly.add_argument("--coarsening", choices=[item.value for item in Coarsening])

    replay = commands.add_parser("replay", help="replay a trace log and check index preservation")
    replay.add_argument("path", metavar="PATH")
    replay.add_argument("trace", metavar="TRACE")

    walk = commands.add_parser("randomwalk", help="apply random moves and check index preservation")
    walk.add_argument("path", metavar="PATH")
    walk.add_argument("--seed", type=int, required=True)
    walk.add_argument("--steps", type=int, default=20)
    walk.add_argument("--budget-crossings", type=int, default=None,
                      help="crossing limit of insertions (default: four more than the diagram)")
    walk.add_argument("--budget-word", type=int, default=1, help="longest connecting word of tongues")

    explore = commands.add_parser("explore", help="build the phratry graph and compare it with the classifier")
    explore.add_argument("path", metavar="PATH")
    explore.add_argument("--budget-crossings", type=int, default=None,
                         help="crossing limit of visited diagrams (default: two more than the diagram)")
    explore.add_argument("--budget-word", type=int, default=1)
    explore.add_argument("--depth", type=int, default=2)

    selftest = commands.add_parser("selftest", help="run the acceptance checks")
    selftest.add_argument("--scale", type=int, default=1)
    return parser


def _paint(text: str, code: str, config: RunConfig) -> str:
    return f"\x1b[{code}m{text}\x1b[0m" if config.color and not config.machine else text


def read_source(source: str) -> str:
    """Reads a diagram or trace file, or a ``fixture:<name>`` reference.

    Raises:
        InputError: The file or fixture does not exist or cannot be read.
    """
    if source.startswith(FIXTURE_PREFIX):
        name = source[len(FIXTURE_PREFIX):]
        try:
            return fixture_text(name)
        except KeyError:
            raise InputError(source, "unknown fixture") from None
    try:
        with open(source, "r", encoding="utf-8") as file:
            return file.read()
    except OSError as error:
        raise InputError(source, error.strerror or str(error)) from None


def read_diagram(source: str, config: RunConfig) -> TangleDiagram:
    diagram = parse_diagram(read_source(source))
    if config.bound is not None:
        diagram = replace(diagram, surface=replace(diagram.surface, search_bound=config.bound))
    return diagram


def _format_partition(partition: Partition, config: RunConfig) -> list[str]:
    lines = []
    for members in partition.classes:
        label = partition.label(members[0])
        if config.machine:
            lines.append(f"class={label}\tcrossings={','.join(members)}")
        else:
            lines.append(f"{_paint(label, '1;36', config)} {{{','.join(members)}}}")
    for v, w in partition.undecided:
        lines.append(f"undecided={v},{w}" if config.machine else f"undecided {v} {w}")
    return lines


def cmd_validate(config: RunConfig, out: TextIO) -> int:
    status = EXIT_OK
    for source in config.paths:
        try:
            diagram = read_diagram(source, config)
        except DiagramValidationError as error:
            status = EXIT_INPUT
            for violation in error.violations:
                print(f"{source}:{violation.line}: {violation.code}: {violation.message}", file=out)
            continue
        except InputError as error:
            status = EXIT_INPUT
            print(f"{source}: {error.reason}", file=out)
            continue
        kind = "flat" if diagram.flat else "classical"
        print(f"{source}: ok ({kind}, {len(diagram.components)} components, {len(diagram.crossings)} crossings)",
              file=out)
    return status


def cmd_classify(config: RunConfig, out: TextIO) -> int:
    classifier = CrossingClassifier(read_diagram(config.paths[0], config))
    for line in classifier.report(config.coarsening):
        print(line.machine() if config.machine else str(line), file=out)
    return EXIT_OK


def cmd_tribes(config: RunConfig, out: TextIO) -> int:
    partition = CrossingClassifier(read_diagram(config.paths[0], config)).tribes()
    for line in _format_partition(partition, config):
        print(line, file=out)
    return EXIT_OK


def cmd_phratries(config: RunConfig, out: TextIO) -> int:
    partition = CrossingClassifier(read_diagram(config.paths[0], config)).phratries()
    for line in _format_partition(partition, config):
        print(line, file=out)
    return EXIT_OK


def cmd_poly(config: RunConfig, out: TextIO) -> int:
    polynomial = CrossingClassifier(read_diagram(config.paths[0], config)).index_polynomial(
        config.selector, config.coarsening
    )
    if config.machine:
        for key, value in polynomial.coefficients.items():
            print(f"key={key}\tcoefficient={value}", file=out)
    else:
        print(polynomial, file=out)
    return EXIT_OK


def _report_trace(trace, config: RunConfig, out: TextIO) -> int:
    report = check_trace(trace)
    print(serialize(trace.final), end="", file=out)
    summary = str(report)
    print(_paint(summary, "32" if report.ok else "31", config), file=out)
    for violation in report.violations:
        print(f"  {violation}", file=out)
    return EXIT_OK if report.ok else EXIT_FAILURE


def cmd_replay(config: RunConfig, out: TextIO) -> int:
    diagram = read_diagram(config.paths[0], config)
    trace = parse_trace(read_source(config.trace), diagram)
    return _report_trace(trace, config, out)


def cmd_randomwalk(config: RunConfig, out: TextIO) -> int:
    diagram = read_diagram(config.paths[0], config)
    trace = random_walk(
        diagram, config.steps, config.seed, max_crossings=config.budget.max_crossings,
        max_word_length=config.budget.max_word_length,
    )
    print(format_trace(trace), end="", file=out)
    return _report_trace(trace, config, out)


def cmd_explore(config: RunConfig, out: TextIO) -> int:
    diagram = read_diagram(config.paths[0], config)
    graph = build_phratry_graph(diagram, config.budget)
    for line in graph.dump():
        print(line, file=out)
    report = compare_with_classifier(graph)
    print(_paint(str(report), "32" if report.ok else "31", config), file=out)
    for comparison in report.violations + report.gaps:
        print(f"  {comparison}", file=out)
    return EXIT_OK if report.ok else EXIT_FAILURE


def cmd_selftest(config: RunConfig, out: TextIO) -> int:
    results = run_selftest(config.scale)
    for result in results:
        lines = str(result).splitlines()
        lines[0] = _paint(lines[0], "32" if result.passed else "31", config)
        print("\n".join(lines), file=out)
    return EXIT_OK if all(result.passed for result in results) else EXIT_FAILURE


HANDLERS = {
    "validate": cmd_validate,
    "classify": cmd_classify,
    "tribes": cmd_tribes,
    "phratries": cmd_phratries,
    "poly": cmd_poly,
    "replay": cmd_replay,
    "randomwalk": cmd_randomwalk,
    "explore": cmd_explore,
    "selftest": cmd_selftest,
}


def run(config: RunConfig, out: Optional[TextIO] = None, err: Optional[TextIO] = None) -> int:
    """Runs one subcommand and maps errors to exit codes.

    Args:
        config (RunConfig): The settings.
        out (Optional[TextIO]): Where reports are written, stdout by default.
        err (Optional[TextIO]): Where error messages are written, stderr by default.

    Returns:
        int: ``0`` on success, ``1`` on a verification failure, ``2`` on an input error.
    """
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        return HANDLERS[config.command](config, out)
    except DiagramValidationError as error:
        for violation in error.violations:
            print(f"line {violation.line}: {violation.code}: {violation.message}", file=err)
        return EXIT_INPUT
    except (InputError, MoveError) as error:
        print(error, file=err)
        return EXIT_INPUT
    except TangleTribesError as error:
        logger.debug("command failed", exc_info=True)
        print(error, file=err)
        return EXIT_INPUT


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = RunConfig.from_args(args)
    except ValueError as error:
        parser.error(str(error))
    level = {0: logging.WARNING, 1: logging.INFO}.get(config.verbosity, logging.DEBUG)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    logger.debug("running %s", config)
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
