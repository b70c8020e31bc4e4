from __future__ import annotations
from dataclasses import dataclass
from typing import Any, Iterable, Optional


class TangleTribesError(Exception):
    """Base exception for every error raised by tangle-tribes."""
    pass


class GroupError(TangleTribesError):
    """Base exception for errors raised while computing in a surface group."""
    pass


class DiagramError(TangleTribesError):
    """Base exception for errors relating to a tangle diagram or its text form."""
    pass


class ClassificationError(TangleTribesError):
    """Base exception for errors raised while classifying crossings."""
    pass


class MoveError(TangleTribesError):
    """Base exception for errors relating to Reidemeister moves and move traces."""
    pass


class ExplorationError(TangleTribesError):
    """Base exception for errors raised by the brute-force phratry graph exploration."""
    pass


class UnknownGenerator(GroupError):
    """Raises if a word uses a letter that is not in the surface alphabet.

    Attributes:
        letter (str): The offending letter.
        alphabet (tuple[str, ...]): The generators of the presentation.
    """
    def __init__(self, letter: str, alphabet: Iterable[str]):
        """
        Args:
            letter (str): The offending letter.
            alphabet (Iterable[str]): The generators of the presentation.
        """
        self.letter = letter
        self.alphabet = tuple(alphabet)
        shown = ", ".join(self.alphabet) if self.alphabet else "empty alphabet"
        message = f'The letter {letter!r} is not a generator or inverse generator of this surface ({shown})'
        super().__init__(message)


class InvalidPresentation(GroupError):
    """Raises if a surface header cannot describe a compact oriented surface with the given alphabet.

    Attributes:
        genus (int): The requested genus.
        boundary (int): The requested number of boundary components.
        reason (str): What is wrong with the request.
    """
    def __init__(self, genus: int, boundary: int, reason: str):
        """
        Args:
            genus (int): The requested genus.
            boundary (int): The requested number of boundary components.
            reason (str): What is wrong with the request.
        """
        self.genus = genus
        self.boundary = boundary
        self.reason = reason
        message = f'Invalid surface presentation genus={genus} boundary={boundary}: {reason}'
        super().__init__(message)


class TrivialKappa(GroupError):
    """Raises if a primitive root is requested for the identity element.

    Attributes:
        word (str): The textual form of the word that was passed.
    """
    def __init__(self, word: str):
        """
        Args:
            word (str): The textual form of the word that was passed.
        """
        self.word = word
        message = f'The word {word!r} is trivial and has no primitive root'
        super().__init__(message)


class UnsupportedPresentation(GroupError):
    """Raises if an operation is only implemented for free and abelian surface groups.

    Attributes:
        operation (str): The name of the operation.
        presentation (str): A description of the surface.
    """
    def __init__(self, operation: str, presentation: str):
        """
        Args:
            operation (str): The name of the operation.
            presentation (str): A description of the surface.
        """
        self.operation = operation
        self.presentation = presentation
        message = f'{operation} is not supported on {presentation}'
        super().__init__(message)


@dataclass(frozen=True)
class Violation:
    """A single validation problem in a ``.tdg`` text.

    Attributes:
        line (int): The 1-based line number, or 0 if the problem concerns the whole diagram.
        code (str): A stable identifier such as ``alphabet-mismatch``.
        message (str): A human-readable explanation.
    """
    line: int
    code: str
    message: str

    def __str__(self):
        return f"line {self.line}: {self.code}: {self.message}" if self.line else f"{self.code}: {self.message}"


class DiagramValidationError(DiagramError):
    """Raises if a ``.tdg`` text or a constructed diagram violates the diagram invariants.

    Attributes:
        violations (list[Violation]): Every problem that was found, in line order.
    """
    def __init__(self, violations: list[Violation]):
        """
        Args:
            violations (list[Violation]): Every problem that was found, in line order.
        """
        self.violations = sorted(violations, key=lambda violation: violation.line)
        message = "; ".join(str(violation) for violation in self.violations)
        super().__init__(message or "invalid diagram")

    @property
    def codes(self) -> list[str]:
        """list[str]: The violation codes in line order."""
        return [violation.code for violation in self.violations]


class InputError(DiagramError):
    """Raises if a diagram file, trace file or fixture cannot be read.

    Attributes:
        source (str): The path or fixture reference.
        reason (str): What went wrong.
    """
    def __init__(self, source: str, reason: str):
        """
        Args:
            source (str): The path or fixture reference.
            reason (str): What went wrong.
        """
        self.source = source
        self.reason = reason
        message = f'Cannot read {source}: {reason}'
        super().__init__(message)


class UnknownCrossing(DiagramError):
    """Raises if a crossing id does not occur in the diagram.

    Attributes:
        crossing_id (str): The crossing id that was looked up.
    """
    def __init__(self, crossing_id: str):
        """
        Args:
            crossing_id (str): The crossing id that was looked up.
        """
        self.crossing_id = crossing_id
        message = f'The crossing {crossing_id!r} does not exist in this diagram'
        super().__init__(message)


class NotASelfCrossing(DiagramError):
    """Raises if an operation that needs a self-crossing is given a mixed crossing.

    Attributes:
        crossing_id (str): The mixed crossing.
    """
    def __init__(self, crossing_id: str):
        """
        Args:
            crossing_id (str): The mixed crossing.
        """
        self.crossing_id = crossing_id
        message = f'The crossing {crossing_id!r} joins two different components'
        super().__init__(message)


class ComponentNotClosed(DiagramError):
    """Raises if an operation that needs a closed component is given a long one.

    Attributes:
        component (str): The name of the long component.
    """
    def __init__(self, component: str):
        """
        Args:
            component (str): The name of the long component.
        """
        self.component = component
        message = f'The component {component!r} is long, not closed'
        super().__init__(message)


class RoleMismatch(DiagramError):
    """Raises if a classical-only accessor is used on a flat diagram or the other way round,
    or if a crossing lacks the structure the accessor needs.

    Attributes:
        crossing_id (Optional[str]): The crossing concerned, if any.
        expected (str): What the accessor needed.
    """
    def __init__(self, crossing_id: Optional[str], expected: str):
        """
        Args:
            crossing_id (Optional[str]): The crossing concerned, if any.
            expected (str): What the accessor needed.
        """
        self.crossing_id = crossing_id
        self.expected = expected
        target = f'crossing {crossing_id!r}' if crossing_id else 'diagram'
        message = f'The {target} is not {expected}'
        super().__init__(message)


class MissingChoice(DiagramError):
    """Raises if a flat diagram is lifted without an over/under choice for some crossing.

    Attributes:
        crossing_ids (list[str]): The crossings without a choice.
    """
    def __init__(self, crossing_ids: list[str]):
        """
        Args:
            crossing_ids (list[str]): The crossings without a choice.
        """
        self.crossing_ids = crossing_ids
        message = f'No over/under choice was given for the crossings {", ".join(crossing_ids)}'
        super().__init__(message)


class UndecidedComparison(ClassificationError):
    """Raises if a boolean tribe or phratry predicate depends on a search that ended undecided.

    Attributes:
        crossing_a (str): The first crossing.
        crossing_b (str): The second crossing.
        bound (Optional[int]): The exponent bound the search gave up at.
    """
    def __init__(self, crossing_a: str, crossing_b: str, bound: Optional[int]):
        """
        Args:
            crossing_a (str): The first crossing.
            crossing_b (str): The second crossing.
            bound (Optional[int]): The exponent bound the search gave up at.
        """
        self.crossing_a = crossing_a
        self.crossing_b = crossing_b
        self.bound = bound
        message = f'Comparing {crossing_a!r} with {crossing_b!r} is undecided within exponent bound {bound}'
        super().__init__(message)


class UndecidedKey(ClassificationError):
    """Raises if an index polynomial key cannot be decided for a crossing.

    Attributes:
        crossing_id (str): The crossing whose index value could not be grouped.
    """
    def __init__(self, crossing_id: str):
        """
        Args:
            crossing_id (str): The crossing whose index value could not be grouped.
        """
        self.crossing_id = crossing_id
        message = f'The index value of crossing {crossing_id!r} cannot be matched to a canonical key'
        super().__init__(message)


class UnsupportedCoarsening(ClassificationError):
    """Raises if a coarsening of the universal index is not computable on the surface.

    Attributes:
        coarsening (str): The requested coarsening.
        presentation (str): A description of the surface.
    """
    def __init__(self, coarsening: Any, presentation: str):
        """
        Args:
            coarsening (Any): The requested coarsening.
            presentation (str): A description of the surface.
        """
        self.coarsening = str(coarsening)
        self.presentation = presentation
        message = f'The {self.coarsening} coarsening is not available on {presentation}'
        super().__init__(message)


class InvalidSite(MoveError):
    """Raises if a move is applied at a site that does not satisfy its conditions.

    Attributes:
        move (Any): The rejected move.
        reason (str): Which condition failed.
    """
    def __init__(self, move: Any, reason: str):
        """
        Args:
            move (Any): The rejected move.
            reason (str): Which condition failed.
        """
        self.move = move
        self.reason = reason
        message = f'Cannot apply {move}: {reason}'
        super().__init__(message)


class PathNotOnDiagram(MoveError):
    """Raises if no strand of one crossing leads to another crossing.

    Attributes:
        source (str): The crossing to pull.
        target (str): The crossing to pull towards.
    """
    def __init__(self, source: str, target: str):
        """
        Args:
            source (str): The crossing to pull.
            target (str): The crossing to pull towards.
        """
        self.source = source
        self.target = target
        message = f'There is no path along the diagram from crossing {source!r} to crossing {target!r}'
        super().__init__(message)


class TraceSyntaxError(MoveError):
    """Raises if a line of a trace log cannot be read back as a move.

    Attributes:
        line (int): The 1-based line number.
        text (str): The offending line.
    """
    def __init__(self, line: int, text: str):
        """
        Args:
            line (int): The 1-based line number.
            text (str): The offending line.
        """
        self.line = line
        self.text = text
        message = f'Malformed trace line {line}: {text!r}'
        super().__init__(message)


class BudgetExhausted(ExplorationError):
    """Raises if a strict exploration runs out of budget before the frontier empties.

    Attributes:
        graph (Any): The partial phratry graph.
    """
    def __init__(self, graph: Any):
        """
        Args:
            graph (Any): The partial phratry graph.
        """
        self.graph = graph
        message = 'The exploration budget was exhausted before the search finished'
        super().__init__(message)
