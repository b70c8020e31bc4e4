from __future__ import annotations
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

from sympy.combinatorics.free_groups import FreeGroupElement

from .enums import *
from .utils import format_signed, natural_key

Word = FreeGroupElement
"""An element of the free group over a surface alphabet. Surface group elements are stored as normal form words."""


@dataclass(frozen=True)
class EqualityVerdict:
    """The outcome of an equality test in a surface group.

    Attributes:
        verdict (Verdict): Whether the values are equal, different or undecided.
        bound (Optional[int]): For undecided verdicts, the exponent bound the search gave up at.
    """
    verdict: Verdict
    bound: Optional[int] = None

    def __str__(self):
        if self.verdict is Verdict.undecided:
            return f"undecided(bound={self.bound})"
        return str(self.verdict)

    @classmethod
    def equal(cls) -> EqualityVerdict:
        return cls(Verdict.equal)

    @classmethod
    def not_equal(cls) -> EqualityVerdict:
        return cls(Verdict.not_equal)

    @classmethod
    def undecided(cls, bound: Optional[int]) -> EqualityVerdict:
        return cls(Verdict.undecided, bound)

    @classmethod
    def from_bool(cls, value: bool) -> EqualityVerdict:
        return cls.equal() if value else cls.not_equal()

    @property
    def is_equal(self) -> bool:
        return self.verdict is Verdict.equal

    @property
    def is_not_equal(self) -> bool:
        return self.verdict is Verdict.not_equal

    @property
    def is_undecided(self) -> bool:
        return self.verdict is Verdict.undecided

    @classmethod
    def any_of(cls, verdicts: Iterable[EqualityVerdict]) -> EqualityVerdict:
        """Combines verdicts with a logical or.

        Args:
            verdicts (Iterable[EqualityVerdict]): The verdicts to combine.

        Returns:
            EqualityVerdict: Equal if any verdict is equal, not equal if every verdict is, undecided otherwise.
        """
        undecided = None
        for verdict in verdicts:
            if verdict.is_equal:
                return verdict
            if verdict.is_undecided:
                undecided = verdict if undecided is None else cls.undecided(max(undecided.bound or 0, verdict.bound or 0))
        return undecided or cls.not_equal()

    @classmethod
    def all_of(cls, verdicts: Iterable[EqualityVerdict]) -> EqualityVerdict:
        """Combines verdicts with a logical and.

        Args:
            verdicts (Iterable[EqualityVerdict]): The verdicts to combine.

        Returns:
            EqualityVerdict: Not equal if any verdict is not equal, equal if every verdict is, undecided otherwise.
        """
        undecided = None
        for verdict in verdicts:
            if verdict.is_not_equal:
                return verdict
            if verdict.is_undecided:
                undecided = verdict if undecided is None else cls.undecided(max(undecided.bound or 0, verdict.bound or 0))
        return undecided or cls.equal()


@dataclass(frozen=True)
class HalfExtraction:
    """The based halves of a self-crossing of a closed component.

    Attributes:
        crossing_id (str): The crossing the halves belong to.
        positive (Word): The based positive half, which runs from the undercrossing to the overcrossing.
        negative (Word): The based negative half.
        left (Word): The based left half.
        right (Word): The based right half.
        z_membership (ZMembership): Which signed half contains the basepoint of the component.
    """
    crossing_id: str
    positive: Word
    negative: Word
    left: Word
    right: Word
    z_membership: ZMembership


@dataclass(frozen=True)
class CrossingIndexValue:
    """The component type, order type and homotopy type of a crossing of a classical diagram.

    Homotopy types of closed self-crossings live modulo conjugation by powers of ``kappa`` and homotopy types of
    mixed crossings live in the double coset of ``kappa`` and ``kappa_other``, so two values are compared with
    :func:`tangle_tribes.classifier.index_values_agree`, not with ``==``.

    Attributes:
        crossing_id (str): The crossing.
        kind (CrossingKind): Whether the crossing is a long self-crossing, a closed self-crossing or mixed.
        component_type (tuple[int, int]): The 1-based indices of the overcrossing and undercrossing components.
        h (Word): A representative of the homotopy type.
        kappa (Word): The class of the first component of the pair, the identity for long components.
        kappa_other (Optional[Word]): For mixed crossings, the class of the second component of the pair.
        order (Optional[int]): The order type of a long self-crossing, ``-1`` for an early undercrossing.
        sign (Optional[int]): The sign of the crossing.
    """
    crossing_id: str
    kind: CrossingKind
    component_type: tuple[int, int]
    h: Word
    kappa: Word
    kappa_other: Optional[Word] = None
    order: Optional[int] = None
    sign: Optional[int] = None


@dataclass(frozen=True)
class RefinedFlatType:
    """The refined flat types of a crossing of a flat diagram.

    Attributes:
        component_type (tuple[int, int]): The refined flat component type.
        order (Optional[int]): The refined order type, for self-crossings of long components only.
        h (Word): A representative of the refined flat homotopy type. For closed self-crossings this is the left half.
    """
    component_type: tuple[int, int]
    order: Optional[int]
    h: Word


@dataclass(frozen=True)
class FlatIndexValue:
    """The flat component type and flat homotopy type of a crossing of a flat diagram.

    Attributes:
        crossing_id (str): The crossing.
        kind (CrossingKind): The structural type of the crossing.
        components (tuple[int, int]): The unordered flat component type, stored in increasing order.
        h (Word): A representative of the flat homotopy type. Closed self-crossings are additionally taken
            modulo the involution ``x -> kappa x^-1``.
        kappa (Word): The class of the first component of the pair.
        kappa_other (Optional[Word]): For mixed crossings, the class of the second component.
        refined (Optional[RefinedFlatType]): The refined types the phratry comparison uses.
    """
    crossing_id: str
    kind: CrossingKind
    components: tuple[int, int]
    h: Word
    kappa: Word
    kappa_other: Optional[Word] = None
    refined: Optional[RefinedFlatType] = None


@dataclass(frozen=True)
class UniversalIndexValue:
    """The value of the universal index of a crossing, or of one of its computable coarsenings.

    Attributes:
        crossing_id (str): The crossing.
        coarsening (Coarsening): The quotient the value is computed in.
        component_type (tuple[int, int]): The component type of the crossing.
        order (Optional[int]): The order type for long self-crossings.
        h (Union[Word, tuple[int, ...]]): A representative of the homotopy part, or an exponent vector for the
            homology coarsening.
        key (Optional[str]): A canonical text key of the homotopy part, or ``None`` if no canonical
            representative can be computed on the surface.
    """
    crossing_id: str
    coarsening: Coarsening
    component_type: tuple[int, int]
    order: Optional[int]
    h: Union[Word, tuple[int, ...]]
    key: Optional[str]

    def __str__(self):
        return self.key if self.key is not None else f"<opaque {self.crossing_id}>"


@dataclass
class IndexPolynomial:
    """A formal integer combination of index values, summed over the crossings of a diagram.

    Attributes:
        selector (IndexSelector): The index that was summed.
        coefficients (dict[str, int]): Canonical index keys mapped to their non-zero coefficients.
    """
    selector: IndexSelector
    coefficients: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        self.coefficients = {
            key: value for key, value in sorted(self.coefficients.items(), key=lambda item: natural_key(item[0]))
            if value
        }

    def __str__(self):
        if not self.coefficients:
            return "0"
        return " ".join(f"{format_signed(value)}[{key}]" for key, value in self.coefficients.items())

    def __len__(self):
        return len(self.coefficients)


@dataclass(frozen=True)
class Partition:
    """A partition of the crossings of a diagram into tribes or phratries.

    Attributes:
        name (str): ``tribes`` or ``phratries``.
        classes (tuple[tuple[str, ...], ...]): The classes in order of first occurrence, each in walk order.
        labels (dict[str, str]): Crossing ids mapped to their class labels, ``T1``, ``T2``, ... or ``P1``, ...
        self_dual (frozenset[str]): Labels of the classes that equal their own dual.
        undecided (tuple[tuple[str, str], ...]): Pairs of crossings whose comparison ended undecided.
    """
    name: str
    classes: tuple[tuple[str, ...], ...]
    labels: dict[str, str]
    self_dual: frozenset[str] = frozenset()
    undecided: tuple[tuple[str, str], ...] = ()

    def label(self, crossing_id: str) -> str:
        """The class label of a crossing, with a ``*self-dual`` mark where it applies."""
        label = self.labels[crossing_id]
        return f"{label}*self-dual" if label in self.self_dual else label

    def class_of(self, crossing_id: str) -> tuple[str, ...]:
        label = self.labels[crossing_id]
        return self.classes[int(label[1:]) - 1]

    def sets(self) -> set[frozenset[str]]:
        """The classes as a set of frozensets, for comparing partitions regardless of labels."""
        return {frozenset(members) for members in self.classes}


@dataclass(frozen=True)
class CrossingReport:
    """One line of the per-crossing classification report.

    Attributes:
        crossing_id (str): The crossing.
        component_type (tuple[int, int]): The component type, or the refined flat component type.
        order (Optional[int]): The order type, reported for long self-crossings only.
        sign (Optional[int]): The sign of a classical crossing.
        h (str): The canonical key of the homotopy type, or an opaque handle.
        tribe (str): The tribe label.
        phratry (str): The phratry label, possibly marked self-dual.
    """
    crossing_id: str
    component_type: tuple[int, int]
    order: Optional[int]
    sign: Optional[int]
    h: str
    tribe: str
    phratry: str

    def __str__(self):
        parts = [self.crossing_id, f"τ=({self.component_type[0]},{self.component_type[1]})"]
        if self.order is not None:
            parts.append(f"o={format_signed(self.order)}")
        if self.sign is not None:
            parts.append(f"sign={format_signed(self.sign)}")
        parts.extend([f"h={self.h}", f"tribe={self.tribe}", f"phratry={self.phratry}"])
        return " ".join(parts)

    def machine(self) -> str:
        """The report line as tab separated ``key=value`` fields in a fixed order."""
        fields = [
            ("crossing", self.crossing_id),
            ("tau", f"{self.component_type[0]},{self.component_type[1]}"),
            ("o", format_signed(self.order) if self.order is not None else "-"),
            ("sign", format_signed(self.sign) if self.sign is not None else "-"),
            ("h", self.h),
            ("tribe", self.tribe),
            ("phratry", self.phratry),
        ]
        return "\t".join(f"{key}={value}" for key, value in fields)


@dataclass(frozen=True)
class ExplorationBudget:
    """Bounds on the diagram space the phratry graph exploration visits.

    Attributes:
        max_crossings (Optional[int]): The largest number of crossings a visited diagram may have.
            ``None`` means two more than the root diagram.
        max_word_length (int): The longest connecting word used by second Reidemeister insertions.
        max_depth (int): The largest number of moves between the root diagram and a visited diagram.
    """
    max_crossings: Optional[int] = None
    max_word_length: int = 1
    max_depth: int = 2

    def __post_init__(self):
        if self.max_word_length < 0 or self.max_depth < 0:
            raise ValueError("Exploration budgets must not be negative")

    def crossing_limit(self, root_crossings: int) -> int:
        """Resolves :attr:`max_crossings` against the number of crossings of the root diagram."""
        return root_crossings + 2 if self.max_crossings is None else self.max_crossings


@dataclass(frozen=True)
class MoveWeights:
    """Relative weights of the move kinds in a random walk.

    Attributes:
        r1_add (float): Weight of first Reidemeister insertions.
        r1_remove (float): Weight of first Reidemeister removals.
        r2_add (float): Weight of second Reidemeister insertions.
        r2_remove (float): Weight of second Reidemeister removals.
        r3 (float): Weight of third Reidemeister moves.
    """
    r1_add: float = 2
    r1_remove: float = 3
    r2_add: float = 2
    r2_remove: float = 3
    r3: float = 2

    def weight(self, kind: MoveKind) -> float:
        return {
            MoveKind.r1_add: self.r1_add,
            MoveKind.r1_remove: self.r1_remove,
            MoveKind.r2_add: self.r2_add,
            MoveKind.r2_remove: self.r2_remove,
            MoveKind.r3: self.r3,
        }[kind]
