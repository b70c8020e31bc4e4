from __future__ import annotations
from enum import Enum


class Verdict(Enum):
    """
    The outcome of an equality test in a surface group.

    Attributes:
        equal: The two values are equal.
        not_equal: The two values are different.
        undecided: A bounded search on a closed surface of genus at least 2 found nothing.
    """

    equal = "equal"
    not_equal = "not-equal"
    undecided = "undecided"

    def __str__(self):
        return self.value


class PresentationKind(Enum):
    """
    The word problem strategy a surface presentation uses.

    Attributes:
        trivial: Sphere or disk, the fundamental group is trivial.
        free: A surface with boundary, the fundamental group is free.
        torus: The closed torus, the fundamental group is free abelian of rank 2.
        hyperbolic: A closed surface of genus at least 2, solved with Dehn's algorithm.
    """

    trivial = "trivial"
    free = "free"
    torus = "torus"
    hyperbolic = "hyperbolic"

    def __str__(self):
        return self.value


class ComponentKind(Enum):
    """
    Whether a component of a tangle is a loop or an arc.

    Attributes:
        closed: A closed component, read cyclically from its basepoint.
        long: A component with both endpoints on the boundary of the surface.
    """

    closed = "closed"
    long = "long"

    def __str__(self):
        return self.value


class Role(Enum):
    """
    The role of a pass through a crossing.

    Attributes:
        over: The overcrossing strand of a classical crossing.
        under: The undercrossing strand of a classical crossing.
        first: The earlier visited strand of a flat crossing.
        second: The later visited strand of a flat crossing.
    """

    over = "over"
    under = "under"
    first = "first"
    second = "second"

    def __str__(self):
        return self.value

    @property
    def is_flat(self) -> bool:
        return self in (Role.first, Role.second)

    @property
    def opposite(self) -> Role:
        return {Role.over: Role.under, Role.under: Role.over, Role.first: Role.second, Role.second: Role.first}[self]


class Chirality(Enum):
    """
    Which way the second visited strand of a crossing passes the first visited strand.

    Attributes:
        left: The second strand passes from the right of the first strand to its left.
        right: The second strand passes from the left of the first strand to its right.
    """

    left = "L"
    right = "R"

    def __str__(self):
        return self.value

    @property
    def sign(self) -> int:
        return 1 if self is Chirality.left else -1

    @classmethod
    def from_sign(cls, value: int) -> Chirality:
        return cls.left if value > 0 else cls.right

    @property
    def flipped(self) -> Chirality:
        return Chirality.right if self is Chirality.left else Chirality.left


class CrossingKind(Enum):
    """
    The structural type of a crossing.

    Attributes:
        long_self: Both passes lie on the same long component.
        closed_self: Both passes lie on the same closed component.
        mixed: The passes lie on two different components.
    """

    long_self = "long-self"
    closed_self = "closed-self"
    mixed = "mixed"

    def __str__(self):
        return self.value


class ZMembership(Enum):
    """
    Which signed half of a closed self-crossing contains the basepoint of the component.

    Attributes:
        positive: The basepoint lies on the positive half, the crossing is met over-first.
        negative: The basepoint lies on the negative half, the crossing is met under-first.
    """

    positive = "z-in-positive"
    negative = "z-in-negative"

    def __str__(self):
        return self.value


class Coarsening(Enum):
    """
    The quotient the universal index is computed in.

    Attributes:
        exact_abelian: The exact universal index, on the sphere, disk, annulus and torus only.
        mod_kappa: Homotopy type modulo conjugation by powers of the component class.
        mod_centralizer: Homotopy type modulo conjugation by the centralizer of the component class.
        homology: The abelianized homotopy type.
    """

    exact_abelian = "exact-abelian"
    mod_kappa = "mod-kappa"
    mod_centralizer = "mod-centralizer"
    homology = "homology"

    def __str__(self):
        return self.value


class IndexSelector(Enum):
    """
    The index an index polynomial sums over.

    Attributes:
        universal: Component type, order type and homotopy type together.
        homotopy_only: The homotopy type on its own.
        component_only: The component type on its own.
        homology: The abelianized homotopy type together with the component type.
        intersection: The intersection number of the component with the positive half.
        nontrivial: The universal index, leaving out crossings whose value a curl can have.
    """

    universal = "universal"
    homotopy_only = "homotopy-only"
    component_only = "component-only"
    homology = "homology"
    intersection = "intersection"
    nontrivial = "nontrivial"

    def __str__(self):
        return self.value


class MoveKind(Enum):
    """
    The Reidemeister moves the move engine can apply.

    Attributes:
        r1_add: Insert a trivial curl.
        r1_remove: Remove a curl whose loop is null-homotopic.
        r2_add: Push a tongue of one strand over or across another strand.
        r2_remove: Remove a bigon whose boundary is null-homotopic.
        r3: Slide a strand across the crossing of two others.
    """

    r1_add = "R1-add"
    r1_remove = "R1-remove"
    r2_add = "R2-add"
    r2_remove = "R2-remove"
    r3 = "R3"

    def __str__(self):
        return self.value

    @property
    def is_insertion(self) -> bool:
        return self in (MoveKind.r1_add, MoveKind.r2_add)


class ComparisonStatus(Enum):
    """
    How the phratry graph and the classifier relate on one relation between two crossings.

    Attributes:
        agree: Both say the same.
        soundness_violation: The graph relates the crossings but the classifier tells them apart.
        completeness_gap: The classifier relates the crossings but the explored graph does not.
        undecided: The classifier could not decide.
    """

    agree = "agree"
    soundness_violation = "soundness-violation"
    completeness_gap = "completeness-gap"
    undecided = "undecided"

    def __str__(self):
        return self.value
