from __future__ import annotations
import itertools
import logging
import os
import re
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterator, Mapping, Optional, Sequence, Union

import networkx as nx

from .enums import *
from .exceptions import *
from .group import SurfacePresentation
from .types import HalfExtraction, Word
from .utils import format_sign, parse_sign

logger = logging.getLogger(__name__)

CROSSING_ID = re.compile(r"^[A-Za-z0-9_\-]+$")
ROLE_PAIRS = {frozenset((Role.over, Role.under)), frozenset((Role.first, Role.second))}


def derive_sign(chirality: Chirality, first_role: Role) -> int:
    """The sign of a classical crossing from its chirality and the role of its first visited pass.

    ``L`` with the first visited pass over is positive, and each of the two flips the sign.
    """
    return chirality.sign * (1 if first_role is Role.over else -1)


@dataclass(frozen=True)
class Pass:
    """A pass of a component through a crossing.

    Attributes:
        crossing_id (str): The crossing.
        role (Role): The role of the strand at the crossing.
    """
    crossing_id: str
    role: Role

    def __str__(self):
        return f"{self.crossing_id}:{self.role}"


@dataclass(frozen=True)
class Component:
    """A component of a tangle diagram, stored as a walk of holonomy words and passes.

    The walk reads ``words[0], passes[0], words[1], ..., passes[m-1], words[m]``. Each word is the class of the
    segment it labels, so the class of any subpath is the product of its words.

    Attributes:
        name (str): The name of the component.
        kind (ComponentKind): Closed or long.
        words (tuple[Word, ...]): The ``m + 1`` holonomy words.
        passes (tuple[Pass, ...]): The ``m`` passes.
    """
    name: str
    kind: ComponentKind
    words: tuple[Word, ...]
    passes: tuple[Pass, ...]

    def __post_init__(self):
        if len(self.words) != len(self.passes) + 1:
            raise ValueError(f"Component {self.name} needs {len(self.passes) + 1} words, got {len(self.words)}")

    def __len__(self):
        return len(self.passes)

    @property
    def is_closed(self) -> bool:
        return self.kind is ComponentKind.closed


@dataclass(frozen=True)
class Crossing:
    """A crossing of a tangle diagram.

    Attributes:
        crossing_id (str): The id of the crossing.
        chirality (Chirality): Which way the second visited strand crosses the first visited strand.
        sign (Optional[int]): The sign of a classical crossing. Derived from the chirality and the roles when
            omitted, always ``None`` on flat diagrams.
    """
    crossing_id: str
    chirality: Chirality
    sign: Optional[int] = None


@dataclass(frozen=True)
class PassLocation:
    """Where a pass sits in a diagram.

    Attributes:
        component (int): The 0-based index of the component.
        position (int): The 1-based position of the pass in the walk of the component.
        role (Role): The role of the pass.
    """
    component: int
    position: int
    role: Role


def pass_locations(components: Sequence[Component]) -> dict[str, list[PassLocation]]:
    """Collects the passes of every crossing in visiting order, keyed by crossing id in order of first visit."""
    locations: dict[str, list[PassLocation]] = {}
    for index, component in enumerate(components):
        for position, walk_pass in enumerate(component.passes, 1):
            locations.setdefault(walk_pass.crossing_id, []).append(PassLocation(index, position, walk_pass.role))
    return locations


@dataclass(frozen=True)
class TangleDiagram:
    """A diagram of a (flat) tangle on a compact oriented surface.

    Crossings are kept in the order of their first visit, where passes are ordered by component index and then
    by walk position. Closed components have their basepoint at the start of the walk.

    Attributes:
        surface (SurfacePresentation): The surface and its group presentation.
        components (tuple[Component, ...]): The components in order.
        crossings (tuple[Crossing, ...]): The crossings in order of first visit.
        flat (bool): Whether the diagram is flat, with first/second roles and no signs.

    Raises:
        DiagramValidationError: The components and crossings violate the diagram invariants.
    """
    surface: SurfacePresentation
    components: tuple[Component, ...]
    crossings: tuple[Crossing, ...]
    flat: bool = False

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        violations = self._structural_violations()
        if violations:
            raise DiagramValidationError(violations)
        by_id = {crossing.crossing_id: crossing for crossing in self.crossings}
        ordered = []
        for crossing_id, passes in pass_locations(self.components).items():
            crossing = by_id[crossing_id]
            if not self.flat and crossing.sign is None:
                crossing = replace(crossing, sign=derive_sign(crossing.chirality, passes[0].role))
            ordered.append(crossing)
        object.__setattr__(self, "crossings", tuple(ordered))

    def __str__(self):
        return serialize(self)

    # structure

    def _structural_violations(self) -> list[Violation]:
        violations = []
        if not self.components:
            violations.append(Violation(0, "empty-diagram", "a diagram needs at least one component"))
        names = [component.name for component in self.components]
        if len(set(names)) != len(names):
            violations.append(Violation(0, "syntax-error", "component names must be distinct"))
        for component in self.components:
            if component.kind is ComponentKind.long and self.surface.is_closed:
                violations.append(Violation(
                    0, "long-on-closed-surface", f"the long component {component.name} needs a surface with boundary"
                ))
            if any(word.group != self.surface.group for word in component.words):
                violations.append(Violation(
                    0, "alphabet-mismatch", f"a word of component {component.name} is not over the surface alphabet"
                ))
        locations = pass_locations(self.components)
        declared = {crossing.crossing_id: crossing for crossing in self.crossings}
        for crossing_id, passes in locations.items():
            if len(passes) != 2:
                violations.append(Violation(
                    0, "crossing-visited-wrong-number-of-times",
                    f"crossing {crossing_id} is visited {len(passes)} times"
                ))
                continue
            roles = [location.role for location in passes]
            if frozenset(roles) not in ROLE_PAIRS or any(role.is_flat != self.flat for role in roles):
                violations.append(Violation(
                    0, "role-mismatch", f"crossing {crossing_id} has the roles {roles[0]} and {roles[1]}"
                ))
                continue
            if self.flat and roles[0] is not Role.first:
                violations.append(Violation(
                    0, "role-mismatch", f"the first visited pass of crossing {crossing_id} must have the role first"
                ))
                continue
            crossing = declared.get(crossing_id)
            if crossing is None:
                violations.append(Violation(0, "missing-chirality", f"crossing {crossing_id} is not declared"))
            elif self.flat and crossing.sign is not None:
                violations.append(Violation(0, "role-mismatch", f"flat crossing {crossing_id} cannot have a sign"))
            elif not self.flat and crossing.sign is not None:
                if crossing.sign != derive_sign(crossing.chirality, roles[0]):
                    violations.append(Violation(
                        0, "inconsistent-sign", f"the sign of crossing {crossing_id} contradicts its chirality"
                    ))
        for crossing_id in declared:
            if crossing_id not in locations:
                violations.append(Violation(
                    0, "crossing-visited-wrong-number-of-times", f"crossing {crossing_id} is never visited"
                ))
        return violations

    @cached_property
    def _locations(self) -> dict[str, tuple[PassLocation, PassLocation]]:
        return {crossing_id: (passes[0], passes[1]) for crossing_id, passes in pass_locations(self.components).items()}

    @cached_property
    def _by_id(self) -> dict[str, Crossing]:
        return {crossing.crossing_id: crossing for crossing in self.crossings}

    @cached_property
    def _prefixes(self) -> list[list[Word]]:
        prefixes = []
        for component in self.components:
            current = self.surface.identity
            classes = [current]
            for word in component.words:
                current = self.surface.multiply(current, word)
                classes.append(current)
            prefixes.append(classes)
        return prefixes

    @property
    def crossing_ids(self) -> tuple[str, ...]:
        """The crossing ids in order of first visit."""
        return tuple(crossing.crossing_id for crossing in self.crossings)

    def crossing(self, crossing_id: str) -> Crossing:
        """Looks up a crossing.

        Raises:
            UnknownCrossing: The crossing does not exist.
        """
        try:
            return self._by_id[crossing_id]
        except KeyError:
            raise UnknownCrossing(crossing_id) from None

    def locate(self, crossing_id: str) -> tuple[PassLocation, PassLocation]:
        """The first visited and the second visited pass of a crossing.

        Raises:
            UnknownCrossing: The crossing does not exist.
        """
        self.crossing(crossing_id)
        return self._locations[crossing_id]

    def component_index(self, name: str) -> int:
        """The index of the component with the given name.

        Raises:
            KeyError: No component has the name.
        """
        for index, component in enumerate(self.components):
            if component.name == name:
                return index
        raise KeyError(name)

    def crossing_kind(self, crossing_id: str) -> CrossingKind:
        first, second = self.locate(crossing_id)
        if first.component != second.component:
            return CrossingKind.mixed
        if self.components[first.component].is_closed:
            return CrossingKind.closed_self
        return CrossingKind.long_self

    def prefix(self, component: int, position: int) -> Word:
        """The class of the walk of a component up to the given pass.

        Args:
            component (int): The 0-based component index.
            position (int): A pass position from ``1`` to ``m``, or ``m + 1`` for the whole walk.

        Returns:
            Word: The product of the words before the position.
        """
        return self._prefixes[component][position]

    def pass_classes(self, component: int) -> list[Word]:
        """The classes of all passes of a component, see :meth:`prefix`."""
        return self._prefixes[component][1:-1]

    def total(self, component: int) -> Word:
        """The product of all words of a component."""
        return self._prefixes[component][-1]

    def component_class(self, component: int) -> Word:
        """The homotopy class of a closed component, or the identity for a long component.

        Args:
            component (int): The 0-based component index.

        Returns:
            Word: The normal form of the class.
        """
        if not self.components[component].is_closed:
            return self.surface.identity
        return self.total(component)

    # halves and types

    def _self_positions(self, crossing_id: str) -> tuple[int, PassLocation, PassLocation]:
        first, second = self.locate(crossing_id)
        if first.component != second.component:
            raise NotASelfCrossing(crossing_id)
        return first.component, first, second

    def inner_half(self, crossing_id: str) -> Word:
        """The based loop of the part of the component between the two passes of a self-crossing."""
        component, first, second = self._self_positions(crossing_id)
        return self.surface.multiply(
            self.prefix(component, second.position), self.surface.inverse(self.prefix(component, first.position))
        )

    def outer_half(self, crossing_id: str) -> Word:
        """The based loop of the part of a closed component that contains the basepoint."""
        component, first, second = self._self_positions(crossing_id)
        return self.surface.multiply(
            self.prefix(component, first.position),
            self.surface.inverse(self.prefix(component, second.position)),
            self.total(component),
        )

    def extract_halves(self, crossing_id: str) -> HalfExtraction:
        """Computes the based signed and left/right halves of a self-crossing of a closed component.

        The positive half runs from the undercrossing to the overcrossing. On flat diagrams the signed halves are
        those of the lift in which every first visited pass is over.

        Args:
            crossing_id (str): The crossing.

        Returns:
            HalfExtraction: The halves.

        Raises:
            UnknownCrossing: The crossing does not exist.
            NotASelfCrossing: The crossing is mixed.
            ComponentNotClosed: The component is long.
        """
        component, first, _ = self._self_positions(crossing_id)
        if not self.components[component].is_closed:
            raise ComponentNotClosed(self.components[component].name)
        inner, outer = self.inner_half(crossing_id), self.outer_half(crossing_id)
        if first.role is Role.under:
            positive, negative, membership = inner, outer, ZMembership.negative
        else:
            positive, negative, membership = outer, inner, ZMembership.positive
        if self.crossing(crossing_id).chirality is Chirality.left:
            left, right = outer, inner
        else:
            left, right = inner, outer
        return HalfExtraction(crossing_id, positive, negative, left, right, membership)

    def _require_classical(self, crossing_id: Optional[str] = None):
        if self.flat:
            raise RoleMismatch(crossing_id, "a crossing of a classical diagram")

    def component_type(self, crossing_id: str) -> tuple[int, int]:
        """The 1-based indices of the overcrossing and the undercrossing component.

        Raises:
            RoleMismatch: The diagram is flat.
        """
        self._require_classical(crossing_id)
        first, second = self.locate(crossing_id)
        over, under = (first, second) if first.role is Role.over else (second, first)
        return over.component + 1, under.component + 1

    def order_type(self, crossing_id: str) -> int:
        """The order type of a self-crossing of a long component: ``-1`` for an early undercrossing and ``+1``
        for an early overcrossing.

        Raises:
            RoleMismatch: The diagram is flat or the crossing is not a self-crossing of a long component.
        """
        self._require_classical(crossing_id)
        if self.crossing_kind(crossing_id) is not CrossingKind.long_self:
            raise RoleMismatch(crossing_id, "a self-crossing of a long component")
        return -1 if self.locate(crossing_id)[0].role is Role.under else 1

    def crossing_sign(self, crossing_id: str) -> int:
        """The sign of a classical crossing.

        Raises:
            RoleMismatch: The diagram is flat.
        """
        self._require_classical(crossing_id)
        return self.crossing(crossing_id).sign

    def mixed_homotopy(self, crossing_id: str) -> tuple[Word, int, int]:
        """The path class of a mixed crossing from the basepoint of the lower indexed component to the basepoint
        of the other one, together with the two 0-based component indices in increasing order."""
        first, second = self.locate(crossing_id)
        if first.component == second.component:
            raise RoleMismatch(crossing_id, "a mixed crossing")
        return (
            self.surface.multiply(
                self.prefix(first.component, first.position),
                self.surface.inverse(self.prefix(second.component, second.position)),
            ),
            first.component,
            second.component,
        )

    # derived diagrams

    def replace_components(self, components: Sequence[Component], crossings: Sequence[Crossing]) -> TangleDiagram:
        return TangleDiagram(self.surface, tuple(components), tuple(crossings), self.flat)

    def crossing_change(self, crossing_id: str) -> TangleDiagram:
        """Swaps the overcrossing and undercrossing at a crossing. The chirality is kept and the sign flips.

        Raises:
            RoleMismatch: The diagram is flat.
        """
        self._require_classical(crossing_id)
        self.crossing(crossing_id)
        components = [
            replace(component, passes=tuple(
                Pass(walk_pass.crossing_id, walk_pass.role.opposite) if walk_pass.crossing_id == crossing_id
                else walk_pass for walk_pass in component.passes
            ))
            for component in self.components
        ]
        crossings = [
            replace(crossing, sign=-crossing.sign) if crossing.crossing_id == crossing_id else crossing
            for crossing in self.crossings
        ]
        return self.replace_components(components, crossings)

    def flatten(self) -> TangleDiagram:
        """Forgets the over/under structure. Chiralities are kept."""
        if self.flat:
            return self
        firsts = {crossing_id: (first.component, first.position) for crossing_id, (first, _) in self._locations.items()}
        components = []
        for index, component in enumerate(self.components):
            passes = tuple(
                Pass(walk_pass.crossing_id,
                     Role.first if firsts[walk_pass.crossing_id] == (index, position) else Role.second)
                for position, walk_pass in enumerate(component.passes, 1)
            )
            components.append(replace(component, passes=passes))
        crossings = [Crossing(crossing.crossing_id, crossing.chirality) for crossing in self.crossings]
        return TangleDiagram(self.surface, tuple(components), tuple(crossings), True)

    def carrier_genus(self) -> int:
        """The genus of the smallest closed surface carrying the underlying Gauss diagram.

        Faces are traced through the rotation system the chiralities give at every crossing, counterclockwise
        ``out1, out2, in1, in2`` for ``L`` and ``out1, in2, in1, out2`` for ``R``. Holonomy words are ignored and
        components without passes count as nothing.

        Raises:
            ComponentNotClosed: The diagram has a long component.
        """
        for component in self.components:
            if not component.is_closed:
                raise ComponentNotClosed(component.name)
        rotation: dict[tuple[str, str], tuple[str, str]] = {}
        for crossing in self.crossings:
            order = ("out1", "out2", "in1", "in2") if crossing.chirality is Chirality.left \
                else ("out1", "in2", "in1", "out2")
            for here, after in zip(order, order[1:] + order[:1]):
                rotation[crossing.crossing_id, here] = (crossing.crossing_id, after)
        edge_end: dict[tuple[str, str], tuple[str, str]] = {}
        graph = nx.Graph()
        graph.add_nodes_from(self.crossing_ids)
        for index, component in enumerate(self.components):
            slots = []
            for position, walk_pass in enumerate(component.passes, 1):
                first, _ = self._locations[walk_pass.crossing_id]
                slot = "1" if (first.component, first.position) == (index, position) else "2"
                slots.append((walk_pass.crossing_id, slot))
            for (crossing_id, slot), (next_id, next_slot) in zip(slots, slots[1:] + slots[:1]):
                edge_end[crossing_id, "out" + slot] = (next_id, "in" + next_slot)
                edge_end[next_id, "in" + next_slot] = (crossing_id, "out" + slot)
                graph.add_edge(crossing_id, next_id)
        faces, seen = 0, set()
        for start in rotation:
            if start in seen:
                continue
            faces += 1
            dart = start
            while dart not in seen:
                seen.add(dart)
                dart = rotation[edge_end[dart]]
        pieces = nx.number_connected_components(graph)
        euler = len(self.crossings) - len(edge_end) // 2 + faces
        return (2 * pieces - euler) // 2

    def lift(self, choices: Mapping[str, Role]) -> TangleDiagram:
        """Chooses an over/under structure for a flat diagram.

        Args:
            choices (Mapping[str, Role]): The role of the first visited pass of every crossing,
                :attr:`Role.over` or :attr:`Role.under`.

        Returns:
            TangleDiagram: The classical diagram, with signs derived from the chiralities.

        Raises:
            RoleMismatch: The diagram is not flat.
            MissingChoice: Some crossing has no choice.
        """
        if not self.flat:
            raise RoleMismatch(None, "flat")
        missing = [crossing_id for crossing_id in self.crossing_ids if crossing_id not in choices]
        if missing:
            raise MissingChoice(missing)
        components = []
        for component in self.components:
            passes = []
            for walk_pass in component.passes:
                role = Role(choices[walk_pass.crossing_id])
                passes.append(Pass(walk_pass.crossing_id, role if walk_pass.role is Role.first else role.opposite))
            components.append(replace(component, passes=tuple(passes)))
        crossings = [Crossing(crossing.crossing_id, crossing.chirality) for crossing in self.crossings]
        return TangleDiagram(self.surface, tuple(components), tuple(crossings), False)

    def all_lifts(self) -> Iterator[TangleDiagram]:
        """Iterates over every lift of a flat diagram, first visited passes over before under, in crossing order."""
        for roles in itertools.product((Role.over, Role.under), repeat=len(self.crossings)):
            yield self.lift(dict(zip(self.crossing_ids, roles)))

    def rotate_basepoint(self, component: int, position: int) -> TangleDiagram:
        """Moves the basepoint of a closed component to just before one of its passes.

        The class of the component becomes ``P^-1 kappa P`` where ``P`` is the class of the walk up to the pass.
        Crossings of the component whose visiting order changes keep their sign and flip their chirality.

        Args:
            component (int): The 0-based component index.
            position (int): The 1-based position of the pass the walk starts with afterwards.

        Returns:
            TangleDiagram: The rotated diagram.

        Raises:
            ComponentNotClosed: The component is long.
            ValueError: The position does not exist.
        """
        target = self.components[component]
        if not target.is_closed:
            raise ComponentNotClosed(target.name)
        if not 1 <= position <= len(target):
            raise ValueError(f"Component {target.name} has no pass {position}")
        if position == 1 and target.words[0].is_identity:
            return self
        k = position - 1
        words = target.words
        joined = self.surface.multiply(words[-1], words[0])
        if k == 0:
            new_words = (self.surface.identity,) + words[1:-1] + (joined,)
        else:
            new_words = (self.surface.identity,) + words[position:-1] + (joined,) + words[1:k] + (words[k],)
        new_passes = target.passes[k:] + target.passes[:k]
        components = list(self.components)
        components[component] = replace(target, words=new_words, passes=new_passes)
        swapped = {
            crossing_id for crossing_id, passes in pass_locations(components).items()
            if passes[0].role is not self._locations[crossing_id][0].role
        }
        if self.flat:
            components = [
                replace(item, passes=tuple(
                    Pass(walk_pass.crossing_id, walk_pass.role.opposite) if walk_pass.crossing_id in swapped
                    else walk_pass for walk_pass in item.passes
                )) for item in components
            ]
        crossings = [
            replace(crossing, chirality=crossing.chirality.flipped) if crossing.crossing_id in swapped else crossing
            for crossing in self.crossings
        ]
        return self.replace_components(components, crossings)

    def rename(self, mapping: Mapping[str, str]) -> TangleDiagram:
        """Renames crossings. Ids that are not in the mapping are kept."""
        components = [
            replace(component, passes=tuple(
                Pass(mapping.get(walk_pass.crossing_id, walk_pass.crossing_id), walk_pass.role)
                for walk_pass in component.passes
            ))
            for component in self.components
        ]
        crossings = [
            replace(crossing, crossing_id=mapping.get(crossing.crossing_id, crossing.crossing_id))
            for crossing in self.crossings
        ]
        return self.replace_components(components, crossings)

    def validate(self) -> list[Violation]:
        """Re-checks the diagram invariants. Diagrams that exist are valid, so this returns an empty list unless
        the diagram was built around the constructor."""
        return self._structural_violations()


# text format

def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


@dataclass
class _DraftComponent:
    name: str
    kind: ComponentKind
    line: int
    words: list[Word] = field(default_factory=list)
    passes: list[tuple[Pass, Optional[Chirality], int]] = field(default_factory=list)
    has_walk: bool = False


def _parse_surface(fields: list[str], line: int, violations: list[Violation]) -> Optional[SurfacePresentation]:
    options: dict[str, str] = {}
    for item in fields[1:]:
        key, _, value = item.partition("=")
        if not value or key not in ("genus", "boundary", "generators"):
            violations.append(Violation(line, "syntax-error", f"unexpected surface field {item!r}"))
            return None
        options[key] = value
    try:
        genus, boundary = int(options["genus"]), int(options["boundary"])
    except (KeyError, ValueError):
        violations.append(Violation(line, "syntax-error", "the surface line needs integer genus= and boundary="))
        return None
    generators = tuple(options["generators"]) if "generators" in options else None
    try:
        return SurfacePresentation(genus, boundary, generators)
    except InvalidPresentation as error:
        violations.append(Violation(line, "syntax-error", str(error)))
        return None


def _parse_walk(
        draft: _DraftComponent, tokens: list[str], line: int, surface: SurfacePresentation,
        violations: list[Violation]
):
    current = surface.identity
    for token in tokens:
        if ":" not in token:
            try:
                current = current * surface.parse_word(token)
            except UnknownGenerator as error:
                violations.append(Violation(line, "alphabet-mismatch", str(error)))
            continue
        parts = token.split(":")
        if len(parts) not in (2, 3) or not CROSSING_ID.match(parts[0]):
            violations.append(Violation(line, "syntax-error", f"malformed pass {token!r}"))
            continue
        try:
            role = Role(parts[1])
            chirality = Chirality(parts[2]) if len(parts) == 3 else None
        except ValueError:
            violations.append(Violation(line, "syntax-error", f"malformed pass {token!r}"))
            continue
        draft.words.append(surface.normal_form(current))
        draft.passes.append((Pass(parts[0], role), chirality, line))
        current = surface.identity
    draft.words.append(surface.normal_form(current))
    draft.has_walk = True


def parse_diagram(text: str) -> TangleDiagram:
    """Reads a diagram in the ``.tdg`` text format.

    Args:
        text (str): The text.

    Returns:
        TangleDiagram: The validated diagram.

    Raises:
        DiagramValidationError: The text is malformed or describes an invalid diagram. Every problem found is
            reported with its line number.
    """
    violations: list[Violation] = []
    surface: Optional[SurfacePresentation] = None
    drafts: list[_DraftComponent] = []
    signs: dict[str, tuple[int, int]] = {}
    declared_flat = False
    for number, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw)
        if not line:
            continue
        fields = line.split()
        keyword = fields[0]
        if surface is None and keyword != "surface":
            violations.append(Violation(number, "syntax-error", "the first line must be the surface line"))
            break
        if keyword == "surface":
            if surface is not None or violations:
                violations.append(Violation(number, "syntax-error", "duplicate surface line"))
                continue
            surface = _parse_surface(fields, number, violations)
            if surface is None:
                break
        elif keyword == "flat" and len(fields) == 1:
            declared_flat = True
        elif keyword == "component":
            if len(fields) != 3 or fields[2] not in ("closed", "long"):
                violations.append(Violation(number, "syntax-error", "expected component <name> <closed|long>"))
                continue
            if any(draft.name == fields[1] for draft in drafts):
                violations.append(Violation(number, "syntax-error", f"duplicate component {fields[1]}"))
                continue
            kind = ComponentKind(fields[2])
            if kind is ComponentKind.long and surface.is_closed:
                violations.append(Violation(
                    number, "long-on-closed-surface", f"the long component {fields[1]} needs a surface with boundary"
                ))
            drafts.append(_DraftComponent(fields[1], kind, number))
        elif keyword == "walk:" or line.startswith("walk:"):
            if not drafts or drafts[-1].has_walk:
                violations.append(Violation(number, "syntax-error", "a walk line must follow a component line"))
                continue
            _parse_walk(drafts[-1], line[len("walk:"):].split(), number, surface, violations)
        elif keyword == "sign":
            if len(fields) != 3:
                violations.append(Violation(number, "syntax-error", "expected sign <crossing> <+|->"))
                continue
            try:
                signs[fields[1]] = (parse_sign(fields[2]), number)
            except ValueError:
                violations.append(Violation(number, "syntax-error", f"invalid sign {fields[2]!r}"))
        else:
            violations.append(Violation(number, "syntax-error", f"unknown line {keyword!r}"))
    if surface is None:
        if not violations:
            violations.append(Violation(0, "syntax-error", "missing surface line"))
        raise DiagramValidationError(violations)
    if not drafts:
        violations.append(Violation(0, "empty-diagram", "a diagram needs at least one component"))
    for draft in drafts:
        if not draft.has_walk:
            draft.words.append(surface.identity)
            draft.has_walk = True
    occurrences: dict[str, list[tuple[int, Role, Optional[Chirality], int]]] = {}
    for index, draft in enumerate(drafts):
        for walk_pass, chirality, line in draft.passes:
            occurrences.setdefault(walk_pass.crossing_id, []).append((index, walk_pass.role, chirality, line))
    roles = {role for visits in occurrences.values() for _, role, _, _ in visits}
    flat = declared_flat or (bool(roles) and all(role.is_flat for role in roles))
    crossings = []
    for crossing_id, visits in occurrences.items():
        line = visits[0][3]
        if len(visits) != 2:
            violations.append(Violation(
                line, "crossing-visited-wrong-number-of-times", f"crossing {crossing_id} is visited {len(visits)} times"
            ))
            continue
        pair = [role for _, role, _, _ in visits]
        if frozenset(pair) not in ROLE_PAIRS or any(role.is_flat != flat for role in pair):
            violations.append(Violation(line, "role-mismatch", f"crossing {crossing_id} has roles {pair[0]} and {pair[1]}"))
            continue
        if flat and pair[0] is not Role.first:
            violations.append(Violation(
                visits[1][3], "role-mismatch", f"the first visited pass of crossing {crossing_id} must be first"
            ))
            continue
        annotated = {chirality for _, _, chirality, _ in visits if chirality is not None}
        if len(annotated) > 1:
            violations.append(Violation(line, "inconsistent-sign", f"crossing {crossing_id} has two chiralities"))
            continue
        chirality = annotated.pop() if annotated else None
        sign_entry = signs.pop(crossing_id, None)
        if flat:
            if sign_entry is not None:
                violations.append(Violation(sign_entry[1], "role-mismatch", f"flat crossing {crossing_id} has a sign"))
                continue
            if chirality is None:
                violations.append(Violation(line, "missing-chirality", f"crossing {crossing_id} needs L or R"))
                continue
            crossings.append(Crossing(crossing_id, chirality))
            continue
        first_over = 1 if pair[0] is Role.over else -1
        if sign_entry is None and chirality is None:
            violations.append(Violation(line, "missing-chirality", f"crossing {crossing_id} needs a sign or L/R"))
            continue
        if sign_entry is not None:
            derived = Chirality.from_sign(sign_entry[0] * first_over)
            if chirality is not None and chirality is not derived:
                violations.append(Violation(
                    sign_entry[1], "inconsistent-sign", f"the sign of crossing {crossing_id} contradicts {chirality}"
                ))
                continue
            chirality = derived
        crossings.append(Crossing(crossing_id, chirality))
    for crossing_id, (_, line) in signs.items():
        violations.append(Violation(line, "syntax-error", f"sign for unknown crossing {crossing_id}"))
    if violations:
        raise DiagramValidationError(violations)
    components = tuple(
        Component(draft.name, draft.kind, tuple(draft.words), tuple(walk_pass for walk_pass, _, _ in draft.passes))
        for draft in drafts
    )
    diagram = TangleDiagram(surface, components, tuple(crossings), flat)
    logger.debug("parsed %d components and %d crossings on the %s", len(components), len(crossings), surface)
    return diagram


def serialize(diagram: TangleDiagram) -> str:
    """Writes a diagram in the ``.tdg`` text format.

    Flat chiralities are written on the first visited pass. Classical chiralities follow from the signs.

    Args:
        diagram (TangleDiagram): The diagram.

    Returns:
        str: The text, ending with a newline.
    """
    surface = diagram.surface
    lines = [surface.header()]
    if diagram.flat:
        lines.append("flat")
    for index, component in enumerate(diagram.components):
        lines.append(f"component {component.name} {component.kind}")
        tokens = [surface.format_word(component.words[0])]
        for position, walk_pass in enumerate(component.passes, 1):
            token = str(walk_pass)
            if diagram.flat and walk_pass.role is Role.first:
                token += f":{diagram.crossing(walk_pass.crossing_id).chirality}"
            tokens.append(token)
            tokens.append(surface.format_word(component.words[position]))
        lines.append("walk: " + " ".join(tokens))
    if not diagram.flat:
        lines.extend(f"sign {crossing.crossing_id} {format_sign(crossing.sign)}" for crossing in diagram.crossings)
    return "\n".join(lines) + "\n"


def load_diagram(source: Union[str, os.PathLike]) -> TangleDiagram:
    """Reads a ``.tdg`` file.

    Args:
        source (Union[str, os.PathLike]): The path of the file.

    Returns:
        TangleDiagram: The diagram.

    Raises:
        OSError: The file cannot be read.
        DiagramValidationError: The file is not a valid diagram.
    """
    with open(source, encoding="utf-8") as file:
        return parse_diagram(file.read())
