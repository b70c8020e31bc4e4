from __future__ import annotations
import logging
import random
import warnings
from dataclasses import dataclass, field, replace
from itertools import combinations, product
from typing import Iterable, Optional, Sequence

from .classifier import CrossingClassifier, flat_values_agree, index_values_agree, refined_values_agree
from .diagram import Component, Crossing, Pass, TangleDiagram
from .enums import *
from .exceptions import InvalidSite, PathNotOnDiagram, TraceSyntaxError
from .types import EqualityVerdict, ExplorationBudget, MoveWeights, Word
from .utils import format_sign, parse_sign

logger = logging.getLogger(__name__)

Site = tuple[int, int]
"""A ``(component, segment)`` pair. Segment ``k`` runs from pass ``k`` to pass ``k + 1`` of the component."""

MAX_PULL_STEPS = 64


@dataclass(frozen=True)
class Move:
    """A Reidemeister move at a site of a diagram.

    Attributes:
        kind (MoveKind): The kind of move.
        crossings (tuple[str, ...]): The crossings a removal or a third move acts on, or the ids of the crossings
            an insertion creates.
        sites (tuple[Site, ...]): Insertion sites. A first Reidemeister insertion has one site. A second one has
            the site of the tongue and the site it is pushed to.
        word (Optional[Word]): The connecting word along which the tongue of a second Reidemeister insertion is
            pushed.
        side (int): For insertions, the chirality sign of the curl or the orientation of the first new crossing
            relative to the tongue strand.
        over (Optional[int]): For classical insertions, which pass or strand is over: ``0`` for the first pass of
            a curl or the tongue strand, ``1`` for the other. ``None`` on flat diagrams.
        swap (bool): Whether the two passes on the target strand of a second Reidemeister insertion are reversed.
    """
    kind: MoveKind
    crossings: tuple[str, ...] = ()
    sites: tuple[Site, ...] = ()
    word: Optional[Word] = None
    side: int = 1
    over: Optional[int] = None
    swap: bool = False

    def __str__(self):
        parts = [str(self.kind)]
        parts.extend(f"site={component}@{segment}" for component, segment in self.sites)
        if self.crossings:
            parts.append(",".join(self.crossings))
        return " ".join(parts)


@dataclass(frozen=True)
class MoveStep:
    """A move that was applied, with the crossing correspondence it induces.

    Crossings that are neither removed nor created keep their ids, so the correspondence is the identity on them.

    Attributes:
        move (Move): The move.
        removed (tuple[str, ...]): The crossings the move destroyed.
        created (tuple[str, ...]): The crossings the move created.
        dual_pairs (tuple[tuple[str, str], ...]): Crossing pairs of a second Reidemeister move, joined by an edge
            of weight 1 in the phratry graph.
    """
    move: Move
    removed: tuple[str, ...] = ()
    created: tuple[str, ...] = ()
    dual_pairs: tuple[tuple[str, str], ...] = ()

    def correspondence(self, before: Iterable[str]) -> dict[str, str]:
        """The partial bijection from the crossings before the move to the crossings after it."""
        return {crossing_id: crossing_id for crossing_id in before if crossing_id not in self.removed}


@dataclass(frozen=True)
class MoveTrace:
    """A sequence of applied moves.

    Attributes:
        start (TangleDiagram): The diagram the trace starts from.
        steps (tuple[MoveStep, ...]): The applied moves.
        diagrams (tuple[TangleDiagram, ...]): The diagram after every step.
    """
    start: TangleDiagram
    steps: tuple[MoveStep, ...] = ()
    diagrams: tuple[TangleDiagram, ...] = ()

    def __len__(self):
        return len(self.steps)

    @property
    def final(self) -> TangleDiagram:
        return self.diagrams[-1] if self.diagrams else self.start

    @property
    def moves(self) -> tuple[Move, ...]:
        return tuple(step.move for step in self.steps)

    def before(self, index: int) -> TangleDiagram:
        """The diagram a step was applied to."""
        return self.start if index == 0 else self.diagrams[index - 1]

    def correspondence(self) -> dict[str, str]:
        """The composed correspondence from the crossings of :attr:`start` to those of :attr:`final`."""
        mapping = {crossing_id: crossing_id for crossing_id in self.start.crossing_ids}
        for step in self.steps:
            mapping = {source: target for source, target in mapping.items() if target not in step.removed}
        return mapping

    def extend(self, other: MoveTrace) -> MoveTrace:
        """Appends a trace that starts at the final diagram of this one."""
        return MoveTrace(self.start, self.steps + other.steps, self.diagrams + other.diagrams)


# sites and ids

def fresh_ids(diagram: TangleDiagram, count: int, avoid: Iterable[str] = ()) -> tuple[str, ...]:
    """Picks the smallest unused crossing ids of the form ``n1``, ``n2``, ..."""
    used = set(diagram.crossing_ids) | set(avoid)
    ids = []
    index = 1
    while len(ids) < count:
        candidate = f"n{index}"
        if candidate not in used:
            ids.append(candidate)
        index += 1
    return tuple(ids)


def all_sites(diagram: TangleDiagram) -> list[Site]:
    """Every ``(component, segment)`` insertion site of a diagram."""
    return [(index, segment) for index, component in enumerate(diagram.components) for segment in range(len(component) + 1)]


def _arc(diagram: TangleDiagram, component: int, source: int, target: int) -> Word:
    """The class of the arc of a component between two pass positions, read from ``source`` to ``target``."""
    surface = diagram.surface
    return surface.multiply(surface.inverse(diagram.prefix(component, source)), diagram.prefix(component, target))


def _check_site(diagram: TangleDiagram, move: Move, site: Site):
    component, segment = site
    if not 0 <= component < len(diagram.components) or not 0 <= segment <= len(diagram.components[component]):
        raise InvalidSite(move, f"the site {component}@{segment} does not exist")


# word level editing

def _with_flat_roles(components: list[Component]) -> list[Component]:
    seen: set[str] = set()
    fixed = []
    for component in components:
        passes = []
        for walk_pass in component.passes:
            role = Role.second if walk_pass.crossing_id in seen else Role.first
            seen.add(walk_pass.crossing_id)
            passes.append(Pass(walk_pass.crossing_id, role))
        fixed.append(replace(component, passes=tuple(passes)))
    return fixed


def _build(diagram: TangleDiagram, components: list[Component], crossings: Sequence[Crossing]) -> TangleDiagram:
    if diagram.flat:
        components = _with_flat_roles(components)
    return TangleDiagram(diagram.surface, tuple(components), tuple(crossings), diagram.flat)


@dataclass
class _Insertion:
    segment: int
    head: list[Word]
    passes: list[Pass]
    tail: Word


def _insert(diagram: TangleDiagram, insertions: dict[int, list[_Insertion]]) -> list[Component]:
    surface = diagram.surface
    components = []
    for index, component in enumerate(diagram.components):
        words, passes = list(component.words), list(component.passes)
        for insertion in sorted(insertions.get(index, []), key=lambda item: item.segment, reverse=True):
            k = insertion.segment
            words[k:k + 1] = insertion.head + [surface.multiply(insertion.tail, words[k])]
            passes[k:k] = insertion.passes
        components.append(replace(component, words=tuple(words), passes=tuple(passes)))
    return components


def _delete(diagram: TangleDiagram, crossing_ids: set[str]) -> TangleDiagram:
    surface = diagram.surface
    components = []
    for component in diagram.components:
        words, passes = [], []
        current = component.words[0]
        for position, walk_pass in enumerate(component.passes, 1):
            if walk_pass.crossing_id in crossing_ids:
                current = surface.multiply(current, component.words[position])
            else:
                words.append(current)
                passes.append(walk_pass)
                current = component.words[position]
        words.append(current)
        components.append(replace(component, words=tuple(words), passes=tuple(passes)))
    crossings = [crossing for crossing in diagram.crossings if crossing.crossing_id not in crossing_ids]
    return _build(diagram, components, crossings)


def _reclass(diagram: TangleDiagram, classes: dict[tuple[int, int], Word], swaps: list[tuple[int, int]]) -> TangleDiagram:
    surface = diagram.surface
    components = list(diagram.components)
    touched = {component for component, _ in classes} | {component for component, _ in swaps}
    for index in touched:
        component = components[index]
        size = len(component)
        old = [surface.identity] + diagram.pass_classes(index) + [diagram.total(index)]
        new = list(old)
        changed = set()
        for (target, position), word in classes.items():
            if target == index:
                new[position] = word
                changed.add(position)
        passes = list(component.passes)
        for target, position in swaps:
            if target == index:
                passes[position - 1], passes[position] = passes[position], passes[position - 1]
        words = list(component.words)
        for k in range(size + 1):
            if k in changed or k + 1 in changed:
                words[k] = surface.multiply(surface.inverse(new[k]), new[k + 1])
        components[index] = replace(component, words=tuple(words), passes=tuple(passes))
    return _build(diagram, components, diagram.crossings)


# site detection

def _r1_loop(diagram: TangleDiagram, crossing_id: str) -> Optional[Word]:
    first, second = diagram.locate(crossing_id)
    if first.component != second.component:
        return None
    component = diagram.components[first.component]
    surface = diagram.surface
    if second.position == first.position + 1:
        loop = component.words[first.position]
        if surface.is_trivial(loop):
            return loop
    if component.is_closed and first.position == 1 and second.position == len(component):
        loop = surface.multiply(component.words[-1], component.words[0])
        if surface.is_trivial(loop):
            return loop
    return None


def _adjacent(diagram: TangleDiagram, a: tuple[int, int], b: tuple[int, int]) -> Optional[Word]:
    """If two pass positions are neighbours on one component, the class of the arc from ``a`` to ``b``."""
    if a[0] != b[0]:
        return None
    component = diagram.components[a[0]]
    surface = diagram.surface
    size = len(component)
    if abs(a[1] - b[1]) == 1:
        return _arc(diagram, a[0], a[1], b[1])
    if component.is_closed and {a[1], b[1]} == {1, size} and size > 2:
        wrap = surface.multiply(component.words[-1], component.words[0])
        return wrap if a[1] == size else surface.inverse(wrap)
    return None


def _orientation(diagram: TangleDiagram, crossing_id: str, strand_pass: tuple[int, int]) -> int:
    """The sign of the determinant of the tangents of the given strand and the other strand at a crossing."""
    first, _ = diagram.locate(crossing_id)
    chirality = diagram.crossing(crossing_id).chirality
    return chirality.sign * (1 if (first.component, first.position) == strand_pass else -1)


def _r2_pairing(diagram: TangleDiagram, x: str, y: str) -> Optional[tuple]:
    if x == y:
        return None
    passes_x = [(location.component, location.position, location.role) for location in diagram.locate(x)]
    passes_y = [(location.component, location.position, location.role) for location in diagram.locate(y)]
    surface = diagram.surface
    for order in ((0, 1), (1, 0)):
        strand_a = (passes_x[0], passes_y[order[0]])
        strand_b = (passes_x[1], passes_y[order[1]])
        arc_a = _adjacent(diagram, strand_a[0][:2], strand_a[1][:2])
        arc_b = _adjacent(diagram, strand_b[0][:2], strand_b[1][:2])
        if arc_a is None or arc_b is None or not surface.words_equal(arc_a, arc_b).is_equal:
            continue
        if _orientation(diagram, x, strand_a[0][:2]) != -_orientation(diagram, y, strand_a[1][:2]):
            continue
        if not diagram.flat and strand_a[0][2] is not strand_a[1][2]:
            continue
        return strand_a, strand_b
    return None


@dataclass(frozen=True)
class _Strand:
    component: int
    position: int
    ids: tuple[str, str]

    def pass_of(self, crossing_id: str) -> tuple[int, int]:
        return self.component, self.position + self.ids.index(crossing_id)


def _strands_between(diagram: TangleDiagram, u: str, v: str) -> list[_Strand]:
    strands = []
    for index, component in enumerate(diagram.components):
        for position in range(1, len(component)):
            ids = (component.passes[position - 1].crossing_id, component.passes[position].crossing_id)
            if set(ids) == {u, v}:
                strands.append(_Strand(index, position, ids))
    return strands


def _r3_triangle(diagram: TangleDiagram, x: str, y: str, z: str) -> Optional[tuple[_Strand, _Strand, _Strand]]:
    if len({x, y, z}) != 3:
        return None
    surface = diagram.surface
    roles = {
        (location.component, location.position): location.role
        for crossing_id in (x, y, z) for location in diagram.locate(crossing_id)
    }
    for s1, s2, s3 in product(_strands_between(diagram, x, y), _strands_between(diagram, x, z),
                              _strands_between(diagram, y, z)):
        used = [s1.pass_of(x), s1.pass_of(y), s2.pass_of(x), s2.pass_of(z), s3.pass_of(y), s3.pass_of(z)]
        if len(set(used)) != 6:
            continue
        loop = surface.multiply(
            _arc(diagram, s1.component, s1.pass_of(x)[1], s1.pass_of(y)[1]),
            _arc(diagram, s3.component, s3.pass_of(y)[1], s3.pass_of(z)[1]),
            _arc(diagram, s2.component, s2.pass_of(z)[1], s2.pass_of(x)[1]),
        )
        if not surface.is_trivial(loop):
            continue
        if not diagram.flat:
            overs = sorted(
                sum(roles[strand.pass_of(crossing_id)] is Role.over for crossing_id in strand.ids)
                for strand in (s1, s2, s3)
            )
            if overs != [0, 1, 2]:
                continue
        e12 = _orientation(diagram, x, s1.pass_of(x))
        e13 = _orientation(diagram, y, s1.pass_of(y))
        e23 = _orientation(diagram, z, s2.pass_of(z))
        o1 = 1 if s1.ids[0] == x else -1
        o2 = 1 if s2.ids[0] == x else -1
        o3 = 1 if s3.ids[0] == y else -1
        sigma = e12 * o1 * o2
        if e13 != sigma * o1 * o3 or e23 != sigma * o2 * o3:
            continue
        return s1, s2, s3
    return None


# moves

def _apply_r1_add(diagram: TangleDiagram, move: Move) -> tuple[TangleDiagram, MoveStep]:
    if len(move.sites) != 1 or len(move.crossings) != 1:
        raise InvalidSite(move, "a curl needs one site and one new crossing id")
    site = move.sites[0]
    _check_site(diagram, move, site)
    (new_id,) = move.crossings
    if new_id in diagram.crossing_ids:
        raise InvalidSite(move, f"the crossing {new_id} already exists")
    if diagram.flat:
        roles = [Role.first, Role.second]
    else:
        if move.over not in (0, 1):
            raise InvalidSite(move, "classical insertions need over=0 or over=1")
        roles = [Role.over, Role.under] if move.over == 0 else [Role.under, Role.over]
    identity = diagram.surface.identity
    insertion = _Insertion(site[1], [identity, identity], [Pass(new_id, roles[0]), Pass(new_id, roles[1])], identity)
    components = _insert(diagram, {site[0]: [insertion]})
    crossings = list(diagram.crossings) + [Crossing(new_id, Chirality.from_sign(move.side))]
    return _build(diagram, components, crossings), MoveStep(move, created=(new_id,))


def _apply_r1_remove(diagram: TangleDiagram, move: Move) -> tuple[TangleDiagram, MoveStep]:
    if len(move.crossings) != 1:
        raise InvalidSite(move, "a curl removal needs one crossing")
    (crossing_id,) = move.crossings
    diagram.crossing(crossing_id)
    if _r1_loop(diagram, crossing_id) is None:
        raise InvalidSite(move, f"{crossing_id} does not bound a null-homotopic monogon")
    return _delete(diagram, {crossing_id}), MoveStep(move, removed=(crossing_id,))


def _apply_r2_add(diagram: TangleDiagram, move: Move) -> tuple[TangleDiagram, MoveStep]:
    if len(move.sites) != 2 or len(move.crossings) != 2 or move.word is None:
        raise InvalidSite(move, "a tongue needs two sites, two new crossing ids and a connecting word")
    for site in move.sites:
        _check_site(diagram, move, site)
    x, y = move.crossings
    if x == y or x in diagram.crossing_ids or y in diagram.crossing_ids:
        raise InvalidSite(move, "the new crossing ids must be distinct and unused")
    surface = diagram.surface
    word = surface.coerce(move.word)
    (component_a, segment_a), (component_b, segment_b) = move.sites
    if diagram.flat:
        role_a = role_b = Role.first
    else:
        if move.over not in (0, 1):
            raise InvalidSite(move, "classical insertions need over=0 or over=1")
        role_a, role_b = (Role.over, Role.under) if move.over == 0 else (Role.under, Role.over)
    passes_a = [Pass(x, role_a), Pass(y, role_a)]
    passes_b = [Pass(y, role_b), Pass(x, role_b)] if move.swap else [Pass(x, role_b), Pass(y, role_b)]
    identity = surface.identity
    inverse = surface.inverse(word)
    if move.sites[0] == move.sites[1]:
        insertions = {component_a: [_Insertion(segment_a, [word, identity, inverse, identity], passes_a + passes_b, identity)]}
        positions_a = (segment_a + 1, segment_a + 2)
        positions_b = (segment_a + 3, segment_a + 4)
    else:
        insertions = {}
        insertions.setdefault(component_a, []).append(_Insertion(segment_a, [word, identity], passes_a, inverse))
        insertions.setdefault(component_b, []).append(_Insertion(segment_b, [identity, identity], passes_b, identity))
        shift_a = 2 if component_a == component_b and segment_b < segment_a else 0
        shift_b = 2 if component_a == component_b and segment_a < segment_b else 0
        positions_a = (segment_a + 1 + shift_a, segment_a + 2 + shift_a)
        positions_b = (segment_b + 1 + shift_b, segment_b + 2 + shift_b)
    b_of = {walk_pass.crossing_id: positions_b[index] for index, walk_pass in enumerate(passes_b)}
    crossings = list(diagram.crossings)
    for index, (crossing_id, orientation) in enumerate(((x, move.side), (y, -move.side))):
        a_first = (component_a, positions_a[index]) < (component_b, b_of[crossing_id])
        crossings.append(Crossing(crossing_id, Chirality.from_sign(orientation * (1 if a_first else -1))))
    components = _insert(diagram, insertions)
    return _build(diagram, components, crossings), MoveStep(move, created=(x, y), dual_pairs=((x, y),))


def _apply_r2_remove(diagram: TangleDiagram, move: Move) -> tuple[TangleDiagram, MoveStep]:
    if len(move.crossings) != 2:
        raise InvalidSite(move, "a bigon removal needs two crossings")
    x, y = move.crossings
    diagram.crossing(x)
    diagram.crossing(y)
    if _r2_pairing(diagram, x, y) is None:
        raise InvalidSite(move, f"{x} and {y} do not bound a removable bigon")
    return _delete(diagram, {x, y}), MoveStep(move, removed=(x, y), dual_pairs=((x, y),))


def _apply_r3(diagram: TangleDiagram, move: Move) -> tuple[TangleDiagram, MoveStep]:
    if len(move.crossings) != 3:
        raise InvalidSite(move, "a third move needs three crossings")
    x, y, z = move.crossings
    for crossing_id in move.crossings:
        diagram.crossing(crossing_id)
    triangle = _r3_triangle(diagram, x, y, z)
    if triangle is None:
        raise InvalidSite(move, f"{x}, {y} and {z} do not form a movable triangle")
    s1, s2, s3 = triangle
    surface = diagram.surface
    class_1x = diagram.prefix(s1.component, s1.pass_of(x)[1])
    class_2x = diagram.prefix(s2.component, s2.pass_of(x)[1])
    class_3 = surface.multiply(
        diagram.prefix(s3.component, s3.pass_of(y)[1]),
        surface.inverse(diagram.prefix(s1.component, s1.pass_of(y)[1])),
        class_1x,
    )
    classes = {}
    for strand, word in ((s1, class_1x), (s2, class_2x), (s3, class_3)):
        classes[(strand.component, strand.position)] = word
        classes[(strand.component, strand.position + 1)] = word
    swaps = [(strand.component, strand.position) for strand in (s1, s2, s3)]
    return _reclass(diagram, classes, swaps), MoveStep(move)


_APPLY = {
    MoveKind.r1_add: _apply_r1_add,
    MoveKind.r1_remove: _apply_r1_remove,
    MoveKind.r2_add: _apply_r2_add,
    MoveKind.r2_remove: _apply_r2_remove,
    MoveKind.r3: _apply_r3,
}


def apply_move(diagram: TangleDiagram, move: Move) -> tuple[TangleDiagram, MoveStep]:
    """Applies a Reidemeister move.

    Removals and third moves check their site conditions. Insertions are legal at every site. The class of every
    component is preserved and crossings off the site keep their ids.

    Args:
        diagram (TangleDiagram): The diagram.
        move (Move): The move.

    Returns:
        tuple[TangleDiagram, MoveStep]: The new diagram and the applied step with its correspondence.

    Raises:
        InvalidSite: The site does not satisfy the conditions of the move.
        UnknownCrossing: The move names a crossing that does not exist.
    """
    result, step = _APPLY[move.kind](diagram, move)
    logger.debug("applied %s: -%s +%s", move, ",".join(step.removed), ",".join(step.created))
    return result, step


def r1_remove_sites(diagram: TangleDiagram) -> list[Move]:
    return [Move(MoveKind.r1_remove, (crossing_id,)) for crossing_id in diagram.crossing_ids
            if _r1_loop(diagram, crossing_id) is not None]


def r2_remove_sites(diagram: TangleDiagram) -> list[Move]:
    return [Move(MoveKind.r2_remove, (x, y)) for x, y in combinations(diagram.crossing_ids, 2)
            if _r2_pairing(diagram, x, y) is not None]


def r3_sites(diagram: TangleDiagram) -> list[Move]:
    return [Move(MoveKind.r3, triple) for triple in combinations(diagram.crossing_ids, 3)
            if _r3_triangle(diagram, *triple) is not None]


def enumerate_moves(diagram: TangleDiagram, budget: Optional[ExplorationBudget] = None,
                    insertions: bool = True, avoid: Iterable[str] = ()) -> list[Move]:
    """Lists the moves applicable to a diagram.

    Removals and third moves are listed at every site where their conditions hold. Insertions are listed while
    the diagram stays within the crossing budget: curls at every site with both chiralities, and tongues between
    every ordered pair of sites ``a <= b`` along every connecting word of at most the budgeted length.

    Args:
        diagram (TangleDiagram): The diagram.
        budget (Optional[ExplorationBudget]): The crossing and word length limits of insertions.
        insertions (bool): Whether to list insertions at all.
        avoid (Iterable[str]): Ids that new crossings must not take, besides those of the diagram.

    Returns:
        list[Move]: The moves, removals first, in a deterministic order.
    """
    budget = budget or ExplorationBudget()
    moves = r1_remove_sites(diagram) + r2_remove_sites(diagram) + r3_sites(diagram)
    if not insertions:
        return moves
    limit = budget.crossing_limit(len(diagram.crossings))
    overs = (None,) if diagram.flat else (0, 1)
    sites = all_sites(diagram)
    count = len(diagram.crossings)
    if count + 1 <= limit:
        (new_id,) = fresh_ids(diagram, 1, avoid)
        for site in sites:
            for side in (1, -1):
                for over in overs:
                    moves.append(Move(MoveKind.r1_add, (new_id,), (site,), side=side, over=over))
    if count + 2 <= limit:
        new_ids = fresh_ids(diagram, 2, avoid)
        words = diagram.surface.words_up_to(budget.max_word_length)
        for index, site_a in enumerate(sites):
            for site_b in sites[index:]:
                for word in words:
                    for side, over, swap in product((1, -1), overs, (False, True)):
                        moves.append(Move(MoveKind.r2_add, new_ids, (site_a, site_b), word, side, over, swap))
    return moves


# macros

def replay(diagram: TangleDiagram, moves: Iterable[Move]) -> MoveTrace:
    """Applies moves in order and records the trace.

    Raises:
        InvalidSite: Some move cannot be applied.
    """
    steps, diagrams = [], []
    current = diagram
    for move in moves:
        current, step = apply_move(current, move)
        steps.append(step)
        diagrams.append(current)
    return MoveTrace(diagram, tuple(steps), tuple(diagrams))


def pull_sprout(diagram: TangleDiagram, site: Site, word, over: Optional[int] = None) -> MoveTrace:
    """Pulls a sprout from a point of the diagram along a loop, creating a pair of crossings of a prescribed
    homotopy type.

    The tongue is pushed from the site around the loop and back onto the strand right behind it, in one second
    Reidemeister insertion. Both new crossings have the inner half ``word``. On classical diagrams the returning
    strand is over by default, which makes ``word`` their positive half.

    Args:
        diagram (TangleDiagram): The diagram.
        site (Site): The ``(component, segment)`` the sprout starts from.
        word (WordLike): The loop, based at the basepoint of the diagram.
        over (Optional[int]): Overrides which strand is over on classical diagrams.

    Returns:
        MoveTrace: The one step trace.
    """
    surface = diagram.surface
    anchor = diagram.prefix(*site)
    connecting = surface.multiply(surface.inverse(anchor), surface.inverse(surface.coerce(word)), anchor)
    if diagram.flat:
        over = None
    elif over is None:
        over = 1
    move = Move(MoveKind.r2_add, fresh_ids(diagram, 2), (site, site), connecting, 1, over)
    return replay(diagram, [move])


def _pull_path(diagram: TangleDiagram, source: str, target: str) -> tuple[int, int]:
    """Finds the shortest run along a component from a pass of ``source`` to a pass of ``target``, returned as
    the index of the pass of ``source`` and a direction."""
    best = None
    for index, location in enumerate(diagram.locate(source)):
        passes = diagram.components[location.component].passes
        for direction in (1, -1):
            position = location.position + direction
            steps = 0
            while 1 <= position <= len(passes):
                crossing_id = passes[position - 1].crossing_id
                if crossing_id == target:
                    if best is None or steps < best[0]:
                        best = (steps, index, direction)
                    break
                if crossing_id == source:
                    break
                position += direction
                steps += 1
    if best is None:
        raise PathNotOnDiagram(source, target)
    return best[1], best[2]


def pull_crossing(diagram: TangleDiagram, source: str, target: str) -> MoveTrace:
    """Pulls a crossing along a strand of the diagram until it is next to another crossing.

    The shortest run along a component from a pass of ``source`` to a pass of ``target`` is used. Every
    crossing in the way is passed with a tongue of the other strand of ``source``, pushed next to the other
    strand of the crossing in the way, followed by a third Reidemeister move.

    Args:
        diagram (TangleDiagram): The diagram.
        source (str): The crossing to pull.
        target (str): The crossing to pull towards.

    Returns:
        MoveTrace: The applied moves. The final diagram has ``source`` and ``target`` adjacent on a component.

    Raises:
        PathNotOnDiagram: No component runs from ``source`` to ``target`` without passing ``source`` again.
        InvalidSite: A crossing in the way cannot be passed.
    """
    diagram.crossing(target)
    index, direction = _pull_path(diagram, source, target)
    role = diagram.locate(source)[index].role
    surface = diagram.surface
    trace = MoveTrace(diagram)
    for _ in range(MAX_PULL_STEPS):
        current = trace.final
        pulled = next(location for location in current.locate(source) if location.role is role)
        other = next(location for location in current.locate(source) if location is not pulled)
        passes = current.components[pulled.component].passes
        neighbour_position = pulled.position + direction
        if not 1 <= neighbour_position <= len(passes):
            raise PathNotOnDiagram(source, target)
        blocker = passes[neighbour_position - 1].crossing_id
        if blocker == target:
            return trace
        if blocker == source:
            raise PathNotOnDiagram(source, target)
        blocker_passes = current.locate(blocker)
        blocker_other = next(
            location for location in blocker_passes
            if (location.component, location.position) != (pulled.component, neighbour_position)
        )
        new_ids = fresh_ids(current, 2)
        site_a = (other.component, other.position)
        arc = _arc(current, pulled.component, pulled.position, neighbour_position)
        applied = None
        for before_blocker, side, over in product((False, True), (1, -1), (None,) if current.flat else (0, 1)):
            segment_b = blocker_other.position - 1 if before_blocker else blocker_other.position
            site_b = (blocker_other.component, segment_b)
            if site_b == site_a:
                continue
            anchor_b = current.prefix(*site_b)
            word = surface.multiply(
                arc,
                surface.inverse(current.prefix(blocker_other.component, blocker_other.position)),
                anchor_b,
            )
            tongue = Move(MoveKind.r2_add, new_ids, (site_a, site_b), word, side, over, before_blocker)
            candidate, step = apply_move(current, tongue)
            if _r3_triangle(candidate, source, blocker, new_ids[0]) is None:
                continue
            slide = Move(MoveKind.r3, (source, blocker, new_ids[0]))
            after, slide_step = apply_move(candidate, slide)
            applied = MoveTrace(current, (step, slide_step), (candidate, after))
            break
        if applied is None:
            raise InvalidSite(Move(MoveKind.r3, (source, blocker)), f"cannot pass {blocker} while pulling {source}")
        trace = trace.extend(applied)
    raise InvalidSite(Move(MoveKind.r3, (source, target)), "the pull did not reach its target")


def _random_insertion(diagram: TangleDiagram, kind: MoveKind, rng: random.Random, words: Sequence[Word]) -> Move:
    sites = all_sites(diagram)
    over = None if diagram.flat else rng.randrange(2)
    side = rng.choice((1, -1))
    if kind is MoveKind.r1_add:
        return Move(kind, fresh_ids(diagram, 1), (rng.choice(sites),), side=side, over=over)
    site_a, site_b = sorted((rng.choice(sites), rng.choice(sites)))
    return Move(kind, fresh_ids(diagram, 2), (site_a, site_b), rng.choice(words), side, over, rng.random() < 0.5)


def random_walk(diagram: TangleDiagram, steps: int, seed: int, weights: Optional[MoveWeights] = None,
                max_crossings: Optional[int] = None, max_word_length: int = 1) -> MoveTrace:
    """Applies random moves.

    Every step draws a move kind by weight among the kinds applicable to the current diagram, then a site of
    that kind uniformly. The walk is deterministic for a fixed seed.

    Args:
        diagram (TangleDiagram): The starting diagram.
        steps (int): The number of moves.
        seed (int): The seed of the random number generator.
        weights (Optional[MoveWeights]): Relative weights of the move kinds.
        max_crossings (Optional[int]): The crossing limit of insertions, by default four more than the start.
        max_word_length (int): The longest connecting word of tongues.

    Returns:
        MoveTrace: The trace. It is shorter than ``steps`` only if the walk stalls.
    """
    if steps < 0:
        raise ValueError("steps must not be negative")
    rng = random.Random(seed)
    weights = weights or MoveWeights()
    limit = max_crossings if max_crossings is not None else len(diagram.crossings) + 4
    words = diagram.surface.words_up_to(max_word_length)
    trace = MoveTrace(diagram)
    moves_taken, diagrams = [], []
    current = diagram
    for _ in range(steps):
        options: dict[MoveKind, list[Move]] = {}
        for move in enumerate_moves(current, insertions=False):
            options.setdefault(move.kind, []).append(move)
        count = len(current.crossings)
        kinds = [kind for kind in MoveKind if kind in options and weights.weight(kind) > 0]
        if count + 1 <= limit and weights.r1_add > 0:
            kinds.append(MoveKind.r1_add)
        if count + 2 <= limit and weights.r2_add > 0:
            kinds.append(MoveKind.r2_add)
        if not kinds:
            warnings.warn(f"random walk stalled after {len(moves_taken)} steps: no applicable move")
            break
        kind = rng.choices(kinds, weights=[weights.weight(kind) for kind in kinds])[0]
        move = _random_insertion(current, kind, rng, words) if kind.is_insertion else rng.choice(options[kind])
        current, step = apply_move(current, move)
        moves_taken.append(step)
        diagrams.append(current)
    return MoveTrace(trace.start, tuple(moves_taken), tuple(diagrams))


# trace log

def format_move(diagram: TangleDiagram, step: MoveStep) -> str:
    """Writes an applied move as one line of the trace log, using component names for sites."""
    move = step.move
    surface = diagram.surface
    parts = [str(move.kind)]
    parts.extend(f"site={diagram.components[component].name}@{segment}" for component, segment in move.sites)
    if move.kind is MoveKind.r1_remove:
        parts.append(f"crossing={move.crossings[0]}")
    elif move.kind in (MoveKind.r2_remove, MoveKind.r3):
        parts.append(f"crossings={','.join(move.crossings)}")
    else:
        if move.word is not None:
            parts.append(f"word={surface.format_word(move.word)}")
        parts.append(f"side={format_sign(move.side)}")
        parts.append(f"over={'-' if move.over is None else move.over}")
        if move.kind is MoveKind.r2_add:
            parts.append(f"swap={int(move.swap)}")
        parts.append(f"new={','.join(move.crossings)}")
    delta = [f"-{','.join(step.removed)}" if step.removed else "", f"+{','.join(step.created)}" if step.created else ""]
    return " ".join(parts) + " |" + "".join(f" {item}" for item in delta if item)


def format_trace(trace: MoveTrace) -> str:
    """Writes a trace as a replayable log, one move per line."""
    return "".join(format_move(trace.before(index), step) + "\n" for index, step in enumerate(trace.steps))


def _parse_move(diagram: TangleDiagram, number: int, line: str) -> Move:
    head = line.split("|", 1)[0].split()
    try:
        kind = MoveKind(head[0])
        sites, options = [], {}
        for token in head[1:]:
            key, _, value = token.partition("=")
            if key == "site":
                name, _, segment = value.rpartition("@")
                sites.append((diagram.component_index(name), int(segment)))
            else:
                options[key] = value
        if kind is MoveKind.r1_remove:
            return Move(kind, (options["crossing"],))
        if kind in (MoveKind.r2_remove, MoveKind.r3):
            return Move(kind, tuple(options["crossings"].split(",")))
        over = None if options.get("over", "-") == "-" else int(options["over"])
        word = diagram.surface.parse_word(options["word"]) if "word" in options else None
        return Move(kind, tuple(options["new"].split(",")), tuple(sites), word, parse_sign(options["side"]), over,
                    options.get("swap", "0") == "1")
    except (KeyError, ValueError, IndexError):
        raise TraceSyntaxError(number, line) from None


def parse_trace(text: str, diagram: TangleDiagram) -> MoveTrace:
    """Reads a trace log and replays it on a diagram.

    Args:
        text (str): The log, one move per line. Blank lines and ``#`` comments are ignored.
        diagram (TangleDiagram): The diagram the log starts from.

    Returns:
        MoveTrace: The replayed trace.

    Raises:
        TraceSyntaxError: A line is malformed.
        InvalidSite: A move cannot be applied.
    """
    steps, diagrams = [], []
    current = diagram
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        current, step = apply_move(current, _parse_move(current, number, line))
        steps.append(step)
        diagrams.append(current)
    return MoveTrace(diagram, tuple(steps), tuple(diagrams))


# trace checks

@dataclass
class TraceCheckReport:
    """The result of checking a trace against index preservation.

    Attributes:
        steps (int): The number of checked steps.
        survivors (int): The number of crossing comparisons across moves.
        pairs (int): The number of checked second Reidemeister pairs.
        violations (list[str]): Every failed check, one line each.
        undecided (int): Comparisons that ended undecided and count as neither success nor failure.
    """
    steps: int = 0
    survivors: int = 0
    pairs: int = 0
    violations: list[str] = field(default_factory=list)
    undecided: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self):
        status = "ok" if self.ok else "FAILED"
        return (f"{status}: {self.steps} steps, {self.survivors} preserved indices, {self.pairs} R2 pairs, "
                f"{len(self.violations)} violations, {self.undecided} undecided")


def _expect(report: TraceCheckReport, verdict: EqualityVerdict, message: str):
    if verdict.is_undecided:
        report.undecided += 1
    elif verdict.is_not_equal:
        report.violations.append(message)


def _check_pair(report: TraceCheckReport, classifier: CrossingClassifier, x: str, y: str, index: int):
    report.pairs += 1
    if classifier.diagram.flat:
        _expect(report, classifier.flat_tribe_verdict(x, y), f"step {index}: {x},{y} are not one tribe")
        _expect(report, classifier.flat_dual_verdict(x, y), f"step {index}: {x},{y} are not dual phratries")
    else:
        _expect(report, classifier.dual_verdict(x, y), f"step {index}: {x},{y} are not one tribe of opposite signs")


def check_trace(trace: MoveTrace) -> TraceCheckReport:
    """Checks a trace against the index properties of Reidemeister moves.

    Every step must keep the class of every component and the types of every surviving crossing, and the two
    crossings of every second Reidemeister move must lie in one tribe with opposite signs, or in dual phratries
    on flat diagrams.

    Args:
        trace (MoveTrace): The trace.

    Returns:
        TraceCheckReport: The findings.
    """
    report = TraceCheckReport()
    surface = trace.start.surface
    before_classifier = CrossingClassifier(trace.start)
    for index, step in enumerate(trace.steps, 1):
        before, after = before_classifier.diagram, trace.diagrams[index - 1]
        after_classifier = CrossingClassifier(after)
        report.steps += 1
        for component in range(len(before.components)):
            if not surface.words_equal(before.component_class(component), after.component_class(component)).is_equal:
                report.violations.append(f"step {index}: the class of component {component + 1} changed")
        if after.validate():
            report.violations.append(f"step {index}: the diagram is invalid")
        for crossing_id in step.correspondence(before.crossing_ids):
            report.survivors += 1
            if before.flat:
                old, new = before_classifier.flat_classify(crossing_id), after_classifier.flat_classify(crossing_id)
                _expect(report, flat_values_agree(old, new, surface), f"step {index}: {crossing_id} changed tribe")
                _expect(report, refined_values_agree(old, new, surface), f"step {index}: {crossing_id} changed phratry")
            else:
                old, new = before_classifier.classify(crossing_id), after_classifier.classify(crossing_id)
                _expect(report, index_values_agree(old, new, surface), f"step {index}: {crossing_id} changed index")
                if old.sign != new.sign:
                    report.violations.append(f"step {index}: {crossing_id} changed sign")
        for x, y in step.dual_pairs:
            classifier = after_classifier if step.move.kind is MoveKind.r2_add else before_classifier
            _check_pair(report, classifier, x, y, index)
        before_classifier = after_classifier
    logger.debug("%s", report)
    return report
