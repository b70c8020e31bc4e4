from __future__ import annotations
import logging
from collections import deque
from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import Optional

import networkx as nx

from .classifier import CrossingClassifier
from .diagram import TangleDiagram, serialize
from .enums import *
from .exceptions import BudgetExhausted, UnknownCrossing
from .moves import Move, apply_move, enumerate_moves
from .types import EqualityVerdict, ExplorationBudget

logger = logging.getLogger(__name__)

ROOT_STATE = "s0"

Node = tuple[str, str]
"""A crossing of a visited diagram, as a ``(state id, crossing id)`` pair."""


@dataclass(frozen=True)
class GraphEdge:
    """How two crossings of the root diagram are joined in the phratry graph.

    Attributes:
        a (str): The first crossing.
        b (str): The second crossing.
        weight (int): The parity of the number of second Reidemeister pairs along a joining path. In a self-dual
            component both parities occur.
        via (str): The deepest visited state on a shortest joining path, see :meth:`PhratryGraph.trace_for`.
    """
    a: str
    b: str
    weight: int
    via: str

    def __str__(self):
        return f"{self.a} {self.b} ε={self.weight} via={self.via}"


@dataclass(frozen=True)
class GraphComponent:
    """A connected component of the phratry graph, restricted to the crossings of the root diagram.

    Attributes:
        crossings (tuple[str, ...]): The root crossings in the component, a tribe.
        self_dual (bool): Whether the component contains a cycle of odd weight.
        classes (tuple[tuple[str, ...], ...]): The parity classes of the component, its phratries. A self-dual
            component has one class.
    """
    crossings: tuple[str, ...]
    self_dual: bool
    classes: tuple[tuple[str, ...], ...]


@dataclass
class PhratryGraph:
    """The phratry graph of a diagram, explored up to a budget.

    Vertices are crossings of visited diagrams. Edges of weight 0 join a crossing to its image under a move,
    edges of weight 1 join the two crossings of a second Reidemeister pair.

    Attributes:
        root (TangleDiagram): The explored diagram.
        budget (ExplorationBudget): The budget, with the crossing limit resolved.
        graph (nx.MultiGraph): The full graph over ``(state, crossing)`` nodes.
        states (dict[str, TangleDiagram]): The visited diagrams, with crossings not in the root renamed
            canonically. The root is ``s0``.
        parents (dict[str, tuple[str, Move, dict[str, str]]]): For every other state, the state it was first
            reached from, the move, and the renaming applied to the result.
        depths (dict[str, int]): The number of moves from the root to every state.
        components (list[GraphComponent]): The components that contain root crossings.
        edges (list[GraphEdge]): One edge for every pair of root crossings in a component.
        incomplete (bool): Whether the budget cut the search: states at the depth limit still had applicable moves,
            or the crossing limit held back insertions.
    """
    root: TangleDiagram
    budget: ExplorationBudget
    graph: nx.MultiGraph
    states: dict[str, TangleDiagram]
    parents: dict[str, tuple[str, Move, dict[str, str]]]
    depths: dict[str, int] = field(default_factory=dict)
    components: list[GraphComponent] = field(default_factory=list)
    edges: list[GraphEdge] = field(default_factory=list)
    incomplete: bool = False

    def __str__(self):
        status = "incomplete" if self.incomplete else "complete"
        return (f"{len(self.states)} states, {self.graph.number_of_nodes()} crossings, "
                f"{self.graph.number_of_edges()} edges, {len(self.components)} tribes ({status})")

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.root.crossing_ids

    def component_of(self, crossing_id: str) -> GraphComponent:
        for component in self.components:
            if crossing_id in component.crossings:
                return component
        raise UnknownCrossing(crossing_id)

    def _parity(self, crossing_id: str) -> int:
        component = self.component_of(crossing_id)
        return 0 if crossing_id in component.classes[0] else 1

    def same_tribe(self, a: str, b: str) -> bool:
        return self.component_of(a) is self.component_of(b)

    def same_phratry(self, a: str, b: str) -> bool:
        if not self.same_tribe(a, b):
            return False
        return self.component_of(a).self_dual or self._parity(a) == self._parity(b)

    def dual_phratries(self, a: str, b: str) -> bool:
        if not self.same_tribe(a, b):
            return False
        return self.component_of(a).self_dual or self._parity(a) != self._parity(b)

    def dump(self) -> list[str]:
        """The edge list and one summary line per tribe and phratry."""
        lines = [str(edge) for edge in self.edges]
        for component in self.components:
            members = ",".join(component.crossings)
            lines.append(f"{'self-dual tribe' if component.self_dual else 'tribe'} {{{members}}}")
            if not component.self_dual:
                lines.extend(f"  phratry {{{','.join(phratry)}}}" for phratry in component.classes if phratry)
        if self.incomplete:
            lines.append("incomplete: the exploration budget cut the search")
        return lines

    def tribes(self) -> list[tuple[str, ...]]:
        return [component.crossings for component in self.components]

    def phratries(self) -> list[tuple[str, ...]]:
        return [members for component in self.components for members in component.classes if members]

    def path_to(self, state_id: str) -> list[str]:
        """The states from the root to a state along the exploration tree."""
        if state_id not in self.states:
            raise KeyError(state_id)
        path = [state_id]
        while path[-1] != ROOT_STATE:
            path.append(self.parents[path[-1]][0])
        return path[::-1]

    def trace_for(self, state_id: str) -> list[tuple[Move, dict[str, str]]]:
        """The moves that reach a state from the root.

        Every move is given in the crossing ids of the state it applies to, together with the renaming that
        turns its result into the next state.
        """
        return [self.parents[state][1:] for state in self.path_to(state_id)[1:]]

    def replay(self, state_id: str) -> TangleDiagram:
        """Rebuilds a state by applying :meth:`trace_for` to the root."""
        current = self.root
        for move, renaming in self.trace_for(state_id):
            current, _ = apply_move(current, move)
            current = current.rename(renaming)
        return current


def canonical_renaming(diagram: TangleDiagram, keep: set[str]) -> dict[str, str]:
    """Renames the crossings not in ``keep`` to ``n1``, ``n2``, ... in order of first visit, skipping kept ids."""
    mapping = {}
    index = 1
    for crossing_id in diagram.crossing_ids:
        if crossing_id in keep:
            continue
        while f"n{index}" in keep:
            index += 1
        mapping[crossing_id] = f"n{index}"
        index += 1
    return {source: target for source, target in mapping.items() if source != target}


def _parity_classes(graph: nx.MultiGraph, start: Node) -> tuple[dict[Node, int], bool]:
    parity = {start: 0}
    self_dual = False
    queue = deque([start])
    while queue:
        node = queue.popleft()
        for _, neighbour, weight in graph.edges(node, data="weight"):
            expected = parity[node] ^ weight
            if neighbour not in parity:
                parity[neighbour] = expected
                queue.append(neighbour)
            elif parity[neighbour] != expected:
                self_dual = True
    return parity, self_dual


def _analyse(result: PhratryGraph):
    root_ids = result.root.crossing_ids
    seen: set[str] = set()
    for crossing_id in root_ids:
        if crossing_id in seen:
            continue
        start = (ROOT_STATE, crossing_id)
        nodes = nx.node_connected_component(result.graph, start)
        parity, self_dual = _parity_classes(result.graph, start)
        members = tuple(other for other in root_ids if (ROOT_STATE, other) in nodes)
        seen.update(members)
        if self_dual:
            classes = (members,)
        else:
            classes = (
                tuple(other for other in members if parity[(ROOT_STATE, other)] == 0),
                tuple(other for other in members if parity[(ROOT_STATE, other)] == 1),
            )
        component = GraphComponent(members, self_dual, classes)
        result.components.append(component)
        for a, b in combinations(members, 2):
            path = nx.shortest_path(result.graph, (ROOT_STATE, a), (ROOT_STATE, b))
            via = max((state for state, _ in path), key=lambda state: result.depths[state])
            weight = parity[(ROOT_STATE, a)] ^ parity[(ROOT_STATE, b)]
            result.edges.append(GraphEdge(a, b, weight, via))


def build_phratry_graph(diagram: TangleDiagram, budget: Optional[ExplorationBudget] = None,
                        strict: bool = False) -> PhratryGraph:
    """Explores the diagrams reachable from a diagram by Reidemeister moves and builds its phratry graph.

    The search is breadth first. Visited diagrams are identified up to the names of crossings that are not in
    the root. Every visited diagram contributes its second Reidemeister pairs as edges of weight 1, and every
    explored move contributes its correspondence as edges of weight 0.

    Args:
        diagram (TangleDiagram): The root diagram.
        budget (Optional[ExplorationBudget]): The exploration limits.
        strict (bool): Raise instead of returning a partial graph when the budget runs out.

    Returns:
        PhratryGraph: The graph, marked incomplete if the budget cut the search.

    Raises:
        BudgetExhausted: ``strict`` is set and the search was cut.
    """
    budget = budget or ExplorationBudget()
    root_ids = set(diagram.crossing_ids)
    budget = replace(budget, max_crossings=budget.crossing_limit(len(root_ids)))
    graph = nx.MultiGraph()
    states = {ROOT_STATE: diagram}
    keys = {serialize(diagram): ROOT_STATE}
    depth = {ROOT_STATE: 0}
    parents = {}
    incomplete = False
    queue = deque([ROOT_STATE])
    while queue:
        state_id = queue.popleft()
        state = states[state_id]
        graph.add_nodes_from((state_id, crossing_id) for crossing_id in state.crossing_ids)
        moves = enumerate_moves(state, budget, avoid=root_ids)
        for move in moves:
            if move.kind is MoveKind.r2_remove:
                x, y = move.crossings
                graph.add_edge((state_id, x), (state_id, y), weight=1, via=state_id)
        if len(state.crossings) + 1 > budget.max_crossings:
            incomplete = True
        if depth[state_id] >= budget.max_depth:
            incomplete = incomplete or bool(moves)
            continue
        for move in moves:
            result, step = apply_move(state, move)
            renaming = canonical_renaming(result, root_ids)
            result = result.rename(renaming)
            key = serialize(result)
            target = keys.get(key)
            if target is None:
                target = f"s{len(states)}"
                keys[key] = target
                states[target] = result
                depth[target] = depth[state_id] + 1
                parents[target] = (state_id, move, renaming)
                queue.append(target)
            for source, image in step.correspondence(state.crossing_ids).items():
                graph.add_edge((state_id, source), (target, renaming.get(image, image)), weight=0, via=target)
        logger.debug("explored %s at depth %d: %d moves", state_id, depth[state_id], len(moves))
    result = PhratryGraph(diagram, budget, graph, states, parents, depth, incomplete=incomplete)
    _analyse(result)
    logger.info("phratry graph: %s", result)
    if strict and incomplete:
        raise BudgetExhausted(result)
    return result


@dataclass(frozen=True)
class PairComparison:
    """One relation between two root crossings, as seen by the graph and by the classifier.

    Attributes:
        a (str): The first crossing.
        b (str): The second crossing, equal to ``a`` for self-duality checks.
        relation (str): ``tribe``, ``phratry``, ``dual`` or ``self-dual``.
        explored (bool): Whether the graph relates the crossings.
        verdict (Verdict): What the classifier says.
        status (ComparisonStatus): How the two relate.
    """
    a: str
    b: str
    relation: str
    explored: bool
    verdict: Verdict
    status: ComparisonStatus

    def __str__(self):
        pair = self.a if self.a == self.b else f"{self.a},{self.b}"
        return f"{self.relation} {pair}: graph={str(self.explored).lower()} classifier={self.verdict} {self.status}"


@dataclass
class ComparisonReport:
    """The comparison of a phratry graph with the classifier.

    Attributes:
        comparisons (list[PairComparison]): Every compared relation.
        incomplete (bool): Whether the graph was cut by its budget, in which case gaps are expected.
    """
    comparisons: list[PairComparison] = field(default_factory=list)
    incomplete: bool = False

    def with_status(self, status: ComparisonStatus) -> list[PairComparison]:
        return [comparison for comparison in self.comparisons if comparison.status is status]

    @property
    def violations(self) -> list[PairComparison]:
        return self.with_status(ComparisonStatus.soundness_violation)

    @property
    def gaps(self) -> list[PairComparison]:
        return self.with_status(ComparisonStatus.completeness_gap)

    @property
    def ok(self) -> bool:
        """No soundness violations, and no completeness gaps unless the graph is incomplete."""
        return not self.violations and (not self.gaps or self.incomplete)

    def __str__(self):
        counts = ", ".join(f"{len(self.with_status(status))} {status}" for status in ComparisonStatus)
        return f"{'ok' if self.ok else 'FAILED'}: {counts}"


def _status(explored: bool, verdict: EqualityVerdict) -> ComparisonStatus:
    if verdict.is_undecided:
        return ComparisonStatus.undecided
    if explored and verdict.is_not_equal:
        return ComparisonStatus.soundness_violation
    if not explored and verdict.is_equal:
        return ComparisonStatus.completeness_gap
    return ComparisonStatus.agree


def compare_with_classifier(graph: PhratryGraph, classifier: Optional[CrossingClassifier] = None) -> ComparisonReport:
    """Compares the tribes, phratries and dual phratries of an explored graph with the classifier.

    Every relation the graph shows must be confirmed by the classifier. Relations the classifier shows that the
    graph misses are gaps, expected only from incomplete graphs.

    Args:
        graph (PhratryGraph): The explored graph.
        classifier (Optional[CrossingClassifier]): A classifier of the root diagram.

    Returns:
        ComparisonReport: The comparison of every pair of root crossings.
    """
    classifier = classifier or CrossingClassifier(graph.root)
    flat = graph.root.flat
    if flat:
        verdicts = {
            "tribe": classifier.flat_tribe_verdict,
            "phratry": classifier.flat_phratry_verdict,
            "dual": classifier.flat_dual_verdict,
        }
    else:
        verdicts = {
            "tribe": classifier.tribe_verdict,
            "phratry": classifier.phratry_verdict,
            "dual": classifier.dual_verdict,
        }
    explored = {"tribe": graph.same_tribe, "phratry": graph.same_phratry, "dual": graph.dual_phratries}
    report = ComparisonReport(incomplete=graph.incomplete)
    for a, b in combinations(graph.vertices, 2):
        for relation, verdict_of in verdicts.items():
            related = explored[relation](a, b)
            verdict = verdict_of(a, b)
            report.comparisons.append(PairComparison(a, b, relation, related, verdict.verdict, _status(related, verdict)))
    for crossing_id in graph.vertices:
        related = graph.component_of(crossing_id).self_dual
        expected = flat and graph.root.crossing_kind(crossing_id) is CrossingKind.closed_self \
            and classifier.is_self_dual(crossing_id)
        verdict = EqualityVerdict.from_bool(expected)
        report.comparisons.append(
            PairComparison(crossing_id, crossing_id, "self-dual", related, verdict.verdict, _status(related, verdict))
        )
    logger.info("comparison with the classifier: %s", report)
    return report
