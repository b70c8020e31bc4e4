from __future__ import annotations
import logging
import warnings
from itertools import combinations
from typing import Callable, Optional

import networkx as nx

from .diagram import TangleDiagram
from .enums import *
from .exceptions import RoleMismatch, UndecidedComparison, UndecidedKey, UnsupportedCoarsening
from .group import SurfacePresentation
from .types import (
    CrossingIndexValue, CrossingReport, EqualityVerdict, FlatIndexValue, IndexPolynomial, Partition,
    RefinedFlatType, UniversalIndexValue, Word
)
from .utils import format_signed, format_vector, lattice_echelon, reduce_mod_lattice

logger = logging.getLogger(__name__)

ABELIAN_KINDS = (PresentationKind.trivial, PresentationKind.torus)


def index_values_agree(a: CrossingIndexValue, b: CrossingIndexValue, surface: SurfacePresentation) -> EqualityVerdict:
    """Compares the component, order and homotopy types of two crossings, possibly of two different diagrams of
    the same tangle.

    Signs are not compared. Homotopy types of closed self-crossings are compared modulo conjugation by powers of
    the component class and those of mixed crossings in the double coset of the two component classes.

    Args:
        a (CrossingIndexValue): The first value.
        b (CrossingIndexValue): The second value.
        surface (SurfacePresentation): The surface both values live on.

    Returns:
        EqualityVerdict: The verdict.
    """
    if (a.kind, a.component_type, a.order) != (b.kind, b.component_type, b.order):
        return EqualityVerdict.not_equal()
    if a.kind is CrossingKind.long_self:
        return surface.words_equal(a.h, b.h)
    if a.kind is CrossingKind.closed_self:
        return surface.equal_mod_power_conj(a.h, b.h, a.kappa)
    return surface.equal_double_coset(a.h, b.h, a.kappa, a.kappa_other)


def _homotopy_verdict(kind: CrossingKind, x: Word, y: Word, kappa: Word, kappa_other: Optional[Word],
                      surface: SurfacePresentation) -> EqualityVerdict:
    if kind is CrossingKind.long_self:
        return surface.words_equal(x, y)
    if kind is CrossingKind.closed_self:
        return surface.equal_mod_power_conj(x, y, kappa)
    return surface.equal_double_coset(x, y, kappa, kappa_other)


def flat_values_agree(a: FlatIndexValue, b: FlatIndexValue, surface: SurfacePresentation) -> EqualityVerdict:
    """Compares the flat component and flat homotopy types of two crossings of flat diagrams.

    Closed self-crossings additionally identify ``x`` with ``kappa x^-1``.
    """
    if (a.kind, a.components) != (b.kind, b.components):
        return EqualityVerdict.not_equal()
    if a.kind is CrossingKind.closed_self:
        return EqualityVerdict.any_of([
            surface.equal_mod_power_conj(a.h, b.h, a.kappa),
            surface.equal_mod_power_conj(a.h, surface.multiply(a.kappa, surface.inverse(b.h)), a.kappa),
        ])
    return _homotopy_verdict(a.kind, a.h, b.h, a.kappa, a.kappa_other, surface)


def refined_values_agree(a: FlatIndexValue, b: FlatIndexValue, surface: SurfacePresentation,
                         dual: bool = False) -> EqualityVerdict:
    """Compares the refined flat types of two crossings, or the refined types of ``a`` with the duals of the
    refined types of ``b``.

    The duality exchanges the refined component type ``(i, j)`` with ``(j, i)``, negates the refined order type
    and sends the refined homotopy type ``x`` of a closed self-crossing to ``kappa x^-1``.
    """
    if a.kind is not b.kind:
        return EqualityVerdict.not_equal()
    ref_a, ref_b = a.refined, b.refined
    component_type, order, h = ref_b.component_type, ref_b.order, ref_b.h
    if dual:
        component_type = (component_type[1], component_type[0])
        order = -order if order is not None else None
        if b.kind is CrossingKind.closed_self:
            h = surface.multiply(b.kappa, surface.inverse(h))
    if (ref_a.component_type, ref_a.order) != (component_type, order):
        return EqualityVerdict.not_equal()
    return _homotopy_verdict(a.kind, ref_a.h, h, a.kappa, a.kappa_other, surface)


class CrossingClassifier:
    """Computes the types and indices of the crossings of a diagram and sorts them into tribes and phratries.

    Classical diagrams use the component type, the order type and the homotopy type. Flat diagrams use the flat
    types for tribes and the refined flat types for phratries.

    Attributes:
        diagram (TangleDiagram): The diagram.
        surface (SurfacePresentation): The surface of the diagram.
    """
    def __init__(self, diagram: TangleDiagram):
        self.diagram = diagram
        self.surface = diagram.surface
        self._values: dict[str, CrossingIndexValue] = {}
        self._flat_values: dict[str, FlatIndexValue] = {}

    def _require(self, flat: bool, crossing_id: Optional[str] = None):
        if self.diagram.flat != flat:
            raise RoleMismatch(crossing_id, "a crossing of a flat diagram" if flat else "a crossing of a classical diagram")

    # classical diagrams

    def classify(self, crossing_id: str) -> CrossingIndexValue:
        """Computes the component type, order type and homotopy type of a crossing of a classical diagram.

        Args:
            crossing_id (str): The crossing.

        Returns:
            CrossingIndexValue: The types of the crossing.

        Raises:
            RoleMismatch: The diagram is flat.
            UnknownCrossing: The crossing does not exist.
        """
        self._require(False, crossing_id)
        if crossing_id in self._values:
            return self._values[crossing_id]
        d = self.diagram
        kind = d.crossing_kind(crossing_id)
        first, _ = d.locate(crossing_id)
        kappa_other = None
        order = None
        if kind is CrossingKind.long_self:
            h, kappa, order = d.inner_half(crossing_id), self.surface.identity, d.order_type(crossing_id)
        elif kind is CrossingKind.closed_self:
            h, kappa = d.extract_halves(crossing_id).positive, d.component_class(first.component)
        else:
            h, i, j = d.mixed_homotopy(crossing_id)
            kappa, kappa_other = d.component_class(i), d.component_class(j)
        value = CrossingIndexValue(
            crossing_id, kind, d.component_type(crossing_id), h, kappa, kappa_other, order, d.crossing_sign(crossing_id)
        )
        self._values[crossing_id] = value
        return value

    def tribe_verdict(self, v: str, w: str) -> EqualityVerdict:
        return index_values_agree(self.classify(v), self.classify(w), self.surface)

    def phratry_verdict(self, v: str, w: str) -> EqualityVerdict:
        return EqualityVerdict.all_of([
            EqualityVerdict.from_bool(self.classify(v).sign == self.classify(w).sign),
            self.tribe_verdict(v, w),
        ])

    def dual_verdict(self, v: str, w: str) -> EqualityVerdict:
        """Whether two crossings of a classical diagram lie in the same tribe with opposite signs."""
        return EqualityVerdict.all_of([
            EqualityVerdict.from_bool(self.classify(v).sign != self.classify(w).sign),
            self.tribe_verdict(v, w),
        ])

    @staticmethod
    def _decide(verdict: EqualityVerdict, v: str, w: str) -> bool:
        if verdict.is_undecided:
            raise UndecidedComparison(v, w, verdict.bound)
        return verdict.is_equal

    def same_tribe(self, v: str, w: str) -> bool:
        """Whether two crossings of a classical diagram belong to one tribe.

        Raises:
            UndecidedComparison: The comparison ended undecided on a closed surface of genus at least 2.
        """
        return self._decide(self.tribe_verdict(v, w), v, w)

    def same_phratry(self, v: str, w: str) -> bool:
        """Whether two crossings of a classical diagram belong to one phratry, i.e. one tribe and equal signs.

        Raises:
            UndecidedComparison: The comparison ended undecided on a closed surface of genus at least 2.
        """
        return self._decide(self.phratry_verdict(v, w), v, w)

    # flat diagrams

    def flat_classify(self, crossing_id: str) -> FlatIndexValue:
        """Computes the flat and refined flat types of a crossing of a flat diagram.

        Args:
            crossing_id (str): The crossing.

        Returns:
            FlatIndexValue: The types of the crossing.

        Raises:
            RoleMismatch: The diagram is classical.
            UnknownCrossing: The crossing does not exist.
        """
        self._require(True, crossing_id)
        if crossing_id in self._flat_values:
            return self._flat_values[crossing_id]
        d = self.diagram
        kind = d.crossing_kind(crossing_id)
        first, second = d.locate(crossing_id)
        chirality = d.crossing(crossing_id).chirality
        components = tuple(sorted((first.component + 1, second.component + 1)))
        kappa_other = None
        if kind is CrossingKind.long_self:
            h = d.inner_half(crossing_id)
            kappa = self.surface.identity
            refined = RefinedFlatType(components, 1 if chirality is Chirality.right else -1, h)
        elif kind is CrossingKind.closed_self:
            halves = d.extract_halves(crossing_id)
            h, kappa = halves.positive, d.component_class(first.component)
            refined = RefinedFlatType(components, None, halves.left)
        else:
            h, i, j = d.mixed_homotopy(crossing_id)
            kappa, kappa_other = d.component_class(i), d.component_class(j)
            ordered = (first.component + 1, second.component + 1)
            refined = RefinedFlatType(ordered if chirality is Chirality.left else ordered[::-1], None, h)
        value = FlatIndexValue(crossing_id, kind, components, h, kappa, kappa_other, refined)
        self._flat_values[crossing_id] = value
        return value

    def flat_tribe_verdict(self, v: str, w: str) -> EqualityVerdict:
        return flat_values_agree(self.flat_classify(v), self.flat_classify(w), self.surface)

    def flat_phratry_verdict(self, v: str, w: str) -> EqualityVerdict:
        return refined_values_agree(self.flat_classify(v), self.flat_classify(w), self.surface)

    def flat_dual_verdict(self, v: str, w: str) -> EqualityVerdict:
        return refined_values_agree(self.flat_classify(v), self.flat_classify(w), self.surface, dual=True)

    def flat_same_tribe(self, v: str, w: str) -> bool:
        """Whether two crossings of a flat diagram belong to one tribe.

        Raises:
            UndecidedComparison: The comparison ended undecided.
        """
        return self._decide(self.flat_tribe_verdict(v, w), v, w)

    def flat_same_phratry(self, v: str, w: str) -> bool:
        """Whether two crossings of a flat diagram belong to one phratry.

        Raises:
            UndecidedComparison: The comparison ended undecided.
        """
        return self._decide(self.flat_phratry_verdict(v, w), v, w)

    def flat_dual_phratry(self, v: str, w: str) -> bool:
        """Whether the phratry of ``v`` is the dual of the phratry of ``w``.

        Raises:
            UndecidedComparison: The comparison ended undecided.
        """
        return self._decide(self.flat_dual_verdict(v, w), v, w)

    def is_self_dual(self, crossing_id: str) -> bool:
        """Whether the phratry of a closed self-crossing of a flat diagram is self-dual, i.e. whether the square
        of its left half is the component class.

        Raises:
            RoleMismatch: The diagram is classical.
            NotASelfCrossing: The crossing is mixed.
            ComponentNotClosed: The crossing lies on a long component.
        """
        self._require(True, crossing_id)
        halves = self.diagram.extract_halves(crossing_id)
        kappa = self.diagram.component_class(self.diagram.locate(crossing_id)[0].component)
        return self.surface.words_equal(halves.left * halves.left, kappa).is_equal

    def _is_self_dual_safe(self, crossing_id: str) -> bool:
        if self.diagram.crossing_kind(crossing_id) is not CrossingKind.closed_self:
            return False
        return self.is_self_dual(crossing_id)

    # indices

    def default_coarsening(self) -> Coarsening:
        """Exact on the sphere, disk, annulus and torus, modulo the component class everywhere else."""
        if self.surface.kind in ABELIAN_KINDS or (self.surface.kind is PresentationKind.free and self.surface.rank <= 1):
            return Coarsening.exact_abelian
        return Coarsening.mod_kappa

    def _abelian_key(self, vector: tuple[int, ...]) -> str:
        if not vector:
            return "trivial"
        if len(vector) == 1:
            return str(vector[0])
        return format_vector(vector)

    def _homology_vector(self, value: CrossingIndexValue) -> tuple[int, ...]:
        vector = self.surface.abelianize(value.h)
        if value.kind is CrossingKind.mixed:
            echelon = lattice_echelon(
                [self.surface.abelianize(value.kappa), self.surface.abelianize(value.kappa_other)], self.surface.rank
            )
            vector = reduce_mod_lattice(vector, echelon)
        return vector

    def _representative(self, kind: CrossingKind, h: Word, kappa: Word, kappa_other: Optional[Word],
                        centralizer: bool = False) -> Optional[Word]:
        surface = self.surface
        if kind is CrossingKind.closed_self:
            if centralizer:
                return surface.centralizer_representative(h, kappa)
            return surface.orbit_representative(h, kappa)
        if kind is CrossingKind.mixed:
            return surface.double_coset_representative(h, kappa, kappa_other)
        if surface.kind is PresentationKind.hyperbolic:
            return None
        return surface.normal_form(h)

    def homology_index(self, crossing_id: str) -> tuple[int, ...]:
        """The abelianized homotopy type of a crossing. Mixed crossings are reduced modulo the lattice spanned by
        the classes of their two components."""
        return self._homology_vector(self.classify(crossing_id))

    def intersection_index(self, crossing_id: str) -> int:
        """The intersection number of the component with the positive half of a closed self-crossing.

        Raises:
            NotASelfCrossing: The crossing is mixed.
            ComponentNotClosed: The crossing lies on a long component.
        """
        halves = self.diagram.extract_halves(crossing_id)
        kappa = self.diagram.component_class(self.diagram.locate(crossing_id)[0].component)
        return self.surface.intersection_form(kappa, halves.positive)

    def universal_index(self, crossing_id: str, coarsening: Optional[Coarsening] = None) -> UniversalIndexValue:
        """Computes the universal index of a crossing of a classical diagram, or one of its computable
        coarsenings.

        ``mod-kappa`` refines the universal index and ``mod-centralizer`` coarsens it. On the sphere, disk,
        annulus and torus both coincide with ``exact-abelian``, the universal index itself.

        Args:
            crossing_id (str): The crossing.
            coarsening (Optional[Coarsening]): The quotient to compute in. Defaults to
                :meth:`default_coarsening`.

        Returns:
            UniversalIndexValue: The value with a canonical key where one can be computed.

        Raises:
            UnsupportedCoarsening: ``exact-abelian`` on a non-abelian surface group, or ``mod-centralizer`` for a
                closed self-crossing of a null-homotopic component on a closed surface of genus at least 2.
        """
        coarsening = Coarsening(coarsening) if coarsening is not None else self.default_coarsening()
        value = self.classify(crossing_id)
        if coarsening is Coarsening.exact_abelian:
            if self.default_coarsening() is not Coarsening.exact_abelian:
                raise UnsupportedCoarsening(coarsening, self.surface.describe())
            vector = self._homology_vector(value)
            return UniversalIndexValue(
                crossing_id, coarsening, value.component_type, value.order, vector, self._abelian_key(vector)
            )
        if coarsening is Coarsening.homology:
            vector = self._homology_vector(value)
            return UniversalIndexValue(
                crossing_id, coarsening, value.component_type, value.order, vector, self._abelian_key(vector)
            )
        if coarsening is Coarsening.mod_centralizer and self.surface.kind is PresentationKind.hyperbolic \
                and value.kind is CrossingKind.closed_self and self.surface.is_trivial(value.kappa):
            raise UnsupportedCoarsening(coarsening, self.surface.describe())
        representative = self._representative(
            value.kind, value.h, value.kappa, value.kappa_other, coarsening is Coarsening.mod_centralizer
        )
        key = self.surface.format_word(representative) if representative is not None else None
        return UniversalIndexValue(
            crossing_id, coarsening, value.component_type, value.order,
            representative if representative is not None else value.h, key
        )

    def _selector_key(self, crossing_id: str, selector: IndexSelector, coarsening: Optional[Coarsening],
                      opaque: list[tuple[CrossingIndexValue, str]]) -> str:
        value = self.classify(crossing_id)
        several = len(self.diagram.components) > 1
        prefix = []
        if several or selector is IndexSelector.component_only:
            prefix.append(f"({value.component_type[0]},{value.component_type[1]})")
        if selector is IndexSelector.component_only:
            return prefix[0]
        if value.order is not None and selector is not IndexSelector.homotopy_only:
            prefix.append(format_signed(value.order))
        if selector is IndexSelector.homology:
            h_key = self._abelian_key(self.homology_index(crossing_id))
        elif selector is IndexSelector.intersection:
            if value.kind is not CrossingKind.closed_self:
                return " ".join(prefix or [f"({value.component_type[0]},{value.component_type[1]})"])
            h_key = str(self.intersection_index(crossing_id))
        else:
            index = self.universal_index(crossing_id, coarsening)
            h_key = index.key if index.key is not None else self._opaque_key(value, opaque, index.coarsening)
        if selector is IndexSelector.homotopy_only:
            return h_key
        return " ".join(prefix + [h_key])

    def has_curl_value(self, crossing_id: str) -> bool:
        """Whether a crossing has the index value of a curl: a trivial homotopy type, or the component class
        itself for a closed self-crossing. Mixed crossings never do."""
        value = self.classify(crossing_id)
        if value.kind is CrossingKind.mixed:
            return False
        if self.surface.is_trivial(value.h):
            return True
        return value.kind is CrossingKind.closed_self and self.surface.words_equal(value.h, value.kappa).is_equal

    def _opaque_verdict(self, a: CrossingIndexValue, b: CrossingIndexValue, coarsening: Coarsening) -> EqualityVerdict:
        if coarsening is not Coarsening.mod_centralizer or a.kind is not CrossingKind.closed_self:
            return index_values_agree(a, b, self.surface)
        if (a.kind, a.component_type, a.order) != (b.kind, b.component_type, b.order):
            return EqualityVerdict.not_equal()
        return self.surface.equal_mod_centralizer(a.h, b.h, a.kappa)

    def _opaque_key(self, value: CrossingIndexValue, opaque: list[tuple[CrossingIndexValue, str]],
                    coarsening: Coarsening) -> str:
        for other, key in opaque:
            verdict = self._opaque_verdict(value, other, coarsening)
            if verdict.is_undecided:
                raise UndecidedKey(value.crossing_id)
            if verdict.is_equal:
                return key
        key = f"~{self.surface.format_word(value.h)}"
        opaque.append((value, key))
        return key

    def index_polynomial(self, selector: IndexSelector = IndexSelector.universal,
                         coarsening: Optional[Coarsening] = None) -> IndexPolynomial:
        """Sums the signs of all crossings grouped by their index value.

        On closed surfaces of genus at least 2 values without a canonical key are grouped by comparison and
        named ``~<word>`` after a representative.

        Every selector gives a polynomial that second and third Reidemeister moves keep. First Reidemeister moves
        add or remove a crossing whose homotopy type is trivial or the component class, so only
        :attr:`IndexSelector.nontrivial`, which leaves such crossings out, is kept by all moves.

        Args:
            selector (IndexSelector): The index to sum over.
            coarsening (Optional[Coarsening]): The quotient of the universal index, see :meth:`universal_index`.

        Returns:
            IndexPolynomial: The polynomial.

        Raises:
            RoleMismatch: The diagram is flat.
            UndecidedKey: Two index values could not be compared.
        """
        self._require(False)
        selector = IndexSelector(selector)
        coefficients: dict[str, int] = {}
        opaque: list[tuple[CrossingIndexValue, str]] = []
        for crossing in self.diagram.crossings:
            if selector is IndexSelector.nontrivial and self.has_curl_value(crossing.crossing_id):
                continue
            key = self._selector_key(crossing.crossing_id, selector, coarsening, opaque)
            coefficients[key] = coefficients.get(key, 0) + crossing.sign
        return IndexPolynomial(selector, coefficients)

    # partitions and reports

    def _partition(self, name: str, prefix: str, verdict: Callable[[str, str], EqualityVerdict],
                   self_dual: Callable[[str], bool]) -> Partition:
        graph = nx.Graph()
        ids = self.diagram.crossing_ids
        graph.add_nodes_from(ids)
        undecided = []
        for v, w in combinations(ids, 2):
            result = verdict(v, w)
            if result.is_equal:
                graph.add_edge(v, w)
            elif result.is_undecided:
                undecided.append((v, w))
        order = {crossing_id: index for index, crossing_id in enumerate(ids)}
        classes = sorted(
            (tuple(sorted(members, key=order.__getitem__)) for members in nx.connected_components(graph)),
            key=lambda members: order[members[0]],
        )
        labels = {member: f"{prefix}{index}" for index, members in enumerate(classes, 1) for member in members}
        marked = frozenset(f"{prefix}{index}" for index, members in enumerate(classes, 1) if self_dual(members[0]))
        if undecided:
            warnings.warn(f"{len(undecided)} crossing comparisons ended undecided; {name} may be split too finely")
        logger.debug("%s: %d classes, %d undecided pairs", name, len(classes), len(undecided))
        return Partition(name, tuple(classes), labels, marked, tuple(undecided))

    def _self_dual_mark(self, crossing_id: str) -> bool:
        return self.diagram.flat and self._is_self_dual_safe(crossing_id)

    def tribes(self) -> Partition:
        """Partitions the crossings into tribes. Tribes consisting of a self-dual phratry are marked."""
        verdict = self.flat_tribe_verdict if self.diagram.flat else self.tribe_verdict
        return self._partition("tribes", "T", verdict, self._self_dual_mark)

    def phratries(self) -> Partition:
        """Partitions the crossings into phratries, marking self-dual ones."""
        verdict = self.flat_phratry_verdict if self.diagram.flat else self.phratry_verdict
        return self._partition("phratries", "P", verdict, self._self_dual_mark)

    def flat_tribes(self) -> Partition:
        self._require(True)
        return self.tribes()

    def flat_phratries(self) -> Partition:
        self._require(True)
        return self.phratries()

    def report(self, coarsening: Optional[Coarsening] = None) -> list[CrossingReport]:
        """Builds the per-crossing classification report in crossing order.

        Args:
            coarsening (Optional[Coarsening]): The quotient the homotopy type is reported in, for classical
                diagrams.

        Returns:
            list[CrossingReport]: One line per crossing.
        """
        tribes, phratries = self.tribes(), self.phratries()
        lines = []
        for crossing_id in self.diagram.crossing_ids:
            if self.diagram.flat:
                value = self.flat_classify(crossing_id)
                refined = value.refined
                representative = self._representative(value.kind, refined.h, value.kappa, value.kappa_other)
                h_key = self.surface.format_word(representative) if representative is not None else \
                    f"~{self.surface.format_word(refined.h)}"
                lines.append(CrossingReport(
                    crossing_id, refined.component_type, refined.order, None, h_key,
                    tribes.label(crossing_id), phratries.label(crossing_id)
                ))
            else:
                value = self.classify(crossing_id)
                index = self.universal_index(crossing_id, coarsening)
                h_key = index.key if index.key is not None else f"~{self.surface.format_word(value.h)}"
                lines.append(CrossingReport(
                    crossing_id, value.component_type, value.order, value.sign, h_key,
                    tribes.label(crossing_id), phratries.label(crossing_id)
                ))
        return lines
