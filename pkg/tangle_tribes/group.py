from __future__ import annotations
import logging
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Mapping, Optional, Union

from sympy.combinatorics.free_groups import FreeGroupElement, free_group

from .enums import PresentationKind
from .exceptions import InvalidPresentation, TrivialKappa, UnknownGenerator, UnsupportedPresentation
from .types import EqualityVerdict, Word
from .utils import (
    Letter, free_reduce_letters, inverse_letters, join_letters, lattice_echelon, least_rotation, reduce_mod_lattice,
    smallest_period, split_letters
)

logger = logging.getLogger(__name__)

HANDLE_LETTERS = "abcdefghijklmnopqrs"
BOUNDARY_LETTERS = "tuvwxyz"
DEFAULT_SEARCH_BOUND = 32

WordLike = Union[str, Word]
"""Either a word in the textual syntax or a word of the presentation's free group."""


def default_generators(genus: int, boundary_components: int) -> tuple[str, ...]:
    """Builds the default generator alphabet of a surface.

    Handles use ``a b``, ``c d``, ... and the boundary generators of a surface with boundary use ``t u v ...``.

    Args:
        genus (int): The genus of the surface.
        boundary_components (int): The number of boundary components.

    Returns:
        tuple[str, ...]: The generators.

    Raises:
        InvalidPresentation: The surface needs more letters than the default alphabet has.
    """
    boundary_letters = max(boundary_components - 1, 0)
    if 2 * genus > len(HANDLE_LETTERS) or boundary_letters > len(BOUNDARY_LETTERS):
        raise InvalidPresentation(genus, boundary_components, "too many generators for the default alphabet")
    return tuple(HANDLE_LETTERS[:2 * genus]) + tuple(BOUNDARY_LETTERS[:boundary_letters])


@dataclass(frozen=True)
class SurfacePresentation:
    """A presentation of the fundamental group of a compact connected oriented surface.

    Surfaces with boundary have a free fundamental group on ``2 * genus + boundary_components - 1`` generators.
    Closed surfaces of genus ``g >= 1`` have the handle generators ``a, b, c, d, ...`` and the single relator
    ``abAB cdCD ...``. The sphere has the trivial group.

    Words are passed either in the textual syntax, lowercase letters for generators, uppercase letters for
    inverses and ``1`` for the identity, or as elements of :attr:`group`.

    Attributes:
        genus (int): The genus of the surface.
        boundary_components (int): The number of boundary components.
        generators (tuple[str, ...]): The generator alphabet. Defaults to :func:`default_generators`.
        search_bound (int): The exponent bound of searches that cannot be decided on closed surfaces of genus
            at least 2.
        group (sympy.combinatorics.free_groups.FreeGroup): The free group on the generators. Words are its
            elements.
        relator (Optional[Word]): The surface relator of a closed surface of positive genus.
        kind (PresentationKind): The word problem strategy.
    """
    genus: int
    boundary_components: int
    generators: Optional[tuple[str, ...]] = None
    search_bound: int = field(default=DEFAULT_SEARCH_BOUND, compare=False)
    group: object = field(init=False, repr=False, compare=False)
    relator: Optional[Word] = field(init=False, repr=False, compare=False)
    kind: PresentationKind = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.genus < 0 or self.boundary_components < 0:
            raise InvalidPresentation(self.genus, self.boundary_components, "genus and boundary must not be negative")
        if self.generators is None:
            generators = default_generators(self.genus, self.boundary_components)
        else:
            generators = tuple(self.generators)
            expected = 2 * self.genus + max(self.boundary_components - 1, 0)
            if len(generators) != expected:
                raise InvalidPresentation(
                    self.genus, self.boundary_components, f"expected {expected} generators, got {len(generators)}"
                )
            if any(len(name) != 1 or not (name.isascii() and name.islower()) for name in generators):
                raise InvalidPresentation(
                    self.genus, self.boundary_components, "generators must be single lowercase ASCII letters"
                )
            if len(set(generators)) != len(generators):
                raise InvalidPresentation(self.genus, self.boundary_components, "generators must be distinct")
        object.__setattr__(self, "generators", generators)
        object.__setattr__(self, "group", free_group(",".join(generators))[0])
        if not generators:
            kind = PresentationKind.trivial
        elif self.boundary_components:
            kind = PresentationKind.free
        elif self.genus == 1:
            kind = PresentationKind.torus
        else:
            kind = PresentationKind.hyperbolic
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "_index", {name: index for index, name in enumerate(generators)})
        relator_letters: list[Letter] = []
        if not self.boundary_components:
            for handle in range(self.genus):
                a, b = 2 * handle, 2 * handle + 1
                relator_letters.extend([(a, 1), (b, 1), (a, -1), (b, -1)])
        object.__setattr__(self, "_relator_letters", relator_letters)
        object.__setattr__(self, "relator", self._element(relator_letters) if relator_letters else None)
        cyclic: list[tuple[Letter, ...]] = []
        for base in (relator_letters, inverse_letters(relator_letters)):
            for shift in range(len(base)):
                rotation = tuple(base[shift:] + base[:shift])
                if rotation not in cyclic:
                    cyclic.append(rotation)
        object.__setattr__(self, "_cyclic_relators", cyclic)

    def __str__(self):
        return self.describe()

    def describe(self) -> str:
        """A short human-readable name of the surface, e.g. ``annulus`` or ``closed surface of genus 2``."""
        names = {(0, 0): "sphere", (0, 1): "disk", (0, 2): "annulus", (1, 0): "torus"}
        if (self.genus, self.boundary_components) in names:
            return names[(self.genus, self.boundary_components)]
        if not self.boundary_components:
            return f"closed surface of genus {self.genus}"
        return f"surface of genus {self.genus} with {self.boundary_components} boundary components"

    @property
    def is_closed(self) -> bool:
        return self.boundary_components == 0

    @property
    def rank(self) -> int:
        """The number of generators."""
        return len(self.generators)

    @property
    def identity(self) -> Word:
        return self.group.identity

    def header(self) -> str:
        """The ``surface`` line of the ``.tdg`` format for this presentation."""
        text = f"surface genus={self.genus} boundary={self.boundary_components}"
        if self.generators != default_generators(self.genus, self.boundary_components):
            text += f" generators={''.join(self.generators)}"
        return text

    # conversion between words and letter lists

    def _letters(self, word: Word) -> list[Letter]:
        letters: list[Letter] = []
        for symbol, exponent in word.array_form:
            index = self._index[str(symbol)]
            letters.extend([(index, 1 if exponent > 0 else -1)] * abs(exponent))
        return letters

    def _element(self, letters: Iterable[Letter]) -> Word:
        runs: list[list[int]] = []
        for index, sign in letters:
            if runs and runs[-1][0] == index:
                runs[-1][1] += sign
                if not runs[-1][1]:
                    runs.pop()
            else:
                runs.append([index, sign])
        if not runs:
            return self.group.identity
        symbols = self.group.symbols
        return self.group.dtype(tuple((symbols[index], exponent) for index, exponent in runs))

    def parse_word(self, text: str) -> Word:
        """Reads a word in the textual syntax.

        Args:
            text (str): The word, e.g. ``abAB``, ``t t`` or ``1``.

        Returns:
            Word: The freely reduced word.

        Raises:
            UnknownGenerator: The text uses a letter outside the alphabet.
        """
        try:
            named = split_letters(text)
        except ValueError as error:
            raise UnknownGenerator(str(error), self.generators) from None
        letters = []
        for name, sign in named:
            if name not in self._index:
                raise UnknownGenerator(name if sign > 0 else name.upper(), self.generators)
            letters.append((self._index[name], sign))
        return self._element(free_reduce_letters(letters))

    def format_word(self, word: WordLike) -> str:
        """Writes a word in the textual syntax, ``1`` for the identity."""
        word = self.coerce(word)
        return join_letters((self.generators[index], sign) for index, sign in self._letters(word))

    def coerce(self, word: WordLike) -> Word:
        """Converts textual words and words of an equal alphabet into elements of :attr:`group`.

        Raises:
            UnknownGenerator: The word uses a letter outside the alphabet.
        """
        if isinstance(word, str):
            return self.parse_word(word)
        if isinstance(word, FreeGroupElement) and word.group == self.group:
            return word
        return self.parse_word(
            join_letters((str(symbol), 1 if exponent > 0 else -1) for symbol, exponent in word.array_form
                         for _ in range(abs(exponent)))
        )

    def word_key(self, word: WordLike) -> tuple:
        """The sort key of canonical representatives: length first, then letters by generator, generator
        before inverse."""
        letters = self._letters(self.coerce(word))
        return len(letters), tuple((index, 0 if sign > 0 else 1) for index, sign in letters)

    # normal forms and the word problem

    def free_reduce(self, word: WordLike) -> Word:
        """Freely reduces a word.

        Args:
            word (WordLike): The word.

        Returns:
            Word: The unique freely reduced word.

        Raises:
            UnknownGenerator: The word uses a letter outside the alphabet.
        """
        return self.coerce(word)

    def abelianize(self, word: WordLike) -> tuple[int, ...]:
        """Computes the exponent sum of every generator.

        Args:
            word (WordLike): The word.

        Returns:
            tuple[int, ...]: The exponent sums in generator order.
        """
        vector = [0] * self.rank
        for index, sign in self._letters(self.coerce(word)):
            vector[index] += sign
        return tuple(vector)

    def from_vector(self, vector: Iterable[int]) -> Word:
        """Builds the word ``g1^e1 g2^e2 ...`` from an exponent vector."""
        letters: list[Letter] = []
        for index, exponent in enumerate(vector):
            letters.extend([(index, 1 if exponent > 0 else -1)] * abs(exponent))
        return self._element(letters)

    def _dehn_reduce(self, letters: list[Letter]) -> list[Letter]:
        word = free_reduce_letters(letters)
        half = len(self._relator_letters) // 2
        changed = True
        while changed:
            changed = False
            for start in range(len(word)):
                for rotation in self._cyclic_relators:
                    length = 0
                    while (length < len(rotation) and start + length < len(word)
                           and word[start + length] == rotation[length]):
                        length += 1
                    if length > half:
                        replacement = inverse_letters(list(rotation[length:]))
                        word = free_reduce_letters(word[:start] + replacement + word[start + length:])
                        changed = True
                        break
                if changed:
                    break
        return word

    def normal_form(self, word: WordLike) -> Word:
        """Computes the normal form of a word in the surface group.

        Free groups use free reduction, the torus uses the word ``a^m b^n`` of the exponent vector and the sphere
        and disk use the empty word. Closed surfaces of genus at least 2 use a Dehn-reduced representative, which
        is only canonical up to the ambiguity of Dehn's algorithm, so compare such words with :meth:`words_equal`.

        Args:
            word (WordLike): The word.

        Returns:
            Word: The normal form.

        Raises:
            UnknownGenerator: The word uses a letter outside the alphabet.
        """
        word = self.coerce(word)
        if self.kind is PresentationKind.trivial:
            return self.group.identity
        if self.kind is PresentationKind.free:
            return word
        if self.kind is PresentationKind.torus:
            return self.from_vector(self.abelianize(word))
        return self._element(self._dehn_reduce(self._letters(word)))

    def multiply(self, *words: WordLike) -> Word:
        """The normal form of the product of the words."""
        product = self.group.identity
        for word in words:
            product = product * self.coerce(word)
        return self.normal_form(product)

    def inverse(self, word: WordLike) -> Word:
        return self.normal_form(self.coerce(word).inverse())

    def is_trivial(self, word: WordLike) -> bool:
        """Whether the word represents the identity of the surface group."""
        word = self.coerce(word)
        if self.kind is PresentationKind.trivial:
            return True
        if self.kind is PresentationKind.free:
            return word.is_identity
        if self.kind is PresentationKind.torus:
            return not any(self.abelianize(word))
        return not self._dehn_reduce(self._letters(word))

    def words_equal(self, x: WordLike, y: WordLike) -> EqualityVerdict:
        """Decides whether two words represent the same element of the surface group.

        The word problem is solvable on every surface, so the verdict is never undecided.

        Args:
            x (WordLike): The first word.
            y (WordLike): The second word.

        Returns:
            EqualityVerdict: Equal or not equal.
        """
        x, y = self.coerce(x), self.coerce(y)
        return EqualityVerdict.from_bool(self.is_trivial(x * y.inverse()))

    # cyclic words

    def _cyclic_reduce(self, word: Word) -> tuple[list[Letter], Word]:
        """Splits a freely reduced word as ``u c u^-1`` with ``c`` cyclically reduced and returns ``(c, u)``."""
        letters = self._letters(word)
        start, end = 0, len(letters)
        while end - start > 1 and letters[start][0] == letters[end - 1][0] and letters[start][1] == -letters[end - 1][1]:
            start += 1
            end -= 1
        return letters[start:end], self._element(letters[:start])

    def _cyclic_dehn_reduce(self, word: Word) -> tuple[list[Letter], Word]:
        """Like :meth:`_cyclic_reduce`, but also shortens the core by Dehn's algorithm on every rotation."""
        core, conjugator = self._cyclic_reduce(self.normal_form(word))
        shortened = True
        while shortened and len(core) > 1:
            shortened = False
            for shift in range(1, len(core)):
                rotated = self._dehn_reduce(core[shift:] + core[:shift])
                if len(rotated) < len(core):
                    inner, extra = self._cyclic_reduce(self._element(rotated))
                    conjugator = conjugator * self._element(core[:shift]) * extra
                    core = inner
                    shortened = True
                    break
        return core, conjugator

    def _in_cyclic_subgroup(self, word: Word, core: Word) -> bool:
        """Whether ``word`` is a power of the cyclically reduced non-trivial word ``core``."""
        if word.is_identity:
            return True
        if len(word) % len(core):
            return False
        power = len(word) // len(core)
        return word == core ** power or word == core ** -power

    def _require_decidable(self, operation: str):
        if self.kind is PresentationKind.hyperbolic:
            raise UnsupportedPresentation(operation, self.describe())

    def equal_mod_power_conj(self, x: WordLike, y: WordLike, kappa: WordLike) -> EqualityVerdict:
        """Decides whether ``y = kappa^n x kappa^-n`` for some integer ``n``.

        On free groups the exponent search is complete: with ``kappa = u c u^-1`` and ``c`` cyclically reduced,
        conjugating by ``c^n`` lengthens the word once ``|n|`` exceeds ``(|x| + |y|) / |c|``. The torus group is
        abelian. On closed surfaces of genus at least 2 the search stops at :attr:`search_bound` and may end
        undecided.

        Args:
            x (WordLike): The first word.
            y (WordLike): The second word.
            kappa (WordLike): The conjugating element.

        Returns:
            EqualityVerdict: The verdict.
        """
        x, y, kappa = self.coerce(x), self.coerce(y), self.coerce(kappa)
        if self.kind in (PresentationKind.trivial, PresentationKind.torus) or self.is_trivial(kappa):
            return self.words_equal(x, y)
        if self.kind is PresentationKind.free:
            core_letters, conjugator = self._cyclic_reduce(kappa)
            core = self._element(core_letters)
            x_core = conjugator.inverse() * x * conjugator
            y_core = conjugator.inverse() * y * conjugator
            bound = (len(x_core) + len(y_core)) // len(core) + 2
            logger.debug("mod-kappa search over |n| <= %d", bound)
            for power in range(-bound, bound + 1):
                if core ** power * x_core * core ** -power == y_core:
                    return EqualityVerdict.equal()
            return EqualityVerdict.not_equal()
        if self.abelianize(x) != self.abelianize(y):
            return EqualityVerdict.not_equal()
        if self.words_equal(x, y).is_equal:
            return EqualityVerdict.equal()
        forward, backward = x, x
        for _ in range(self.search_bound):
            forward = self.normal_form(kappa * forward * kappa.inverse())
            backward = self.normal_form(kappa.inverse() * backward * kappa)
            if self.words_equal(forward, y).is_equal or self.words_equal(backward, y).is_equal:
                return EqualityVerdict.equal()
        logger.debug("mod-kappa search undecided at bound %d", self.search_bound)
        return EqualityVerdict.undecided(self.search_bound)

    def equal_mod_centralizer(self, x: WordLike, y: WordLike, kappa: WordLike) -> EqualityVerdict:
        """Decides whether ``y = g x g^-1`` for some ``g`` that commutes with ``kappa``.

        Free groups compare conjugacy classes when ``kappa`` is trivial and otherwise search along the primitive
        root, which generates the centralizer. On closed surfaces of genus at least 2 the search runs along
        :meth:`centralizer_root` up to :attr:`search_bound` and may end undecided.

        Args:
            x (WordLike): The first word.
            y (WordLike): The second word.
            kappa (WordLike): The element whose centralizer acts.

        Returns:
            EqualityVerdict: The verdict.

        Raises:
            UnsupportedPresentation: The surface is closed of genus at least 2 and ``kappa`` is trivial.
        """
        x, y, kappa = self.coerce(x), self.coerce(y), self.coerce(kappa)
        if self.kind in (PresentationKind.trivial, PresentationKind.torus):
            return self.words_equal(x, y)
        if self.is_trivial(kappa):
            self._require_decidable("equal_mod_centralizer")
            return EqualityVerdict.from_bool(self.conjugacy_canonical(x) == self.conjugacy_canonical(y))
        root, _ = self.centralizer_root(kappa)
        return self.equal_mod_power_conj(x, y, root)

    def _double_coset_bounds(self, x_len: int, core_i: Word, core_j: Word) -> int:
        return (3 * x_len + 2 * len(core_i) + 2 * len(core_j)) // len(core_i) + len(core_j) + 3

    def equal_double_coset(self, x: WordLike, y: WordLike, kappa_i: WordLike, kappa_j: WordLike) -> EqualityVerdict:
        """Decides whether ``y = kappa_i^p x kappa_j^q`` for some integers ``p`` and ``q``.

        If one of the two classes is trivial the test reduces to membership in a cyclic subgroup, and if both are
        trivial to plain equality. The torus case is lattice arithmetic on exponent vectors.

        Args:
            x (WordLike): The first word.
            y (WordLike): The second word.
            kappa_i (WordLike): The left acting element.
            kappa_j (WordLike): The right acting element.

        Returns:
            EqualityVerdict: The verdict, undecided only on closed surfaces of genus at least 2.
        """
        x, y = self.coerce(x), self.coerce(y)
        kappa_i, kappa_j = self.coerce(kappa_i), self.coerce(kappa_j)
        if self.kind is PresentationKind.trivial:
            return EqualityVerdict.equal()
        if self.kind is PresentationKind.torus:
            return EqualityVerdict.from_bool(self._in_lattice(x, y, kappa_i, kappa_j))
        if self.kind is PresentationKind.free:
            return EqualityVerdict.from_bool(self._free_double_coset(x, y, kappa_i, kappa_j))
        if not self._in_lattice(x, y, kappa_i, kappa_j):
            return EqualityVerdict.not_equal()
        if self.words_equal(x, y).is_equal:
            return EqualityVerdict.equal()
        target = [b - a for a, b in zip(self.abelianize(x), self.abelianize(y))]
        vector_i, vector_j = self.abelianize(kappa_i), self.abelianize(kappa_j)
        bound = self.search_bound
        for p in range(-bound, bound + 1):
            left = self.normal_form(kappa_i ** p * x)
            for q in range(-bound, bound + 1):
                if [p * a + q * b for a, b in zip(vector_i, vector_j)] != target:
                    continue
                if self.words_equal(left * kappa_j ** q, y).is_equal:
                    return EqualityVerdict.equal()
        logger.debug("double coset search undecided at bound %d", bound)
        return EqualityVerdict.undecided(bound)

    def _in_lattice(self, x: Word, y: Word, kappa_i: Word, kappa_j: Word) -> bool:
        echelon = lattice_echelon([self.abelianize(kappa_i), self.abelianize(kappa_j)], self.rank)
        difference = [b - a for a, b in zip(self.abelianize(x), self.abelianize(y))]
        return not any(reduce_mod_lattice(difference, echelon))

    def _free_double_coset(self, x: Word, y: Word, kappa_i: Word, kappa_j: Word) -> bool:
        trivial_i, trivial_j = kappa_i.is_identity, kappa_j.is_identity
        if trivial_i and trivial_j:
            return x == y
        if trivial_i:
            core_letters, conjugator = self._cyclic_reduce(kappa_j)
            return self._in_cyclic_subgroup(conjugator.inverse() * x.inverse() * y * conjugator,
                                            self._element(core_letters))
        if trivial_j:
            core_letters, conjugator = self._cyclic_reduce(kappa_i)
            return self._in_cyclic_subgroup(conjugator.inverse() * y * x.inverse() * conjugator,
                                            self._element(core_letters))
        letters_i, conjugator_i = self._cyclic_reduce(kappa_i)
        letters_j, conjugator_j = self._cyclic_reduce(kappa_j)
        core_i, core_j = self._element(letters_i), self._element(letters_j)
        x_core = conjugator_i.inverse() * x * conjugator_j
        y_core = conjugator_i.inverse() * y * conjugator_j
        bound = self._double_coset_bounds(max(len(x_core), len(y_core)), core_i, core_j)
        logger.debug("double coset search over |p| <= %d", bound)
        for p in range(-bound, bound + 1):
            if self._in_cyclic_subgroup(x_core.inverse() * core_i ** -p * y_core, core_j):
                return True
        return False

    # roots and canonical representatives

    def primitive_root(self, kappa: WordLike) -> tuple[Word, int]:
        """Writes ``kappa`` as ``root^exponent`` with the largest possible exponent.

        Args:
            kappa (WordLike): A non-trivial word.

        Returns:
            tuple[Word, int]: The primitive root and the exponent.

        Raises:
            UnsupportedPresentation: The surface is closed of genus at least 2.
            TrivialKappa: ``kappa`` is trivial.
        """
        self._require_decidable("primitive_root")
        kappa = self.coerce(kappa)
        if self.is_trivial(kappa):
            raise TrivialKappa(self.format_word(kappa))
        if self.kind is PresentationKind.torus:
            m, n = self.abelianize(kappa)
            divisor = gcd(m, n)
            return self.from_vector((m // divisor, n // divisor)), divisor
        core_letters, conjugator = self._cyclic_reduce(kappa)
        period = smallest_period(core_letters)
        root = conjugator * self._element(core_letters[:period]) * conjugator.inverse()
        return root, len(core_letters) // period

    def centralizer_root(self, kappa: WordLike) -> tuple[Word, int]:
        """Writes ``kappa`` as ``root^exponent`` with a root that commutes with it.

        This is :meth:`primitive_root` except on closed surfaces of genus at least 2, where the root is the
        shortest period of a cyclically Dehn-reduced conjugate of ``kappa``. That root need not be primitive.

        Args:
            kappa (WordLike): A non-trivial word.

        Returns:
            tuple[Word, int]: The root and the exponent.

        Raises:
            TrivialKappa: ``kappa`` is trivial.
        """
        if self.kind is not PresentationKind.hyperbolic:
            return self.primitive_root(kappa)
        kappa = self.coerce(kappa)
        if self.is_trivial(kappa):
            raise TrivialKappa(self.format_word(kappa))
        core_letters, conjugator = self._cyclic_dehn_reduce(kappa)
        period = smallest_period(core_letters)
        root = self.normal_form(conjugator * self._element(core_letters[:period]) * conjugator.inverse())
        return root, len(core_letters) // period

    def has_square_root(self, kappa: WordLike) -> bool:
        """Whether ``kappa`` is the square of an element.

        Raises:
            UnsupportedPresentation: The surface is closed of genus at least 2.
        """
        self._require_decidable("has_square_root")
        kappa = self.coerce(kappa)
        if self.is_trivial(kappa):
            return True
        if self.kind is PresentationKind.torus:
            return all(exponent % 2 == 0 for exponent in self.abelianize(kappa))
        return self.primitive_root(kappa)[1] % 2 == 0

    def conjugacy_canonical(self, word: WordLike) -> Word:
        """Computes a canonical representative of the conjugacy class of a word.

        Free groups use the least rotation of the cyclic reduction. In abelian groups conjugation is trivial.

        Raises:
            UnsupportedPresentation: The surface is closed of genus at least 2.
        """
        self._require_decidable("conjugacy_canonical")
        word = self.coerce(word)
        if self.kind is not PresentationKind.free:
            return self.normal_form(word)
        core_letters, _ = self._cyclic_reduce(word)
        rotation = least_rotation(core_letters, key=lambda letter: (letter[0], 0 if letter[1] > 0 else 1))
        return self._element(rotation)

    def _least(self, words: Iterable[Word]) -> Word:
        return min(words, key=self.word_key)

    def orbit_representative(self, word: WordLike, kappa: WordLike) -> Optional[Word]:
        """Computes the canonical element of the orbit ``{kappa^n word kappa^-n}``.

        The canonical element is the least orbit element by length and letter order. It is computed over a range
        of exponents that contains every shortest orbit element.

        Args:
            word (WordLike): The word.
            kappa (WordLike): The conjugating element.

        Returns:
            Optional[Word]: The canonical element, or ``None`` on closed surfaces of genus at least 2.
        """
        if self.kind is PresentationKind.hyperbolic:
            return None
        word, kappa = self.normal_form(word), self.coerce(kappa)
        if self.kind is not PresentationKind.free or kappa.is_identity:
            return word
        core_letters, conjugator = self._cyclic_reduce(kappa)
        core = self._element(core_letters)
        word_core = conjugator.inverse() * word * conjugator
        bound = len(word_core) // len(core) + 2
        return self._least(conjugator * core ** n * word_core * core ** -n * conjugator.inverse()
                           for n in range(-bound, bound + 1))

    def centralizer_representative(self, word: WordLike, kappa: WordLike) -> Optional[Word]:
        """Computes the canonical element of the orbit of a word under conjugation by the centralizer of
        ``kappa``.

        On free groups the centralizer of a non-trivial element is generated by its primitive root and the
        centralizer of the identity is the whole group.

        Returns:
            Optional[Word]: The canonical element, or ``None`` on closed surfaces of genus at least 2.
        """
        if self.kind is PresentationKind.hyperbolic:
            return None
        word, kappa = self.normal_form(word), self.coerce(kappa)
        if self.kind is not PresentationKind.free:
            return word
        if kappa.is_identity:
            return self.conjugacy_canonical(word)
        root, _ = self.primitive_root(kappa)
        return self.orbit_representative(word, root)

    def double_coset_representative(self, word: WordLike, kappa_i: WordLike, kappa_j: WordLike) -> Optional[Word]:
        """Computes the canonical element of the double coset ``<kappa_i> word <kappa_j>``.

        Returns:
            Optional[Word]: The least element by length and letter order, or ``None`` on closed surfaces of genus
            at least 2.
        """
        if self.kind is PresentationKind.hyperbolic:
            return None
        word = self.normal_form(word)
        kappa_i, kappa_j = self.coerce(kappa_i), self.coerce(kappa_j)
        if self.kind is PresentationKind.trivial:
            return word
        if self.kind is PresentationKind.torus:
            echelon = lattice_echelon([self.abelianize(kappa_i), self.abelianize(kappa_j)], self.rank)
            return self.from_vector(reduce_mod_lattice(self.abelianize(word), echelon))
        if kappa_i.is_identity and kappa_j.is_identity:
            return word
        if kappa_i.is_identity or kappa_j.is_identity:
            kappa = kappa_j if kappa_i.is_identity else kappa_i
            core_letters, conjugator = self._cyclic_reduce(kappa)
            core = self._element(core_letters)
            bound = (len(word) + 2 * len(conjugator)) // len(core) + 2
            if kappa_i.is_identity:
                return self._least(word * kappa ** n for n in range(-bound, bound + 1))
            return self._least(kappa ** n * word for n in range(-bound, bound + 1))
        letters_i, conjugator_i = self._cyclic_reduce(kappa_i)
        letters_j, conjugator_j = self._cyclic_reduce(kappa_j)
        core_i, core_j = self._element(letters_i), self._element(letters_j)
        word_core = conjugator_i.inverse() * word * conjugator_j
        bound_p = self._double_coset_bounds(len(word_core), core_i, core_j)
        bound_q = (2 * len(word_core) + bound_p * len(core_i)) // len(core_j) + 2
        return self._least(
            kappa_i ** p * word * kappa_j ** q
            for p in range(-bound_p, bound_p + 1) for q in range(-bound_q, bound_q + 1)
        )

    # homology and substitutions

    def intersection_form(self, x: WordLike, y: WordLike) -> int:
        """The algebraic intersection number of the homology classes of two loops.

        Handle pairs ``(a, b)`` pair as ``a . b = 1``. Boundary generators have zero intersection with everything.

        Args:
            x (WordLike): The first loop.
            y (WordLike): The second loop.

        Returns:
            int: The intersection number.
        """
        vector_x, vector_y = self.abelianize(x), self.abelianize(y)
        total = 0
        for handle in range(self.genus):
            a, b = 2 * handle, 2 * handle + 1
            total += vector_x[a] * vector_y[b] - vector_x[b] * vector_y[a]
        return total

    def apply_substitution(self, word: WordLike, mapping: Mapping[str, WordLike]) -> Word:
        """Applies a generator substitution to a word.

        Args:
            word (WordLike): The word.
            mapping (Mapping[str, WordLike]): Images of generators. Generators that are not mapped are fixed.

        Returns:
            Word: The normal form of the image.
        """
        images = {name: self.coerce(image) for name, image in mapping.items()}
        product = self.group.identity
        for index, sign in self._letters(self.coerce(word)):
            name = self.generators[index]
            image = images.get(name, self._element([(index, 1)]))
            product = product * (image if sign > 0 else image.inverse())
        return self.normal_form(product)

    def words_up_to(self, length: int) -> list[Word]:
        """Lists the distinct normal form words of at most the given length, shortest first.

        Args:
            length (int): The largest word length.

        Returns:
            list[Word]: The words, sorted by length and letter order.
        """
        letters = [(index, sign) for index in range(self.rank) for sign in (1, -1)]
        layer: list[list[Letter]] = [[]]
        found: dict[str, Word] = {}
        for _ in range(length + 1):
            next_layer = []
            for word_letters in layer:
                word = self.normal_form(self._element(word_letters))
                found.setdefault(self.format_word(word), word)
                next_layer.extend(
                    word_letters + [letter] for letter in letters
                    if not word_letters or word_letters[-1] != (letter[0], -letter[1])
                )
            layer = next_layer
        return sorted(found.values(), key=self.word_key)
