"""
Bundled example diagrams and a generator of random diagrams.
"""
from __future__ import annotations
import random
from importlib import resources
from itertools import product
from typing import Iterator, Optional

from ..diagram import Component, Crossing, Pass, TangleDiagram, parse_diagram
from ..enums import *
from ..group import SurfacePresentation

FIXTURE_SUFFIX = ".tdg"


def fixture_names() -> list[str]:
    """The names of the bundled fixtures, sorted."""
    return sorted(
        entry.name[:-len(FIXTURE_SUFFIX)] for entry in resources.files(__package__).iterdir()
        if entry.name.endswith(FIXTURE_SUFFIX)
    )


def fixture_text(name: str) -> str:
    """The ``.tdg`` text of a bundled fixture.

    Raises:
        KeyError: No fixture has the name.
    """
    if name not in fixture_names():
        raise KeyError(name)
    return resources.files(__package__).joinpath(name + FIXTURE_SUFFIX).read_text(encoding="utf-8")


def load_fixture(name: str) -> TangleDiagram:
    """Parses a bundled fixture.

    Args:
        name (str): The fixture name, e.g. ``annulus`` or ``sphere-trefoil``.

    Returns:
        TangleDiagram: The diagram.

    Raises:
        KeyError: No fixture has the name.
    """
    return parse_diagram(fixture_text(name))


def random_diagram(surface: SurfacePresentation, crossings: int, rng: random.Random, flat: bool = False,
                   components: int = 1, long: bool = False, max_word_length: int = 1,
                   words: Optional[list] = None) -> TangleDiagram:
    """Builds a diagram from a random Gauss sequence with random holonomy words.

    The rotation system is not checked for planarity, as with any diagram read from text.

    Args:
        surface (SurfacePresentation): The surface.
        crossings (int): The number of crossings.
        rng (random.Random): The random number generator.
        flat (bool): Build a flat diagram.
        components (int): The number of components. Some may end up without crossings.
        long (bool): Make the first component long. The surface needs a boundary.
        max_word_length (int): The longest holonomy word of a segment.
        words (Optional[list]): The words to draw segment words from, instead of all words up to
            ``max_word_length``.

    Returns:
        TangleDiagram: The diagram.
    """
    if components < 1:
        raise ValueError("a diagram needs at least one component")
    slots = [f"x{index}" for index in range(1, crossings + 1) for _ in range(2)]
    rng.shuffle(slots)
    cuts = [0] + sorted(rng.choices(range(len(slots) + 1), k=components - 1)) + [len(slots)]
    words = words if words is not None else surface.words_up_to(max_word_length)
    seen: set[str] = set()
    first_roles: dict[str, Role] = {}
    built = []
    for index in range(components):
        passes = []
        for crossing_id in slots[cuts[index]:cuts[index + 1]]:
            if flat:
                role = Role.second if crossing_id in seen else Role.first
            elif crossing_id in seen:
                role = first_roles[crossing_id].opposite
            else:
                role = first_roles.setdefault(crossing_id, rng.choice((Role.over, Role.under)))
            seen.add(crossing_id)
            passes.append(Pass(crossing_id, role))
        segment_words = tuple(surface.coerce(rng.choice(words)) for _ in range(len(passes) + 1))
        kind = ComponentKind.long if long and index == 0 else ComponentKind.closed
        built.append(Component(f"K{index + 1}", kind, segment_words, tuple(passes)))
    chiralities = [Crossing(crossing_id, Chirality.from_sign(rng.choice((1, -1)))) for crossing_id in sorted(seen)]
    return TangleDiagram(surface, tuple(built), tuple(chiralities), flat)


def flat_gauss_diagrams(surface: SurfacePresentation, crossings: int) -> Iterator[TangleDiagram]:
    """Enumerates every one-component closed flat diagram with the given number of crossings and trivial
    holonomy words, once per pairing of pass slots and choice of chiralities.

    Crossings are named ``x1`` to ``xn`` in order of first visit.
    """
    def pairings(slots: list[int]):
        if not slots:
            yield []
            return
        head = slots[0]
        for partner in slots[1:]:
            rest = [slot for slot in slots[1:] if slot != partner]
            for tail in pairings(rest):
                yield [(head, partner)] + tail

    for pairing in pairings(list(range(2 * crossings))):
        owner = {}
        for index, (first, second) in enumerate(pairing, 1):
            owner[first] = owner[second] = f"x{index}"
        seen: set[str] = set()
        passes = []
        for slot in range(2 * crossings):
            crossing_id = owner[slot]
            passes.append(Pass(crossing_id, Role.second if crossing_id in seen else Role.first))
            seen.add(crossing_id)
        words = tuple(surface.identity for _ in range(len(passes) + 1))
        for signs in product((1, -1), repeat=crossings):
            chiralities = tuple(
                Crossing(f"x{index}", Chirality.from_sign(sign)) for index, sign in enumerate(signs, 1)
            )
            yield TangleDiagram(surface, (Component("K1", ComponentKind.closed, words, tuple(passes)),),
                                chiralities, True)
