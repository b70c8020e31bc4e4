import re
from typing import Callable, Iterable, Optional, Sequence, TypeVar

try:
    from sympy.core.intfunc import igcdex
except ImportError:
    from sympy import igcdex

T = TypeVar("T")

Letter = tuple[int, int]
"""A letter of a word: the index of a generator and an exponent sign of ``1`` or ``-1``."""


def invert_letter(letter: str) -> str:
    """Inverts a single letter of the textual word syntax.

    e.g. Converts ``a`` to ``A`` and ``A`` to ``a``.

    Args:
        letter (str): A lowercase generator or an uppercase inverse generator.

    Returns:
        str: The inverse letter.
    """
    return letter.upper() if letter.islower() else letter.lower()


def split_letters(text: str) -> list[tuple[str, int]]:
    """Splits the textual form of a word into generator names and exponent signs.

    Whitespace is ignored, ``1`` and the empty string denote the identity and uppercase letters are inverses.

    Args:
        text (str): The word, e.g. ``abAB`` or ``t t``.

    Returns:
        list[tuple[str, int]]: ``(generator, sign)`` pairs in reading order.

    Raises:
        ValueError: The text contains a character that is not an ASCII letter.
    """
    compact = "".join(text.split())
    if compact in ("", "1"):
        return []
    letters = []
    for char in compact:
        if not (char.isascii() and char.isalpha()):
            raise ValueError(char)
        letters.append((char.lower(), 1 if char.islower() else -1))
    return letters


def join_letters(letters: Iterable[tuple[str, int]]) -> str:
    """Builds the textual form of a word from ``(generator, sign)`` pairs.

    Args:
        letters (Iterable[tuple[str, int]]): The letters in reading order.

    Returns:
        str: The word, or ``1`` for the identity.
    """
    text = "".join(name if sign > 0 else name.upper() for name, sign in letters)
    return text or "1"


def free_reduce_letters(letters: Iterable[Letter]) -> list[Letter]:
    """Cancels adjacent inverse letters until none are left.

    Args:
        letters (Iterable[Letter]): The letters of a word.

    Returns:
        list[Letter]: The freely reduced letters.
    """
    stack: list[Letter] = []
    for letter in letters:
        if stack and stack[-1][0] == letter[0] and stack[-1][1] == -letter[1]:
            stack.pop()
        else:
            stack.append(letter)
    return stack


def inverse_letters(letters: Sequence[Letter]) -> list[Letter]:
    """Returns the letters of the inverse word."""
    return [(index, -sign) for index, sign in reversed(letters)]


def rotations(items: Sequence[T]) -> list[tuple[T, ...]]:
    """Lists every cyclic rotation of a sequence, starting with the sequence itself."""
    return [tuple(items[shift:]) + tuple(items[:shift]) for shift in range(len(items))] or [()]


def least_rotation(items: Sequence[T], key: Optional[Callable[[T], object]] = None) -> tuple[T, ...]:
    """Finds the lexicographically least cyclic rotation of a sequence.

    Args:
        items (Sequence[T]): The cyclic sequence.
        key (Optional[Callable[[T], object]]): Sort key applied to every item.

    Returns:
        tuple[T, ...]: The least rotation.
    """
    key = key or (lambda item: item)
    return min(rotations(items), key=lambda rotation: [key(item) for item in rotation])


def smallest_period(items: Sequence[T]) -> int:
    """Finds the length of the shortest prefix whose powers make up the whole sequence.

    Args:
        items (Sequence[T]): A non-empty sequence.

    Returns:
        int: The smallest period, a divisor of the length.
    """
    length = len(items)
    for period in range(1, length + 1):
        if length % period == 0 and all(items[i] == items[i % period] for i in range(length)):
            return period
    return length


def lattice_echelon(vectors: Iterable[Sequence[int]], dimension: int) -> list[list[int]]:
    """Brings integer vectors into row echelon form over the integers.

    The rows span the same lattice as the input. Every pivot is positive and each row is zero left of its pivot.

    Args:
        vectors (Iterable[Sequence[int]]): Generators of a sublattice of ``Z^dimension``.
        dimension (int): The ambient dimension.

    Returns:
        list[list[int]]: The non-zero echelon rows.
    """
    rows = [list(vector) for vector in vectors if any(vector)]
    echelon: list[list[int]] = []
    for column in range(dimension):
        candidates = [row for row in rows if row[column]]
        rows = [row for row in rows if not row[column]]
        if not candidates:
            continue
        pivot = candidates.pop()
        for other in candidates:
            s, t, g = igcdex(pivot[column], other[column])
            a, b = pivot[column] // g, other[column] // g
            pivot, remainder = (
                [s * p + t * o for p, o in zip(pivot, other)],
                [b * p - a * o for p, o in zip(pivot, other)],
            )
            if any(remainder):
                rows.append(remainder)
        if pivot[column] < 0:
            pivot = [-entry for entry in pivot]
        echelon.append(pivot)
    return echelon


def reduce_mod_lattice(vector: Sequence[int], echelon: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Reduces a vector to the canonical representative of its coset modulo a lattice.

    Args:
        vector (Sequence[int]): The vector to reduce.
        echelon (Sequence[Sequence[int]]): The lattice in the form returned by :func:`lattice_echelon`.

    Returns:
        tuple[int, ...]: The representative, with every pivot coordinate in ``[0, pivot)``.
    """
    reduced = list(vector)
    for row in echelon:
        column = next(index for index, entry in enumerate(row) if entry)
        quotient = reduced[column] // row[column]
        if quotient:
            reduced = [entry - quotient * pivot_entry for entry, pivot_entry in zip(reduced, row)]
    return tuple(reduced)


def format_vector(vector: Sequence[int]) -> str:
    """Formats an integer vector as ``(a,b,...)``."""
    return "(" + ",".join(str(entry) for entry in vector) + ")"


def parse_sign(text: str) -> int:
    """Parses a crossing sign.

    Args:
        text (str): ``+``, ``-``, ``+1`` or ``-1``.

    Returns:
        int: ``1`` or ``-1``.

    Raises:
        ValueError: The text is not a sign.
    """
    if text in ("+", "+1", "1"):
        return 1
    if text in ("-", "-1"):
        return -1
    raise ValueError(f"Invalid sign: {text}")


def format_sign(value: int) -> str:
    """Formats ``1`` as ``+`` and ``-1`` as ``-``."""
    return "+" if value > 0 else "-"


def format_signed(value: int) -> str:
    """Formats an integer with an explicit sign, e.g. ``+1`` or ``-2``."""
    return f"{value:+d}"


def natural_key(text: str) -> list:
    """A sort key that orders embedded integers numerically, so ``x2`` sorts before ``x10``.

    Args:
        text (str): The string to sort.

    Returns:
        list: The sort key.
    """
    return [(0, int(part), "") if part.lstrip("-").isdigit() else (1, 0, part)
            for part in re.split(r"(-?\d+)", text) if part]
