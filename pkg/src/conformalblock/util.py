"""Utility functions for the conformalblock package."""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from collections.abc import Sequence


def parse_rational(text: str) -> Fraction:
    """Parse an integer or a `p/q` rational."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exception:
        msg = f"Not a rational number: {text!r}"
        raise ValueError(msg) from exception


def inverse_factorial(n: int) -> Fraction:
    """Return 1/n!."""
    return Fraction(1, factorial(n))


def sort_with_sign(items: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...], int]:
    """Sort a tuple, returning the sorted tuple, the source positions and the sign.

    `order[p]` is the position in `items` of the entry now at position `p`.
    """
    order = tuple(sorted(range(len(items)), key=lambda p: (items[p], p)))
    sign = 1
    seen = [False] * len(order)
    for start in range(len(order)):
        if seen[start]:
            continue
        length = 0
        position = start
        while not seen[position]:
            seen[position] = True
            position = order[position]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return tuple(items[p] for p in order), order, sign
