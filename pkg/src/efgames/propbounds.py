"""Density certificates and the parity benchmark family.

The boundary between two disjoint properties is the set of Hamming-edge
pairs (one string from each side differing in exactly one bit).  Its
density on either side, kept as exact rationals, certifies a lower
bound on separating formula size: no formula smaller than
ceil(left density * right density) can tell the sides apart.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

from .errors import InputError
from .props import And, Not, Or, PropFormula, StringProperty, Var


@dataclass(frozen=True, slots=True)
class DensityPair:
    """Boundary-edge densities of a disjoint pair: edges per left string
    and edges per right string."""

    left: Fraction
    right: Fraction
    edge_count: int


def density(left: StringProperty, right: StringProperty) -> DensityPair:
    """Exact boundary densities; requires disjoint nonempty sides."""
    if left.width != right.width:
        raise InputError(f"width mismatch: {left.width} vs {right.width}")
    if left.mask & right.mask:
        raise InputError("density requires disjoint properties")
    if left.is_empty or right.is_empty:
        raise InputError("density requires nonempty properties")
    width = left.width
    edges = 0
    for e in range(1 << width):
        if not left.mask >> e & 1:
            continue
        for i in range(width):
            if right.mask >> (e ^ (1 << i)) & 1:
                edges += 1
    return DensityPair(
        Fraction(edges, len(left)), Fraction(edges, len(right)), edges
    )


def density_lower_bound(left: StringProperty, right: StringProperty) -> int:
    """ceil(left density * right density), a size every separating
    formula must reach."""
    pair = density(left, right)
    return math.ceil(pair.left * pair.right)


# ---------------------------------------------------------------------------
# parity


def parity_property(n: int) -> tuple[StringProperty, StringProperty]:
    """(even-weight strings, odd-weight strings) of width n."""
    if not 1 <= n <= 16:
        raise InputError(f"parity width must be 1..16, got {n}")
    even = 0
    odd = 0
    for e in range(1 << n):
        if e.bit_count() % 2 == 0:
            even |= 1 << e
        else:
            odd |= 1 << e
    return StringProperty(n, even), StringProperty(n, odd)


def _fold_and(parts: list[PropFormula]) -> PropFormula:
    return reduce(And, parts)


def _fold_or(parts: list[PropFormula]) -> PropFormula:
    return reduce(Or, parts)


def parity_dnf(n: int) -> PropFormula:
    """Disjunction over the even-weight strings of the conjunction of
    literals pinning every bit; size n * 2**(n-1)."""
    if not 1 <= n <= 10:
        raise InputError(f"parity width must be 1..10, got {n}")
    terms = []
    for e in range(1 << n):
        if e.bit_count() % 2:
            continue
        lits: list[PropFormula] = [
            Var(i) if e >> (i - 1) & 1 else Not(Var(i)) for i in range(1, n + 1)
        ]
        terms.append(_fold_and(lits))
    return _fold_or(terms)


def parity_balanced(n: int) -> PropFormula:
    """Balanced divide-and-conquer parity: even parity of bits i..j is an
    equivalence of the parities of the two halves.  Size n**2 when n is a
    power of two and at most (n+1)**2 in general."""
    if not 1 <= n <= 10:
        raise InputError(f"parity width must be 1..10, got {n}")

    def even(i: int, j: int) -> PropFormula:
        if i == j:
            return Not(Var(i))
        k = (i + j) // 2
        a = even(i, k)
        b = even(k + 1, j)
        return Or(And(a, b), And(Not(a), Not(b)))

    return even(1, n)
