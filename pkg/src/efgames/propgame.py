"""The separation game on string properties.

A position is (rank, S, R).  The prover (player I) wins immediately at
any position where some literal holds on all of S and fails on all of R;
the refuter (player II) wins when the rank reaches 1 without such a
literal.  At rank w >= 2 player I splits the rank as u + v = w together
with one side of the position: a left split presents S as a union
C | D and player II chooses between (u, C, R) and (v, D, R); a right
split does the same to R.

Two search modes share one solver:

* EXACT plays the rules verbatim.  The split side may be covered by any
  ordered pair of blocks, overlapping or empty, which makes 3**k moves
  per side of k strings, so exact mode is capped to small positions.
* REDUCED searches only two-block set partitions (disjoint, nonempty).
  Separating formulas survive shrinking either side of a position, so
  dropping covers that duplicate or drop strings never changes the
  winner; the test suite checks that equivalence against exact mode
  rather than assuming it.

Reduced mode answers through a single memoized table of minimal
separating sizes, so winner queries are threshold lookups and minsize
and synthesis come from the same table.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Optional, Union

from .errors import ContractError, InputError, ResourceCapError
from .props import (
    And,
    Literal,
    Not,
    Or,
    PropFormula,
    StringProperty,
    Var,
    _strings_mask,
    is_nnf,
    separates,
    size,
    truth_table,
    var_mask,
)

DEFAULT_CAP_EXACT_STRINGS = 8
DEFAULT_CAP_STRINGS = 16
DEFAULT_CAP_WIDTH = 4


class Player(enum.Enum):
    I = "I"
    II = "II"


class GameMode(enum.Enum):
    EXACT = "exact"
    REDUCED = "reduced"


@dataclass(frozen=True, slots=True)
class PropPosition:
    rank: int
    left: StringProperty
    right: StringProperty

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise InputError(f"rank must be >= 1, got {self.rank}")
        if self.left.width != self.right.width:
            raise InputError(
                f"width mismatch: {self.left.width} vs {self.right.width}"
            )

    @property
    def width(self) -> int:
        return self.left.width


@dataclass(frozen=True, slots=True)
class WinClaim:
    """Player I points at a literal separating the current position."""

    literal: Literal


@dataclass(frozen=True, slots=True)
class LeftSplit:
    """Cover S = c | d and split the rank as u + v."""

    u: int
    v: int
    c: StringProperty
    d: StringProperty


@dataclass(frozen=True, slots=True)
class RightSplit:
    """Cover R = c | d and split the rank as u + v."""

    u: int
    v: int
    c: StringProperty
    d: StringProperty


PropMove = Union[WinClaim, LeftSplit, RightSplit]


def literal_win(left: StringProperty, right: StringProperty) -> Optional[Literal]:
    """The first literal separating (left, right), scanning variables in
    ascending order with the positive literal before the negative one."""
    if left.width != right.width:
        raise InputError(f"width mismatch: {left.width} vs {right.width}")
    width = left.width
    full = _strings_mask(width)
    for i in range(1, width + 1):
        ones = var_mask(width, i)
        zeros = full ^ ones
        if left.mask & zeros == 0 and right.mask & ones == 0:
            return Literal(i, True)
        if left.mask & ones == 0 and right.mask & zeros == 0:
            return Literal(i, False)
    return None


def successors(pos: PropPosition, move: PropMove) -> tuple[PropPosition, ...]:
    """Player II's options after a legal move; raises ContractError on an
    illegal one.  A WinClaim ends the game, so it has no successors."""
    if isinstance(move, WinClaim):
        f = move.literal.formula()
        if not separates(f, pos.left, pos.right):
            raise ContractError(f"literal {move.literal} does not separate the position")
        return ()
    if not (isinstance(move, (LeftSplit, RightSplit))):
        raise ContractError(f"not a move: {move!r}")
    if pos.rank < 2:
        raise ContractError("splits require rank >= 2")
    if min(move.u, move.v) < 1 or move.u + move.v != pos.rank:
        raise ContractError(f"rank split {move.u}+{move.v} != {pos.rank}")
    side = pos.left if isinstance(move, LeftSplit) else pos.right
    if move.c.width != side.width or move.d.width != side.width:
        raise ContractError("split blocks have the wrong width")
    if move.c.mask | move.d.mask != side.mask:
        raise ContractError("split blocks do not cover the split side")
    if isinstance(move, LeftSplit):
        return (
            PropPosition(move.u, move.c, pos.right),
            PropPosition(move.v, move.d, pos.right),
        )
    return (
        PropPosition(move.u, pos.left, move.c),
        PropPosition(move.v, pos.left, move.d),
    )


def _proper_submasks(m: int) -> Iterator[int]:
    """Nonempty proper submasks of m, ascending."""
    sub = 0
    while True:
        sub = (sub - m) & m  # next submask in ascending order
        if sub == 0:
            return
        if sub != m:
            yield sub


def _submasks(m: int) -> Iterator[int]:
    """All submasks of m including 0 and m, descending."""
    x = m
    while True:
        yield x
        if x == 0:
            return
        x = (x - 1) & m


class PropGame:
    """Solver for one string width with shared memo tables."""

    def __init__(
        self,
        width: int,
        *,
        cap_exact_strings: int = DEFAULT_CAP_EXACT_STRINGS,
        cap_strings: int = DEFAULT_CAP_STRINGS,
        cap_width: int = DEFAULT_CAP_WIDTH,
    ) -> None:
        if not 1 <= width <= 16:
            raise InputError(f"width must be 1..16, got {width}")
        self.width = width
        self.cap_exact_strings = cap_exact_strings
        self.cap_strings = cap_strings
        self.cap_width = cap_width
        self._value: dict[tuple[int, int], int] = {}
        self._exact: dict[tuple[int, int, int], bool] = {}
        self._full = _strings_mask(width)

    # -- literals over raw masks ------------------------------------------

    def _literal(self, smask: int, rmask: int) -> Optional[Literal]:
        full = self._full
        for i in range(1, self.width + 1):
            ones = var_mask(self.width, i)
            zeros = full ^ ones
            if smask & zeros == 0 and rmask & ones == 0:
                return Literal(i, True)
            if smask & ones == 0 and rmask & zeros == 0:
                return Literal(i, False)
        return None

    # -- minimal separating size over disjoint masks -----------------------

    def value(self, smask: int, rmask: int) -> int:
        """Minimal size of a formula true on all of smask, false on all of
        rmask.  Requires disjoint masks; an empty side costs at most 2
        (a contradiction or a tautology built from one variable)."""
        key = (smask, rmask)
        got = self._value.get(key)
        if got is not None:
            return got
        if smask & rmask:
            raise ContractError("value() requires disjoint sides")
        if self._literal(smask, rmask) is not None:
            best = 1
        elif smask == 0 or rmask == 0:
            best = 2
        else:
            best = 1 << 60
            # two nonempty disjoint blocks; pinning the lowest string into c
            # makes each unordered partition appear exactly once
            low = smask & -smask
            rest = smask ^ low
            for x in _submasks(rest):
                if x == rest:
                    continue  # d would be empty
                c = low | x
                cand = self.value(c, rmask) + self.value(smask ^ c, rmask)
                if cand < best:
                    best = cand
            low = rmask & -rmask
            rest = rmask ^ low
            for x in _submasks(rest):
                if x == rest:
                    continue
                c = low | x
                cand = self.value(smask, c) + self.value(smask, rmask ^ c)
                if cand < best:
                    best = cand
        self._value[key] = best
        return best

    # -- public API ---------------------------------------------------------

    def _check_pair(self, left: StringProperty, right: StringProperty) -> None:
        if left.width != self.width or right.width != self.width:
            raise InputError(
                f"properties must have width {self.width}, got {left.width}/{right.width}"
            )

    def _check_reduced_caps(self, left: StringProperty, right: StringProperty) -> None:
        if self.width > self.cap_width:
            raise ResourceCapError(
                f"width {self.width} exceeds the size-table cap {self.cap_width} "
                f"(--cap-width)"
            )
        count = len(left) + len(right)
        if count > self.cap_strings:
            raise ResourceCapError(
                f"|S| + |R| = {count} exceeds the size-table cap {self.cap_strings} "
                f"(--cap-strings)"
            )

    def minsize(self, left: StringProperty, right: StringProperty) -> Optional[int]:
        """Minimal separating formula size, or None when the sides overlap
        (no formula can be true and false on a shared string)."""
        self._check_pair(left, right)
        if left.mask & right.mask:
            return None
        self._check_reduced_caps(left, right)
        return self.value(left.mask, right.mask)

    def winner(self, pos: PropPosition, mode: GameMode = GameMode.REDUCED) -> Player:
        self._check_pair(pos.left, pos.right)
        if mode is GameMode.EXACT:
            count = len(pos.left) + len(pos.right)
            if count > self.cap_exact_strings:
                raise ResourceCapError(
                    f"|S| + |R| = {count} exceeds the exact-mode cap "
                    f"{self.cap_exact_strings} (--cap-exact-strings)"
                )
            return Player.I if self._exact_wins(pos.rank, pos.left.mask, pos.right.mask) else Player.II
        if pos.left.mask & pos.right.mask:
            return Player.II
        self._check_reduced_caps(pos.left, pos.right)
        return Player.I if self.value(pos.left.mask, pos.right.mask) <= pos.rank else Player.II

    # -- exact mode ----------------------------------------------------------

    def _exact_wins(self, w: int, smask: int, rmask: int) -> bool:
        key = (w, smask, rmask)
        got = self._exact.get(key)
        if got is not None:
            return got
        result = self._exact_search(w, smask, rmask)
        self._exact[key] = result
        return result

    def _exact_search(self, w: int, smask: int, rmask: int) -> bool:
        if self._literal(smask, rmask) is not None:
            return True
        if w == 1:
            return False
        # ordered covers c | d = side, blocks may repeat strings or be empty
        for u in range(1, w):
            v = w - u
            for c in _submasks(smask):
                rest = smask ^ c
                if not self._exact_wins(u, c, rmask):
                    continue
                for x in _submasks(c):
                    if self._exact_wins(v, rest | x, rmask):
                        return True
            for c in _submasks(rmask):
                rest = rmask ^ c
                if not self._exact_wins(u, smask, c):
                    continue
                for x in _submasks(c):
                    if self._exact_wins(v, smask, rest | x):
                        return True
        return False

    # -- synthesis -------------------------------------------------------------

    def synthesize(
        self, left: StringProperty, right: StringProperty, budget: int
    ) -> Optional[PropFormula]:
        """A separating formula of size <= budget, or None when none exists.

        Deterministic choices: a winning literal beats any split, left
        splits beat right splits, then the smallest left-block size u and
        the smallest left-block mask win ties."""
        self._check_pair(left, right)
        if budget < 1:
            raise InputError(f"budget must be >= 1, got {budget}")
        if left.mask & right.mask:
            return None
        self._check_reduced_caps(left, right)
        if self.value(left.mask, right.mask) > budget:
            return None
        return self._build(left.mask, right.mask)

    def _build(self, smask: int, rmask: int) -> PropFormula:
        lit = self._literal(smask, rmask)
        if lit is not None:
            return lit.formula()
        if smask == 0:
            return And(Var(1), Not(Var(1)))
        if rmask == 0:
            return Or(Var(1), Not(Var(1)))
        target = self.value(smask, rmask)
        best: Optional[tuple[int, int]] = None  # (u, cmask)
        for c in _proper_submasks(smask):
            d = smask ^ c
            u = self.value(c, rmask)
            if u + self.value(d, rmask) == target:
                if best is None or (u, c) < best:
                    best = (u, c)
        if best is not None:
            _, c = best
            return Or(self._build(c, rmask), self._build(smask ^ c, rmask))
        for c in _proper_submasks(rmask):
            d = rmask ^ c
            u = self.value(smask, c)
            if u + self.value(smask, d) == target:
                if best is None or (u, c) < best:
                    best = (u, c)
        if best is None:
            raise ContractError("size table admits no optimal split")  # unreachable
        _, c = best
        return And(self._build(smask, c), self._build(smask, rmask ^ c))


def formula_strategy_move(f: PropFormula, pos: PropPosition) -> PropMove:
    """Player I's move at ``pos`` read off a separating formula in negation
    normal form: a literal claims the win, a disjunction splits S by which
    disjunct each string satisfies, a conjunction splits R by which
    conjunct each string falsifies."""
    if not is_nnf(f):
        raise ContractError("strategy formula must be in negation normal form")
    if not separates(f, pos.left, pos.right):
        raise ContractError("strategy formula does not separate the position")
    if size(f) > pos.rank:
        raise ContractError(
            f"strategy formula size {size(f)} exceeds position rank {pos.rank}"
        )
    width = pos.width
    if isinstance(f, Var):
        return WinClaim(Literal(f.index, True))
    if isinstance(f, Not):
        return WinClaim(Literal(f.child.index, False))
    u = size(f.left)
    v = pos.rank - u
    if isinstance(f, Or):
        c = StringProperty(width, truth_table(f.left, width) & pos.left.mask)
        d = StringProperty(width, truth_table(f.right, width) & pos.left.mask)
        return LeftSplit(u, v, c, d)
    full = _strings_mask(width)
    c = StringProperty(width, (full ^ truth_table(f.left, width)) & pos.right.mask)
    d = StringProperty(width, (full ^ truth_table(f.right, width)) & pos.right.mask)
    return RightSplit(u, v, c, d)
