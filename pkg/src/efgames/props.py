"""Binary strings, string properties, and propositional formulas.

Strings are fixed-width bit vectors s_1 ... s_n.  A property is a finite
set of strings of one width, stored as a membership mask over all
2**width strings so that set algebra and memo keys are plain ints: bit
e(s) of the mask is set iff s is a member, where e(s) = sum of
s_i * 2**(i-1), i.e. s_1 is the least significant bit.

Formulas are binary and/or/not trees over variables p_1 ... p_n.  The
size measure counts literal occurrences: size(p_i) = 1, negation is
free, size(f & g) = size(f | g) = size(f) + size(g).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Union

from .errors import InputError

MAX_WIDTH = 16


@dataclass(frozen=True, slots=True)
class BitString:
    """One binary string; ``bits`` holds e(s), so bit i-1 is s_i."""

    width: int
    bits: int

    def __post_init__(self) -> None:
        if not 1 <= self.width <= MAX_WIDTH:
            raise InputError(f"string width must be 1..{MAX_WIDTH}, got {self.width}")
        if self.bits < 0 or self.bits >> self.width:
            raise InputError(f"encoding {self.bits} out of range for width {self.width}")

    @classmethod
    def parse(cls, text: str) -> "BitString":
        if not text or any(c not in "01" for c in text):
            raise InputError(f"not a nonempty binary string: {text!r}")
        bits = 0
        for i, c in enumerate(text):  # text[0] is s_1
            if c == "1":
                bits |= 1 << i
        return cls(len(text), bits)

    def bit(self, i: int) -> int:
        """Value of s_i (1-based)."""
        if not 1 <= i <= self.width:
            raise InputError(f"bit index {i} outside width {self.width}")
        return (self.bits >> (i - 1)) & 1

    def weight(self) -> int:
        return self.bits.bit_count()

    def __str__(self) -> str:
        return "".join("1" if self.bits >> i & 1 else "0" for i in range(self.width))


def _strings_mask(width: int) -> int:
    """Mask with one bit per string of the given width, all set."""
    return (1 << (1 << width)) - 1


@dataclass(frozen=True, slots=True)
class StringProperty:
    """A set of width-``width`` strings as a membership mask."""

    width: int
    mask: int

    def __post_init__(self) -> None:
        if not 1 <= self.width <= MAX_WIDTH:
            raise InputError(f"property width must be 1..{MAX_WIDTH}, got {self.width}")
        if self.mask < 0 or self.mask >> (1 << self.width):
            raise InputError(f"membership mask out of range for width {self.width}")

    @classmethod
    def from_strings(cls, width: int, strings: Iterable[Union[str, BitString]]) -> "StringProperty":
        mask = 0
        for s in strings:
            b = s if isinstance(s, BitString) else BitString.parse(s)
            if b.width != width:
                raise InputError(f"string {b} has width {b.width}, expected {width}")
            mask |= 1 << b.bits
        return cls(width, mask)

    @classmethod
    def of(cls, *strings: str) -> "StringProperty":
        """Build from literal strings, inferring the width from the first."""
        if not strings:
            raise InputError("cannot infer the width of an empty property")
        return cls.from_strings(len(strings[0]), strings)

    def strings(self) -> tuple[BitString, ...]:
        """Members in ascending encoding order."""
        return tuple(
            BitString(self.width, e)
            for e in range(1 << self.width)
            if self.mask >> e & 1
        )

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, s: BitString) -> bool:
        return s.width == self.width and bool(self.mask >> s.bits & 1)

    @property
    def is_empty(self) -> bool:
        return self.mask == 0

    def __str__(self) -> str:
        return "{" + ", ".join(str(s) for s in self.strings()) + "}"


# ---------------------------------------------------------------------------
# formulas


class PropFormula:
    """Marker base class for formula nodes."""

    __slots__ = ()

    def __and__(self, other: "PropFormula") -> "And":
        return And(self, other)

    def __or__(self, other: "PropFormula") -> "Or":
        return Or(self, other)

    def __invert__(self) -> "Not":
        return Not(self)


@dataclass(frozen=True, slots=True)
class Var(PropFormula):
    index: int  # 1-based

    def __post_init__(self) -> None:
        if not 1 <= self.index <= MAX_WIDTH:
            raise InputError(f"variable index must be 1..{MAX_WIDTH}, got {self.index}")


@dataclass(frozen=True, slots=True)
class Not(PropFormula):
    child: PropFormula


@dataclass(frozen=True, slots=True)
class And(PropFormula):
    left: PropFormula
    right: PropFormula


@dataclass(frozen=True, slots=True)
class Or(PropFormula):
    left: PropFormula
    right: PropFormula


@dataclass(frozen=True, slots=True)
class Literal:
    """Variable p_var or its negation."""

    var: int
    positive: bool

    def formula(self) -> PropFormula:
        return Var(self.var) if self.positive else Not(Var(self.var))

    def holds_on(self, s: BitString) -> bool:
        return (s.bit(self.var) == 1) == self.positive

    def __str__(self) -> str:
        return f"p{self.var}" if self.positive else f"!p{self.var}"


def size(f: PropFormula) -> int:
    """Leaf count: negation is free, binary connectives add."""
    if isinstance(f, Var):
        return 1
    if isinstance(f, Not):
        return size(f.child)
    if isinstance(f, (And, Or)):
        return size(f.left) + size(f.right)
    raise InputError(f"not a formula node: {f!r}")


def max_index(f: PropFormula) -> int:
    if isinstance(f, Var):
        return f.index
    if isinstance(f, Not):
        return max_index(f.child)
    if isinstance(f, (And, Or)):
        return max(max_index(f.left), max_index(f.right))
    raise InputError(f"not a formula node: {f!r}")


def evaluate(f: PropFormula, s: BitString) -> bool:
    if isinstance(f, Var):
        if f.index > s.width:
            raise InputError(f"variable p{f.index} exceeds string width {s.width}")
        return s.bit(f.index) == 1
    if isinstance(f, Not):
        return not evaluate(f.child, s)
    if isinstance(f, And):
        return evaluate(f.left, s) and evaluate(f.right, s)
    if isinstance(f, Or):
        return evaluate(f.left, s) or evaluate(f.right, s)
    raise InputError(f"not a formula node: {f!r}")


def to_nnf(f: PropFormula) -> PropFormula:
    """Push negations to the variables.  Preserves size and meaning."""
    return _nnf(f, positive=True)


def _nnf(f: PropFormula, positive: bool) -> PropFormula:
    if isinstance(f, Var):
        return f if positive else Not(f)
    if isinstance(f, Not):
        return _nnf(f.child, not positive)
    if isinstance(f, And):
        if positive:
            return And(_nnf(f.left, True), _nnf(f.right, True))
        return Or(_nnf(f.left, False), _nnf(f.right, False))
    if isinstance(f, Or):
        if positive:
            return Or(_nnf(f.left, True), _nnf(f.right, True))
        return And(_nnf(f.left, False), _nnf(f.right, False))
    raise InputError(f"not a formula node: {f!r}")


def is_nnf(f: PropFormula) -> bool:
    if isinstance(f, Var):
        return True
    if isinstance(f, Not):
        return isinstance(f.child, Var)
    if isinstance(f, (And, Or)):
        return is_nnf(f.left) and is_nnf(f.right)
    raise InputError(f"not a formula node: {f!r}")


@lru_cache(maxsize=None)
def var_mask(width: int, i: int) -> int:
    """Membership mask of the strings with s_i = 1."""
    if not 1 <= i <= width:
        raise InputError(f"variable p{i} exceeds width {width}")
    mask = 0
    for e in range(1 << width):
        if e >> (i - 1) & 1:
            mask |= 1 << e
    return mask


def truth_table(f: PropFormula, width: int) -> int:
    """Membership mask of the strings of the given width satisfying f."""
    full = _strings_mask(width)
    if isinstance(f, Var):
        return var_mask(width, f.index)
    if isinstance(f, Not):
        return full ^ truth_table(f.child, width)
    if isinstance(f, And):
        return truth_table(f.left, width) & truth_table(f.right, width)
    if isinstance(f, Or):
        return truth_table(f.left, width) | truth_table(f.right, width)
    raise InputError(f"not a formula node: {f!r}")


def separates(f: PropFormula, left: StringProperty, right: StringProperty) -> bool:
    """True iff f holds on every string of ``left`` and none of ``right``."""
    if left.width != right.width:
        raise InputError(f"width mismatch: {left.width} vs {right.width}")
    tt = truth_table(f, left.width)
    return tt & left.mask == left.mask and tt & right.mask == 0


# ---------------------------------------------------------------------------
# text format: p1, !f, (f & g), (f | g)

_TOKEN = re.compile(r"\s*(p\d+|[!&|()])")


def format_formula(f: PropFormula) -> str:
    if isinstance(f, Var):
        return f"p{f.index}"
    if isinstance(f, Not):
        return f"!{format_formula(f.child)}"
    if isinstance(f, And):
        return f"({format_formula(f.left)} & {format_formula(f.right)})"
    if isinstance(f, Or):
        return f"({format_formula(f.left)} | {format_formula(f.right)})"
    raise InputError(f"not a formula node: {f!r}")


def parse_formula(text: str) -> PropFormula:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip():
                raise InputError(f"unexpected character at {text[pos:].strip()[:10]!r}")
            break
        tokens.append(m.group(1))
        pos = m.end()
    tokens.reverse()  # pop() from the end

    def take() -> str:
        if not tokens:
            raise InputError("unexpected end of formula")
        return tokens.pop()

    def formula() -> PropFormula:
        tok = take()
        if tok.startswith("p"):
            return Var(int(tok[1:]))
        if tok == "!":
            return Not(formula())
        if tok == "(":
            left = formula()
            op = take()
            if op not in "&|":
                raise InputError(f"expected '&' or '|', got {op!r}")
            right = formula()
            close = take()
            if close != ")":
                raise InputError(f"expected ')', got {close!r}")
            return And(left, right) if op == "&" else Or(left, right)
        raise InputError(f"unexpected token {tok!r}")

    f = formula()
    if tokens:
        raise InputError(f"trailing input after formula: {tokens[-1]!r}")
    return f


# ---------------------------------------------------------------------------
# JSON shape for properties: {"width": int, "strings": ["010", ...]}


def property_to_json(prop: StringProperty) -> dict:
    return {"width": prop.width, "strings": [str(s) for s in prop.strings()]}


def property_from_json(obj: object) -> StringProperty:
    if not isinstance(obj, dict):
        raise InputError("property must be a JSON object")
    width = obj.get("width")
    strings = obj.get("strings")
    if not isinstance(width, int) or isinstance(width, bool):
        raise InputError("property 'width' must be an integer")
    if not isinstance(strings, list) or not all(isinstance(s, str) for s in strings):
        raise InputError("property 'strings' must be a list of binary strings")
    return StringProperty.from_strings(width, strings)
