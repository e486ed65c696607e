"""Independent brute-force baselines the game solvers are checked against.

The propositional oracle tabulates the minimal formula size of every
Boolean function of up to 3 variables by layered dynamic programming
over truth tables: literals cost 1, and a function first reachable as a
conjunction or disjunction of two minimal pieces of total size m costs
m.  Replacing any subformula of a minimal formula by a minimal formula
for the same function never grows it, so the layers are exhaustive.

The first-order oracle enumerates negation normal form formulas by
size, interning each formula's satisfaction bitmap across all (model,
assignment) pairs so only the first (hence smallest) formula per
meaning survives.  Bitmaps compose pointwise, which keeps the pruning
sound; the dedup key also carries the free-variable set, because a
formula with a vacuous free variable is not interchangeable with a
closed formula of the same bitmap once legality (free variables inside
the class domain) matters.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .errors import InputError, ResourceCapError
from .fo import (
    EqAtom,
    Exists,
    FoAnd,
    FoFormula,
    FoNot,
    FoOr,
    Forall,
    Model,
    RelAtom,
    StructureClass,
)
from .fogame import FoMode
from .props import StringProperty, var_mask

ORACLE_MAX_WIDTH = 3


@dataclass(frozen=True, slots=True)
class TruthTable:
    """A Boolean function of ``width`` variables: bit e(s) of ``bits`` is
    the value on the string s."""

    width: int
    bits: int

    def __post_init__(self) -> None:
        if not 1 <= self.width <= ORACLE_MAX_WIDTH:
            raise InputError(
                f"oracle width must be 1..{ORACLE_MAX_WIDTH}, got {self.width}"
            )
        if self.bits < 0 or self.bits >> (1 << self.width):
            raise InputError(f"truth table out of range for width {self.width}")


def _check_oracle_width(n: int) -> None:
    if n < 1:
        raise InputError(f"width must be >= 1, got {n}")
    if n > ORACLE_MAX_WIDTH:
        raise ResourceCapError(
            f"the truth-table oracle enumerates all functions of up to "
            f"{ORACLE_MAX_WIDTH} variables; width {n} is out of reach"
        )


@lru_cache(maxsize=None)
def _size_map(n: int) -> tuple[int, ...]:
    """Minimal formula size of every width-n function, indexed by table."""
    nfun = 1 << (1 << n)
    full = nfun - 1
    sizes = [0] * nfun  # 0 marks "not reached yet"; constants cost 2
    layers: list[list[int]] = []
    first = []
    for i in range(1, n + 1):
        ones = var_mask(n, i)
        for t in (ones, full ^ ones):
            if sizes[t] == 0:
                sizes[t] = 1
                first.append(t)
    layers.append(first)
    reached = len(first)
    m = 1
    while reached < nfun:
        m += 1
        layer = []
        for u in range(1, m // 2 + 1):
            for f in layers[u - 1]:
                for g in layers[m - u - 1]:
                    for h in (f & g, f | g):
                        if sizes[h] == 0:
                            sizes[h] = m
                            layer.append(h)
                            reached += 1
        layers.append(layer)
    return tuple(sizes)


def min_size_table(n: int) -> dict[TruthTable, int]:
    """Minimal separating-formula size of every function of n variables."""
    _check_oracle_width(n)
    return {TruthTable(n, t): s for t, s in enumerate(_size_map(n))}


def oracle_minsize(left: StringProperty, right: StringProperty) -> Optional[int]:
    """Minimal size over all functions that are true on ``left`` and false
    on ``right`` (don't-cares free); None when the sides overlap."""
    if left.width != right.width:
        raise InputError(f"width mismatch: {left.width} vs {right.width}")
    _check_oracle_width(left.width)
    if left.mask & right.mask:
        return None
    sizes = _size_map(left.width)
    nfun = 1 << (1 << left.width)
    free = (nfun - 1) ^ left.mask ^ right.mask
    best = None
    x = free
    while True:
        s = sizes[left.mask | x]
        if best is None or s < best:
            best = s
        if x == 0:
            return best
        x = (x - 1) & free


def count_functions_up_to(m: int, n: int) -> int:
    """How many width-n functions have minimal size <= m."""
    _check_oracle_width(n)
    if m < 0:
        raise InputError(f"size bound must be >= 0, got {m}")
    sizes = _size_map(n)
    return sum(1 for s in sizes if 1 <= s <= m)


# ---------------------------------------------------------------------------
# first-order enumeration

FO_MAX_SYMBOLS = 2
FO_MAX_ARITY = 2
FO_MAX_ELEMENTS = 3
FO_MAX_MEMBERS = 3
FO_MAX_SIZE = 4


class FoEnumerator:
    """All NNF formulas up to a size bound over a fixed variable pool,
    deduplicated by meaning across a fixed set of models.

    The pool is the class domain plus fresh variables up to the size
    bound; a formula's meaning is its satisfaction bitmap over every
    (model, total pool assignment) pair, so two formulas agreeing there
    agree on every structure the enumerator will ever be asked about.
    """

    def __init__(
        self,
        models: Sequence[Model],
        domain: Iterable[int],
        w_max: int,
        mode: FoMode = FoMode.FULL,
    ) -> None:
        models = list(dict.fromkeys(models))
        if not models:
            raise InputError("the enumerator needs at least one model")
        vocab = models[0].vocabulary
        if any(mo.vocabulary != vocab for mo in models):
            raise InputError("enumerator models must share one vocabulary")
        if len(vocab.symbols) > FO_MAX_SYMBOLS or any(
            arity > FO_MAX_ARITY for _, arity in vocab.symbols
        ):
            raise ResourceCapError(
                f"the formula enumerator handles at most {FO_MAX_SYMBOLS} relation "
                f"symbols of arity <= {FO_MAX_ARITY}"
            )
        if any(mo.universe_size > FO_MAX_ELEMENTS for mo in models):
            raise ResourceCapError(
                f"the formula enumerator handles models of at most "
                f"{FO_MAX_ELEMENTS} elements"
            )
        if w_max > FO_MAX_SIZE:
            raise ResourceCapError(
                f"the formula enumerator searches sizes up to {FO_MAX_SIZE}, "
                f"got {w_max}"
            )
        if w_max < 1:
            raise InputError(f"w_max must be >= 1, got {w_max}")
        self.models = models
        self.domain = frozenset(domain)
        self.mode = mode
        pool = sorted(self.domain)
        fresh = 0
        while len(pool) < len(self.domain) + w_max:
            if fresh not in self.domain:
                pool.append(fresh)
            fresh += 1
        self.pool = pool
        self._assignments = [
            list(itertools.product(range(mo.universe_size), repeat=len(pool)))
            for mo in models
        ]
        self._layers = self._enumerate(w_max)

    # bitmaps: one int per model, one bit per total pool assignment

    def _atom_bitmap(self, atom: FoFormula) -> tuple[int, ...]:
        maps = []
        for mo, assigns in zip(self.models, self._assignments):
            bits = 0
            for idx, values in enumerate(assigns):
                env = dict(zip(self.pool, values))
                if _plain_eval(atom, mo, env):
                    bits |= 1 << idx
            maps.append(bits)
        return tuple(maps)

    def _quantifier_bitmap(
        self, child: tuple[int, ...], var: int, want_any: bool
    ) -> tuple[int, ...]:
        p = self.pool.index(var)
        maps = []
        for mo, assigns, bits in zip(self.models, self._assignments, child):
            k = len(self.pool)
            stride = mo.universe_size ** (k - 1 - p)
            out = 0
            for idx in range(len(assigns)):
                base = idx - assigns[idx][p] * stride
                votes = (
                    bits >> (base + a * stride) & 1
                    for a in range(mo.universe_size)
                )
                ok = any(votes) if want_any else all(votes)
                if ok:
                    out |= 1 << idx
            maps.append(out)
        return tuple(maps)

    def _enumerate(self, w_max: int) -> list[list[tuple[FoFormula, tuple[int, ...], frozenset[int]]]]:
        seen: set[tuple] = set()
        layers: list[list[tuple[FoFormula, tuple[int, ...], frozenset[int]]]] = []
        atoms: list[FoFormula] = []
        for name, arity in self.models[0].vocabulary.symbols:
            for args in itertools.product(self.pool, repeat=arity):
                atoms.append(RelAtom(name, args))
        for a, b in itertools.combinations_with_replacement(self.pool, 2):
            atoms.append(EqAtom(a, b))
        first = []
        for atom in atoms:
            bitmap = self._atom_bitmap(atom)
            for f, fmap in ((atom, bitmap), (FoNot(atom), _complement(bitmap, self._assignments))):
                free = _free(f)
                if (fmap, free) not in seen:
                    seen.add((fmap, free))
                    first.append((f, fmap, free))
        layers.append(first)
        for m in range(2, w_max + 1):
            layer = []
            for u in range(1, m):
                for f, fmap, ffree in layers[u - 1]:
                    for g, gmap, gfree in layers[m - u - 1]:
                        hfree = ffree | gfree
                        for node, op in ((FoAnd, _and_maps), (FoOr, _or_maps)):
                            hmap = op(fmap, gmap)
                            if (hmap, hfree) not in seen:
                                seen.add((hmap, hfree))
                                layer.append((node(f, g), hmap, hfree))
            for f, fmap, ffree in layers[m - 2]:
                for var in self.pool:
                    qfree = ffree - {var}
                    emap = self._quantifier_bitmap(fmap, var, want_any=True)
                    if (emap, qfree) not in seen:
                        seen.add((emap, qfree))
                        layer.append((Exists(var, f), emap, qfree))
                    if self.mode is FoMode.FULL:
                        amap = self._quantifier_bitmap(fmap, var, want_any=False)
                        if (amap, qfree) not in seen:
                            seen.add((amap, qfree))
                            layer.append((Forall(var, f), amap, qfree))
            layers.append(layer)
        return layers

    def _member_bit(self, st) -> tuple[int, int]:
        """(model index, assignment index) of a structure."""
        try:
            mi = self.models.index(st.model)
        except ValueError:
            raise InputError("structure's model is outside the enumerator scope")
        # unassigned pool coordinates are padded with element 0; formulas
        # whose free variables sit inside the domain cannot see the padding
        values = tuple(
            st.assignment.get(v) if v in st.assignment.domain else 0
            for v in self.pool
        )
        return mi, self._assignments[mi].index(values)

    def separator(
        self, left: StructureClass, right: StructureClass
    ) -> Optional[FoFormula]:
        """The smallest enumerated formula separating the classes, or None."""
        if left.vocabulary != right.vocabulary:
            raise InputError("classes use different vocabularies")
        if left.domain != right.domain:
            raise InputError("classes use different assignment domains")
        if left.domain != self.domain:
            raise InputError("class domain differs from the enumerator domain")
        if max(len(left.members), len(right.members)) > FO_MAX_MEMBERS:
            raise ResourceCapError(
                f"the formula enumerator compares classes of at most "
                f"{FO_MAX_MEMBERS} members"
            )
        lbits = [self._member_bit(st) for st in left.members]
        rbits = [self._member_bit(st) for st in right.members]
        for layer in self._layers:
            for f, fmap, ffree in layer:
                if not ffree <= self.domain:
                    continue
                if all(fmap[mi] >> idx & 1 for mi, idx in lbits) and not any(
                    fmap[mi] >> idx & 1 for mi, idx in rbits
                ):
                    return f
        return None


def _free(f: FoFormula) -> frozenset[int]:
    if isinstance(f, RelAtom):
        return frozenset(f.args)
    if isinstance(f, EqAtom):
        return frozenset((f.left, f.right))
    if isinstance(f, FoNot):
        return _free(f.child)
    raise InputError(f"unexpected node {f!r}")


def _complement(maps: tuple[int, ...], assignments) -> tuple[int, ...]:
    return tuple(
        bits ^ ((1 << len(assigns)) - 1) for bits, assigns in zip(maps, assignments)
    )


def _and_maps(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x & y for x, y in zip(a, b))


def _or_maps(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x | y for x, y in zip(a, b))


def _plain_eval(f: FoFormula, model: Model, env: dict[int, int]) -> bool:
    if isinstance(f, RelAtom):
        return tuple(env[j] for j in f.args) in model.relation(f.symbol)
    if isinstance(f, EqAtom):
        return env[f.left] == env[f.right]
    raise InputError(f"unexpected node {f!r}")


def fo_enumerate_separator(
    left: StructureClass,
    right: StructureClass,
    w_max: int,
    mode: FoMode = FoMode.FULL,
) -> Optional[FoFormula]:
    """Brute-force smallest separating formula of size <= w_max, for
    cross-checking the game solver at tiny scales."""
    if left.vocabulary != right.vocabulary:
        raise InputError("classes use different vocabularies")
    if left.domain != right.domain:
        raise InputError("classes use different assignment domains")
    models = [st.model for st in left.members] + [st.model for st in right.members]
    if not models:
        raise InputError("cannot enumerate over two empty classes")
    enum = FoEnumerator(models, left.domain, w_max, mode)
    return enum.separator(left, right)
