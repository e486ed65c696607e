"""Finite relational models, variable assignments, structure classes,
and first-order formulas.

A structure is a model plus a (partial) assignment of variables to
elements; a structure class is a finite set of structures sharing a
vocabulary and an assignment domain.  Separation means one formula,
with free variables inside the class domain, holding on every member of
the left class and no member of the right class.

The size measure counts atoms and quantifiers: an atom weighs 1,
negation is free, binary connectives add, and each quantifier adds 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence, Union

from .errors import ContractError, InputError


@dataclass(frozen=True, slots=True)
class Vocabulary:
    """Relation symbols with arities, in a fixed order."""

    symbols: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        names = [name for name, _ in self.symbols]
        if len(set(names)) != len(names):
            raise InputError("duplicate relation symbol")
        for name, arity in self.symbols:
            if not name:
                raise InputError("relation symbol must be a nonempty string")
            if arity < 1:
                raise InputError(f"arity of {name!r} must be >= 1, got {arity}")

    @classmethod
    def make(cls, *symbols: tuple[str, int]) -> "Vocabulary":
        return cls(tuple((str(n), int(a)) for n, a in symbols))

    def arity(self, name: str) -> int:
        for sym, arity in self.symbols:
            if sym == name:
                return arity
        raise InputError(f"unknown relation symbol {name!r}")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.symbols)


@dataclass(frozen=True, slots=True)
class Model:
    """Finite model over universe {0, ..., universe_size - 1}; relations
    are stored in vocabulary order."""

    vocabulary: Vocabulary
    universe_size: int
    relations: tuple[frozenset[tuple[int, ...]], ...]

    def __post_init__(self) -> None:
        if self.universe_size < 1:
            raise InputError(f"universe size must be >= 1, got {self.universe_size}")
        if len(self.relations) != len(self.vocabulary.symbols):
            raise InputError("one relation per vocabulary symbol required")
        for (name, arity), rel in zip(self.vocabulary.symbols, self.relations):
            for row in rel:
                if len(row) != arity:
                    raise InputError(f"tuple {row} has wrong arity for {name!r}")
                if any(not 0 <= e < self.universe_size for e in row):
                    raise InputError(f"tuple {row} of {name!r} leaves the universe")

    @classmethod
    def make(
        cls,
        vocabulary: Vocabulary,
        universe_size: int,
        relations: Mapping[str, Iterable[Sequence[int]]] = (),
    ) -> "Model":
        given = dict(relations)
        unknown = set(given) - set(vocabulary.names)
        if unknown:
            raise InputError(f"relations for unknown symbols: {sorted(unknown)}")
        rels = tuple(
            frozenset(tuple(row) for row in given.get(name, ()))
            for name in vocabulary.names
        )
        return cls(vocabulary, universe_size, rels)

    def relation(self, name: str) -> frozenset[tuple[int, ...]]:
        for sym, rel in zip(self.vocabulary.names, self.relations):
            if sym == name:
                return rel
        raise InputError(f"unknown relation symbol {name!r}")

    def sort_key(self) -> tuple:
        return (
            self.universe_size,
            self.vocabulary.symbols,
            tuple(tuple(sorted(rel)) for rel in self.relations),
        )


_EMPTY_ITEMS: tuple[tuple[int, int], ...] = ()


@dataclass(frozen=True, slots=True)
class Assignment:
    """Partial map from variable indices to elements, stored sorted."""

    items: tuple[tuple[int, int], ...] = _EMPTY_ITEMS

    def __post_init__(self) -> None:
        seen = set()
        for j, a in self.items:
            if j < 0 or a < 0:
                raise InputError(f"assignment entry x{j} -> {a} out of range")
            if j in seen:
                raise InputError(f"variable x{j} assigned twice")
            seen.add(j)
        if self.items != tuple(sorted(self.items)):
            object.__setattr__(self, "items", tuple(sorted(self.items)))

    @classmethod
    def make(cls, mapping: Union[Mapping[int, int], Iterable[tuple[int, int]]] = ()) -> "Assignment":
        pairs = mapping.items() if isinstance(mapping, Mapping) else mapping
        return cls(tuple(sorted((int(j), int(a)) for j, a in pairs)))

    @property
    def domain(self) -> frozenset[int]:
        return frozenset(j for j, _ in self.items)

    def get(self, j: int) -> Optional[int]:
        for var, a in self.items:
            if var == j:
                return a
        return None

    def __contains__(self, j: int) -> bool:
        return any(var == j for var, _ in self.items)

    def extend(self, j: int, a: int) -> "Assignment":
        """Copy with x_j set to a, overriding any previous value."""
        items = tuple((var, val) for var, val in self.items if var != j)
        return Assignment(tuple(sorted(items + ((j, a),))))

    def as_dict(self) -> dict[int, int]:
        return dict(self.items)


EMPTY_ASSIGNMENT = Assignment()


@dataclass(frozen=True, slots=True)
class Structure:
    model: Model
    assignment: Assignment = EMPTY_ASSIGNMENT

    def __post_init__(self) -> None:
        for j, a in self.assignment.items:
            if a >= self.model.universe_size:
                raise InputError(
                    f"assignment x{j} -> {a} leaves a universe of size "
                    f"{self.model.universe_size}"
                )

    def sort_key(self) -> tuple:
        return (self.model.sort_key(), self.assignment.items)


@dataclass(frozen=True)
class StructureClass:
    """Finite set of structures over one vocabulary and one domain."""

    vocabulary: Vocabulary
    domain: frozenset[int]
    members: tuple[Structure, ...]

    def __post_init__(self) -> None:
        for st in self.members:
            if st.model.vocabulary != self.vocabulary:
                raise InputError("member vocabulary differs from the class vocabulary")
            if st.assignment.domain != self.domain:
                raise InputError(
                    f"member domain {sorted(st.assignment.domain)} differs from the "
                    f"class domain {sorted(self.domain)}"
                )

    @classmethod
    def of(
        cls,
        members: Iterable[Structure],
        *,
        vocabulary: Optional[Vocabulary] = None,
        domain: Optional[Iterable[int]] = None,
    ) -> "StructureClass":
        members = tuple(members)
        if vocabulary is None or domain is None:
            if not members:
                raise InputError(
                    "an empty class needs an explicit vocabulary and domain"
                )
            vocabulary = vocabulary or members[0].model.vocabulary
            dom = members[0].assignment.domain if domain is None else frozenset(domain)
        else:
            dom = frozenset(domain)
        return cls(vocabulary, dom, members)

    def __len__(self) -> int:
        return len(self.members)


# ---------------------------------------------------------------------------
# formulas


class FoFormula:
    """Marker base class for first-order formula nodes."""

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class RelAtom(FoFormula):
    symbol: str
    args: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.args or any(j < 0 for j in self.args):
            raise InputError(f"bad argument list {self.args} for {self.symbol!r}")


@dataclass(frozen=True, slots=True)
class EqAtom(FoFormula):
    left: int
    right: int

    def __post_init__(self) -> None:
        if self.left < 0 or self.right < 0:
            raise InputError("equality arguments must be variable indices >= 0")


@dataclass(frozen=True, slots=True)
class FoNot(FoFormula):
    child: FoFormula


@dataclass(frozen=True, slots=True)
class FoAnd(FoFormula):
    left: FoFormula
    right: FoFormula


@dataclass(frozen=True, slots=True)
class FoOr(FoFormula):
    left: FoFormula
    right: FoFormula


@dataclass(frozen=True, slots=True)
class Exists(FoFormula):
    var: int
    child: FoFormula

    def __post_init__(self) -> None:
        if self.var < 0:
            raise InputError("quantified variable index must be >= 0")


@dataclass(frozen=True, slots=True)
class Forall(FoFormula):
    var: int
    child: FoFormula

    def __post_init__(self) -> None:
        if self.var < 0:
            raise InputError("quantified variable index must be >= 0")


def fo_size(f: FoFormula) -> int:
    """Atoms weigh 1, connectives add, each quantifier adds 1."""
    if isinstance(f, (RelAtom, EqAtom)):
        return 1
    if isinstance(f, FoNot):
        return fo_size(f.child)
    if isinstance(f, (FoAnd, FoOr)):
        return fo_size(f.left) + fo_size(f.right)
    if isinstance(f, (Exists, Forall)):
        return 1 + fo_size(f.child)
    raise InputError(f"not a formula node: {f!r}")


def fo_quantifier_rank(f: FoFormula) -> int:
    if isinstance(f, (RelAtom, EqAtom)):
        return 0
    if isinstance(f, FoNot):
        return fo_quantifier_rank(f.child)
    if isinstance(f, (FoAnd, FoOr)):
        return max(fo_quantifier_rank(f.left), fo_quantifier_rank(f.right))
    if isinstance(f, (Exists, Forall)):
        return 1 + fo_quantifier_rank(f.child)
    raise InputError(f"not a formula node: {f!r}")


def fo_free_vars(f: FoFormula) -> frozenset[int]:
    if isinstance(f, RelAtom):
        return frozenset(f.args)
    if isinstance(f, EqAtom):
        return frozenset((f.left, f.right))
    if isinstance(f, FoNot):
        return fo_free_vars(f.child)
    if isinstance(f, (FoAnd, FoOr)):
        return fo_free_vars(f.left) | fo_free_vars(f.right)
    if isinstance(f, (Exists, Forall)):
        return fo_free_vars(f.child) - {f.var}
    raise InputError(f"not a formula node: {f!r}")


def fo_nnf(f: FoFormula) -> FoFormula:
    """Push negations down to the atoms; preserves size and meaning."""
    return _fo_nnf(f, positive=True)


def _fo_nnf(f: FoFormula, positive: bool) -> FoFormula:
    if isinstance(f, (RelAtom, EqAtom)):
        return f if positive else FoNot(f)
    if isinstance(f, FoNot):
        return _fo_nnf(f.child, not positive)
    if isinstance(f, FoAnd):
        if positive:
            return FoAnd(_fo_nnf(f.left, True), _fo_nnf(f.right, True))
        return FoOr(_fo_nnf(f.left, False), _fo_nnf(f.right, False))
    if isinstance(f, FoOr):
        if positive:
            return FoOr(_fo_nnf(f.left, True), _fo_nnf(f.right, True))
        return FoAnd(_fo_nnf(f.left, False), _fo_nnf(f.right, False))
    if isinstance(f, Exists):
        if positive:
            return Exists(f.var, _fo_nnf(f.child, True))
        return Forall(f.var, _fo_nnf(f.child, False))
    if isinstance(f, Forall):
        if positive:
            return Forall(f.var, _fo_nnf(f.child, True))
        return Exists(f.var, _fo_nnf(f.child, False))
    raise InputError(f"not a formula node: {f!r}")


def is_existential(f: FoFormula) -> bool:
    """True iff the negation normal form of f contains no universal
    quantifier."""
    return _is_existential(f, positive=True)


def _is_existential(f: FoFormula, positive: bool) -> bool:
    if isinstance(f, (RelAtom, EqAtom)):
        return True
    if isinstance(f, FoNot):
        return _is_existential(f.child, not positive)
    if isinstance(f, (FoAnd, FoOr)):
        return _is_existential(f.left, positive) and _is_existential(f.right, positive)
    if isinstance(f, Exists):
        return positive and _is_existential(f.child, positive)
    if isinstance(f, Forall):
        return not positive and _is_existential(f.child, positive)
    raise InputError(f"not a formula node: {f!r}")


_MISSING = object()


def fo_eval(f: FoFormula, st: Structure) -> bool:
    """Truth of f in the structure; every free variable must be assigned."""
    missing = fo_free_vars(f) - st.assignment.domain
    if missing:
        raise ContractError(
            f"free variables {sorted(missing)} are not assigned"
        )
    return _eval(f, st.model, st.assignment.as_dict())


def _eval(f: FoFormula, model: Model, env: dict[int, int]) -> bool:
    if isinstance(f, RelAtom):
        if len(f.args) != model.vocabulary.arity(f.symbol):
            raise InputError(
                f"atom {f.symbol!r}/{len(f.args)} does not match the vocabulary"
            )
        return tuple(env[j] for j in f.args) in model.relation(f.symbol)
    if isinstance(f, EqAtom):
        return env[f.left] == env[f.right]
    if isinstance(f, FoNot):
        return not _eval(f.child, model, env)
    if isinstance(f, FoAnd):
        return _eval(f.left, model, env) and _eval(f.right, model, env)
    if isinstance(f, FoOr):
        return _eval(f.left, model, env) or _eval(f.right, model, env)
    if isinstance(f, (Exists, Forall)):
        want_any = isinstance(f, Exists)
        old = env.get(f.var, _MISSING)
        try:
            for a in range(model.universe_size):
                env[f.var] = a
                if _eval(f.child, model, env) == want_any:
                    return want_any
            return not want_any
        finally:
            if old is _MISSING:
                env.pop(f.var, None)
            else:
                env[f.var] = old
    raise InputError(f"not a formula node: {f!r}")


def fo_separates(f: FoFormula, left: StructureClass, right: StructureClass) -> bool:
    """True iff f holds on every member of ``left`` and no member of
    ``right``."""
    if left.vocabulary != right.vocabulary:
        raise InputError("classes use different vocabularies")
    if left.domain != right.domain:
        raise InputError("classes use different assignment domains")
    if not fo_free_vars(f) <= left.domain:
        raise InputError(
            f"free variables {sorted(fo_free_vars(f) - left.domain)} are outside "
            f"the class domain"
        )
    return all(fo_eval(f, st) for st in left.members) and not any(
        fo_eval(f, st) for st in right.members
    )


# ---------------------------------------------------------------------------
# class extension moves


def extend_star(cls: StructureClass, j: int) -> StructureClass:
    """Extend every member at x_j in every possible way."""
    if j < 0:
        raise InputError("variable index must be >= 0")
    members = tuple(
        Structure(st.model, st.assignment.extend(j, a))
        for st in cls.members
        for a in range(st.model.universe_size)
    )
    return StructureClass(cls.vocabulary, cls.domain | {j}, members)


def extend_choice(
    cls: StructureClass, choices: Union[Sequence[int], Mapping[int, int]], j: int
) -> StructureClass:
    """Extend member k at x_j to the element choices[k].  The choice
    function must cover every member with an element of its universe."""
    if j < 0:
        raise InputError("variable index must be >= 0")
    if isinstance(choices, Mapping):
        picks = [choices.get(k) for k in range(len(cls.members))]
    else:
        picks = list(choices)
        if len(picks) != len(cls.members):
            raise ContractError(
                f"choice function covers {len(picks)} members, class has "
                f"{len(cls.members)}"
            )
    members = []
    for k, st in enumerate(cls.members):
        a = picks[k] if k < len(picks) else None
        if a is None:
            raise ContractError(f"choice function is undefined on member {k}")
        if not 0 <= a < st.model.universe_size:
            raise ContractError(
                f"choice {a} for member {k} leaves a universe of size "
                f"{st.model.universe_size}"
            )
        members.append(Structure(st.model, st.assignment.extend(j, a)))
    return StructureClass(cls.vocabulary, cls.domain | {j}, tuple(members))


# ---------------------------------------------------------------------------
# atoms


def atom_candidates(vocabulary: Vocabulary, domain: Iterable[int]) -> list[FoFormula]:
    """All atoms over the given variables, in a fixed deterministic order:
    relation atoms in vocabulary order with argument tuples in
    lexicographic order, then equalities."""
    variables = sorted(domain)
    atoms: list[FoFormula] = []
    for name, arity in vocabulary.symbols:
        for args in itertools.product(variables, repeat=arity):
            atoms.append(RelAtom(name, args))
    # x = x is kept: its negation is the only atom falsified by everything,
    # which decides positions whose left class is empty
    for a, b in itertools.combinations_with_replacement(variables, 2):
        atoms.append(EqAtom(a, b))
    return atoms


def atomic_separators(
    left: StructureClass, right: StructureClass
) -> list[tuple[FoFormula, bool]]:
    """Atoms separating the classes, each tagged True when the atom itself
    separates and False when its negation does."""
    if left.vocabulary != right.vocabulary:
        raise InputError("classes use different vocabularies")
    if left.domain != right.domain:
        raise InputError("classes use different assignment domains")
    found = []
    for atom in atom_candidates(left.vocabulary, left.domain):
        on_left = [fo_eval(atom, st) for st in left.members]
        on_right = [fo_eval(atom, st) for st in right.members]
        if all(on_left) and not any(on_right):
            found.append((atom, True))
        elif not any(on_left) and all(on_right):
            found.append((atom, False))
    return found


# ---------------------------------------------------------------------------
# text format


def format_fo(f: FoFormula) -> str:
    if isinstance(f, RelAtom):
        if len(f.args) == 2 and not f.symbol[0].isalnum():
            return f"(x{f.args[0]} {f.symbol} x{f.args[1]})"
        return f"{f.symbol}({', '.join(f'x{j}' for j in f.args)})"
    if isinstance(f, EqAtom):
        return f"(x{f.left} = x{f.right})"
    if isinstance(f, FoNot):
        return f"!{format_fo(f.child)}"
    if isinstance(f, FoAnd):
        return f"({format_fo(f.left)} & {format_fo(f.right)})"
    if isinstance(f, FoOr):
        return f"({format_fo(f.left)} | {format_fo(f.right)})"
    if isinstance(f, Exists):
        return f"exists x{f.var} {format_fo(f.child)}"
    if isinstance(f, Forall):
        return f"forall x{f.var} {format_fo(f.child)}"
    raise InputError(f"not a formula node: {f!r}")


# ---------------------------------------------------------------------------
# JSON shapes
#
# structure: {"vocabulary": [["<", 2], ...], "universe": 3,
#             "relations": {"<": [[0, 1], ...]}, "assignment": {"0": 2}}
# class: a JSON list of structures (all sharing vocabulary and domain)


def structure_to_json(st: Structure) -> dict:
    return {
        "vocabulary": [[name, arity] for name, arity in st.model.vocabulary.symbols],
        "universe": st.model.universe_size,
        "relations": {
            name: sorted([list(row) for row in st.model.relation(name)])
            for name in st.model.vocabulary.names
        },
        "assignment": {str(j): a for j, a in st.assignment.items},
    }


def structure_from_json(obj: object) -> Structure:
    if not isinstance(obj, dict):
        raise InputError("structure must be a JSON object")
    vocab_spec = obj.get("vocabulary")
    if not isinstance(vocab_spec, list):
        raise InputError("structure 'vocabulary' must be a list of [name, arity]")
    symbols = []
    for entry in vocab_spec:
        if (
            not isinstance(entry, (list, tuple))
            or len(entry) != 2
            or not isinstance(entry[0], str)
            or not isinstance(entry[1], int)
        ):
            raise InputError(f"bad vocabulary entry {entry!r}")
        symbols.append((entry[0], entry[1]))
    vocabulary = Vocabulary(tuple(symbols))
    universe = obj.get("universe")
    if not isinstance(universe, int) or isinstance(universe, bool):
        raise InputError("structure 'universe' must be an integer")
    relations = obj.get("relations", {})
    if not isinstance(relations, dict):
        raise InputError("structure 'relations' must be an object")
    rels: dict[str, list[tuple[int, ...]]] = {}
    for name, rows in relations.items():
        if not isinstance(rows, list):
            raise InputError(f"relation {name!r} must be a list of tuples")
        parsed = []
        for row in rows:
            if not isinstance(row, list) or not all(
                isinstance(e, int) and not isinstance(e, bool) for e in row
            ):
                raise InputError(f"bad tuple {row!r} in relation {name!r}")
            parsed.append(tuple(row))
        rels[name] = parsed
    assignment_spec = obj.get("assignment", {})
    if not isinstance(assignment_spec, dict):
        raise InputError("structure 'assignment' must be an object")
    pairs = []
    for key, value in assignment_spec.items():
        try:
            j = int(key)
        except ValueError:
            raise InputError(f"assignment key {key!r} is not a variable index")
        if not isinstance(value, int) or isinstance(value, bool):
            raise InputError(f"assignment value {value!r} is not an element")
        pairs.append((j, value))
    model = Model.make(vocabulary, universe, rels)
    return Structure(model, Assignment.make(pairs))


def class_to_json(cls: StructureClass) -> list:
    return [structure_to_json(st) for st in cls.members]


def class_from_json(data: object) -> StructureClass:
    if not isinstance(data, list) or not data:
        raise InputError("a class must be a nonempty JSON list of structures")
    members = tuple(structure_from_json(obj) for obj in data)
    return StructureClass.of(members)
