import random

import pytest

from efgames import (
    EMPTY_ASSIGNMENT,
    Assignment,
    ContractError,
    EqAtom,
    Exists,
    FoAnd,
    FoNot,
    FoOr,
    Forall,
    InputError,
    Model,
    RelAtom,
    Structure,
    StructureClass,
    Vocabulary,
    atom_candidates,
    atomic_separators,
    boolcomb_instances,
    boolcomb_existential_sentence,
    class_from_json,
    class_to_json,
    extend_choice,
    extend_star,
    fo_eval,
    fo_free_vars,
    fo_nnf,
    fo_quantifier_rank,
    fo_separates,
    fo_size,
    format_fo,
    is_existential,
    linear_order,
    linorder_instances,
    structure_from_json,
    structure_to_json,
)

PSI2 = Exists(0, Exists(1, RelAtom("<", (0, 1))))


def order_struct(k, assignment=()):
    return Structure(linear_order(k), Assignment.make(assignment))


def test_eval_chain_on_two_element_order():
    assert fo_eval(PSI2, order_struct(2))
    assert not fo_eval(PSI2, order_struct(1))


def test_eval_unary_atom_under_assignment():
    vocab = Vocabulary.make(("P1", 1))
    model = Model.make(vocab, 2, {"P1": [(0,)]})
    st = Structure(model, Assignment.make({0: 0}))
    assert fo_eval(RelAtom("P1", (0,)), st)
    assert not fo_eval(RelAtom("P1", (0,)), Structure(model, Assignment.make({0: 1})))


def test_eval_requires_assigned_free_variables():
    with pytest.raises(ContractError):
        fo_eval(RelAtom("<", (0, 1)), order_struct(2))


def test_size_counts_atoms_and_quantifiers():
    assert fo_size(RelAtom("<", (0, 1))) == 1
    assert fo_size(PSI2) == 3
    assert fo_size(Forall(0, FoOr(RelAtom("P1", (0,)), FoNot(RelAtom("P1", (0,)))))) == 3


def test_quantifier_rank():
    assert fo_quantifier_rank(RelAtom("<", (0, 1))) == 0
    assert fo_quantifier_rank(PSI2) == 2
    assert fo_quantifier_rank(FoAnd(Exists(0, EqAtom(0, 0)), Exists(1, EqAtom(1, 1)))) == 1


def test_nnf_dualizes_quantifiers():
    f = FoNot(Exists(0, RelAtom("P1", (0,))))
    g = fo_nnf(f)
    assert g == Forall(0, FoNot(RelAtom("P1", (0,))))
    assert fo_size(g) == fo_size(f) == 2


def test_existential_fragment_detection():
    assert is_existential(PSI2)
    assert not is_existential(Forall(0, Exists(1, RelAtom("<", (0, 1)))))
    # normalized first: the double negation hides no universal
    assert is_existential(FoNot(FoNot(PSI2)))
    assert not is_existential(FoNot(Exists(0, EqAtom(0, 0))))


def _random_fo(rng, vocab_arity, depth, next_var=0):
    if depth == 0 or rng.random() < 0.3:
        if rng.random() < 0.5 and next_var >= 2:
            return EqAtom(rng.randrange(next_var), rng.randrange(next_var))
        args = tuple(
            rng.randrange(max(next_var, 1)) for _ in range(vocab_arity)
        )
        return RelAtom("E", args)
    roll = rng.random()
    if roll < 0.25:
        return FoNot(_random_fo(rng, vocab_arity, depth - 1, next_var))
    if roll < 0.45:
        return Exists(next_var, _random_fo(rng, vocab_arity, depth - 1, next_var + 1))
    if roll < 0.6:
        return Forall(next_var, _random_fo(rng, vocab_arity, depth - 1, next_var + 1))
    left = _random_fo(rng, vocab_arity, depth - 1, next_var)
    right = _random_fo(rng, vocab_arity, depth - 1, next_var)
    return FoAnd(left, right) if roll < 0.8 else FoOr(left, right)


def test_nnf_preserves_size_and_truth():
    rng = random.Random(29)
    vocab = Vocabulary.make(("E", 2))
    models = [
        Model.make(vocab, k, {"E": [(i, j) for i in range(k) for j in range(k) if rng.random() < 0.5]})
        for k in (1, 2, 3)
    ]
    for _ in range(80):
        f = _random_fo(rng, 2, rng.randint(1, 4))
        g = fo_nnf(f)
        assert fo_size(g) == fo_size(f)
        free = fo_free_vars(f)
        for model in models:
            for bits in range(model.universe_size ** max(len(free), 0)):
                values = {}
                rest = bits
                for v in sorted(free):
                    values[v] = rest % model.universe_size
                    rest //= model.universe_size
                st = Structure(model, Assignment.make(values))
                assert fo_eval(f, st) == fo_eval(g, st)


def test_separates_two_orders():
    a = StructureClass.of(frozenset([order_struct(2)]))
    b = StructureClass.of(frozenset([order_struct(1)]))
    assert fo_separates(PSI2, a, b)


def test_self_equality_never_separates_nonempty_classes():
    vocab = Vocabulary.make(("<", 2))
    a = StructureClass.of(
        frozenset([order_struct(2, {0: 0})]), vocabulary=vocab, domain=frozenset({0})
    )
    b = StructureClass.of(
        frozenset([order_struct(1, {0: 0})]), vocabulary=vocab, domain=frozenset({0})
    )
    assert not fo_separates(EqAtom(0, 0), a, b)


def test_combination_sentence_separates_smallest_instance():
    a, b = boolcomb_instances(1)
    assert fo_separates(boolcomb_existential_sentence(1), a, b)


def test_separates_validates_compatibility():
    a = StructureClass.of(frozenset([order_struct(2)]))
    vocab = Vocabulary.make(("P1", 1))
    other = StructureClass.of(
        frozenset([Structure(Model.make(vocab, 1, {"P1": []}), EMPTY_ASSIGNMENT)])
    )
    with pytest.raises(InputError):
        fo_separates(PSI2, a, other)
    b = StructureClass.of(frozenset([order_struct(1)]))
    with pytest.raises(InputError):
        fo_separates(RelAtom("<", (0, 1)), a, b)  # free variables outside domain


def test_star_extension_counts():
    b = StructureClass.of(frozenset([order_struct(2)]))
    star = extend_star(b, 0)
    assert len(star.members) == 2
    assert star.domain == frozenset({0})
    # two distinct 2-element members star-extend to four structures
    vocab = Vocabulary.make(("P1", 1))
    m1 = Model.make(vocab, 2, {"P1": []})
    m2 = Model.make(vocab, 2, {"P1": [(0,)]})
    pair = StructureClass.of(
        frozenset([Structure(m1, EMPTY_ASSIGNMENT), Structure(m2, EMPTY_ASSIGNMENT)])
    )
    assert len(extend_star(pair, 0).members) == 4


def test_choice_extension_picks_one_element():
    b = StructureClass.of(frozenset([order_struct(2)]))
    chosen = extend_choice(b, {0: 1}, 0)
    assert len(chosen.members) == 1
    assert chosen.members[0].assignment.get(0) == 1
    assert chosen.domain == frozenset({0})


def test_choice_extension_must_be_total_and_in_range():
    b = StructureClass.of(frozenset([order_struct(2)]))
    with pytest.raises(ContractError):
        extend_choice(b, {}, 0)
    with pytest.raises(ContractError):
        extend_choice(b, {0: 5}, 0)
    with pytest.raises(ContractError):
        extend_choice(b, [0, 1], 0)


def test_atom_candidates_cover_relations_and_equalities():
    vocab = Vocabulary.make(("<", 2))
    atoms = atom_candidates(vocab, (0, 1))
    assert RelAtom("<", (0, 1)) in atoms
    assert RelAtom("<", (1, 0)) in atoms
    assert EqAtom(0, 0) in atoms
    assert EqAtom(0, 1) in atoms
    assert atom_candidates(vocab, ()) == []


def test_atomic_separator_found_on_assigned_orders():
    vocab = Vocabulary.make(("<", 2))
    a = StructureClass.of(
        frozenset([order_struct(2, {0: 0, 1: 1})]),
        vocabulary=vocab,
        domain=frozenset({0, 1}),
    )
    b = StructureClass.of(
        frozenset([order_struct(1, {0: 0, 1: 0})]),
        vocabulary=vocab,
        domain=frozenset({0, 1}),
    )
    seps = atomic_separators(a, b)
    assert (RelAtom("<", (0, 1)), True) in seps


def test_no_atomic_separator_on_fresh_instances():
    for n in (1, 2):
        a, b = boolcomb_instances(n)
        assert atomic_separators(a, b) == []


def test_nothing_separates_a_class_from_itself():
    a = StructureClass.of(frozenset([order_struct(3)]))
    assert atomic_separators(a, a) == []


def test_structure_json_round_trip():
    st = order_struct(3, {0: 2})
    obj = structure_to_json(st)
    assert structure_from_json(obj) == st
    cls = StructureClass.of(frozenset([st]))
    assert class_from_json(class_to_json(cls)) == cls


def test_structure_json_validation():
    with pytest.raises(InputError):
        structure_from_json({"universe": 2})
    good = structure_to_json(order_struct(2))
    bad = dict(good)
    bad["relations"] = {"<": [[0, 5]]}
    with pytest.raises(InputError):
        structure_from_json(bad)
    bad2 = dict(good)
    bad2["assignment"] = {"0": 9}
    with pytest.raises(InputError):
        structure_from_json(bad2)


def test_format_uses_infix_for_operators():
    assert format_fo(PSI2) == "exists x0 exists x1 (x0 < x1)"
    f = Forall(0, FoNot(RelAtom("P1", (0,))))
    assert format_fo(f) == "forall x0 !P1(x0)"


def test_class_members_share_domain():
    with pytest.raises(InputError):
        StructureClass.of(
            frozenset([order_struct(2, {0: 0}), order_struct(2)])
        )
