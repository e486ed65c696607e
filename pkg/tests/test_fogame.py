import random

import pytest

import suites
from efgames import (
    EMPTY_ASSIGNMENT,
    Assignment,
    EqAtom,
    Exists,
    FoGame,
    FoMode,
    InputError,
    Model,
    Player,
    RelAtom,
    ResourceCapError,
    Structure,
    StructureClass,
    Vocabulary,
    fo_eval,
    fo_minsize,
    fo_separates,
    fo_size,
    fo_synthesize,
    fo_winner,
    is_existential,
    linear_order,
    linorder_instances,
    boolcomb_instances,
)


def order_class(k, assignment=()):
    st = Structure(linear_order(k), Assignment.make(assignment))
    return StructureClass.of(frozenset([st]))


def test_atomic_separator_wins_at_rank_one():
    vocab = Vocabulary.make(("<", 2))
    a = StructureClass.of(
        frozenset([Structure(linear_order(2), Assignment.make({0: 0, 1: 1}))]),
        vocabulary=vocab,
        domain=frozenset({0, 1}),
    )
    b = StructureClass.of(
        frozenset([Structure(linear_order(1), Assignment.make({0: 0, 1: 0}))]),
        vocabulary=vocab,
        domain=frozenset({0, 1}),
    )
    assert fo_winner(1, a, b, FoMode.FULL) is Player.I
    f = fo_synthesize(a, b, 1, FoMode.FULL)
    assert f == RelAtom("<", (0, 1))


def test_order_length_two_needs_rank_three():
    a, b = linorder_instances(2)
    assert fo_winner(3, a, b, FoMode.EXISTENTIAL) is Player.I
    assert fo_winner(2, a, b, FoMode.EXISTENTIAL) is Player.II


def test_minsize_of_length_two_orders():
    a, b = linorder_instances(2)
    assert fo_minsize(a, b, mode=FoMode.EXISTENTIAL, w_max=6) == 3


def test_minsize_of_smallest_combination_family():
    a, b = boolcomb_instances(1)
    assert fo_minsize(a, b, mode=FoMode.EXISTENTIAL, w_max=6) == 4


def test_identical_classes_are_inseparable():
    a = order_class(2)
    assert fo_minsize(a, a, mode=FoMode.FULL, w_max=4) is None
    assert fo_minsize(a, a, mode=FoMode.EXISTENTIAL, w_max=4) is None


def test_synthesized_order_sentence_matches_reference():
    a, b = linorder_instances(2)
    f = fo_synthesize(a, b, 3, FoMode.EXISTENTIAL)
    assert f is not None
    assert fo_size(f) <= 3
    assert is_existential(f)
    assert fo_separates(f, a, b)
    reference = Exists(0, Exists(1, RelAtom("<", (0, 1))))
    for k in (1, 2, 3, 4):
        st = Structure(linear_order(k), EMPTY_ASSIGNMENT)
        assert fo_eval(f, st) == fo_eval(reference, st)


def test_synthesis_below_minimum_returns_none():
    a, b = linorder_instances(2)
    assert fo_synthesize(a, b, 2, FoMode.EXISTENTIAL) is None


def test_winner_validates_input():
    a, b = linorder_instances(2)
    with pytest.raises(InputError):
        fo_winner(0, a, b, FoMode.FULL)
    vocab = Vocabulary.make(("P1", 1))
    other = StructureClass.of(
        frozenset([Structure(Model.make(vocab, 1, {"P1": []}), EMPTY_ASSIGNMENT)])
    )
    with pytest.raises(InputError):
        fo_winner(2, a, other, FoMode.FULL)
    shifted = StructureClass.of(
        frozenset([Structure(linear_order(1), Assignment.make({0: 0}))]),
        vocabulary=a.vocabulary,
        domain=frozenset({0}),
    )
    with pytest.raises(InputError):
        fo_winner(2, a, shifted, FoMode.FULL)


def test_class_size_cap():
    game = FoGame(cap_class_size=1)
    a, b = boolcomb_instances(1)  # the adversary class has two members
    with pytest.raises(ResourceCapError) as err:
        game.winner(2, a, b, FoMode.EXISTENTIAL)
    assert "cap-class-size" in str(err.value)


def test_choice_function_cap():
    game = FoGame(cap_choice_functions=1)
    a, b = linorder_instances(3)
    with pytest.raises(ResourceCapError) as err:
        game.winner(3, a, b, FoMode.EXISTENTIAL)
    assert "cap-choice-functions" in str(err.value)


def test_position_cap_bounds_one_query():
    game = FoGame(cap_positions=2)
    a, b = linorder_instances(2)
    with pytest.raises(ResourceCapError) as err:
        game.winner(3, a, b, FoMode.EXISTENTIAL)
    assert "cap-positions" in str(err.value)
    # a solved query fits in any later budget: the cap is per call
    big = FoGame()
    assert big.winner(3, a, b, FoMode.EXISTENTIAL) is Player.I
    small_budget = big.positions_visited
    assert big.winner(3, a, b, FoMode.EXISTENTIAL) is Player.I
    assert big.positions_visited == 0  # answered from the memo


def test_winner_agrees_with_enumeration_everywhere(tiny_fo_suite):
    for mode, (game, records) in tiny_fo_suite.items():
        for rec in records:
            for w, won in enumerate(rec.wins, start=1):
                expect = rec.enum_best is not None and rec.enum_best <= w
                assert won == expect, (
                    f"{mode}: game and enumeration disagree at rank {w} "
                    f"(smallest separator: {rec.enum_best})"
                )


def test_existential_win_carries_to_full_mode(tiny_fo_suite):
    _, exi_records = tiny_fo_suite[FoMode.EXISTENTIAL]
    _, full_records = tiny_fo_suite[FoMode.FULL]
    for exi, full in zip(exi_records, full_records):
        assert exi.left == full.left and exi.right == full.right
        for w_exi, w_full in zip(exi.wins, full.wins):
            assert not w_exi or w_full


def test_wins_are_rank_monotone(tiny_fo_suite):
    for mode, (game, records) in tiny_fo_suite.items():
        for rec in records:
            for lower, higher in zip(rec.wins, rec.wins[1:]):
                assert not lower or higher


def test_synthesis_sound_across_tiny_positions(tiny_fo_suite):
    for mode, (game, records) in tiny_fo_suite.items():
        for rec in records:
            if rec.enum_best is None:
                continue
            w = rec.enum_best
            f = game.synthesize(rec.left, rec.right, w, mode)
            assert f is not None
            assert fo_size(f) <= w
            assert fo_separates(f, rec.left, rec.right)
            if mode is FoMode.EXISTENTIAL:
                assert is_existential(f)


def test_variable_reuse_does_not_change_winners(tiny_fo_suite):
    # the solver binds only fresh indices; allowing in-scope indices too
    # must not flip any winner
    rng = random.Random(97)
    _, records = tiny_fo_suite[FoMode.FULL]
    sample = rng.sample(records, 30)
    for mode in (FoMode.EXISTENTIAL, FoMode.FULL):
        reuse = FoGame(fresh_only=False)
        restricted = tiny_fo_suite[mode][0]
        for rec in sample:
            for w in (2, 3, 4):
                assert reuse.winner(w, rec.left, rec.right, mode) is restricted.winner(
                    w, rec.left, rec.right, mode
                )


def test_synthesize_respects_vacuous_separation():
    # an empty left class against a nonempty right class is separated by
    # a contradiction at rank 2
    vocab = Vocabulary.make(("P1", 1))
    member = Structure(Model.make(vocab, 1, {"P1": [(0,)]}), EMPTY_ASSIGNMENT)
    empty = StructureClass.of(frozenset(), vocabulary=vocab, domain=frozenset())
    full = StructureClass.of(frozenset([member]))
    won_at = fo_minsize(empty, full, mode=FoMode.FULL, w_max=4)
    assert won_at is not None
    f = fo_synthesize(empty, full, won_at, FoMode.FULL)
    assert fo_separates(f, empty, full)
