import random

from src.logic.buchi import BuchiAutomaton, buchi_accepts, ltl_to_buchi
from src.logic.formula import TRUE, And, Always, Atom, Eventually, LassoWord, Not, word_sat
from src.logic.rite import Eps, Test
from tests.factories import LETTER_ATOMS, all_letters, random_formula, random_lasso

R = Test("r")


def constant_words(ats):
    return [LassoWord.of([], [letter]) for letter in all_letters(ats)]


def test_true_accepts_every_word():
    b = ltl_to_buchi(TRUE)
    rng = random.Random(1)
    for _ in range(20):
        assert buchi_accepts(b, random_lasso(rng))


def test_eventually():
    b = ltl_to_buchi(Eventually(Atom(R)))
    assert buchi_accepts(b, LassoWord.of([[], [R]], [[]]))
    assert not buchi_accepts(b, LassoWord.of([], [[]]))


def test_contradiction_has_empty_language():
    phi = And(Always(Atom(Eps())), Not(Always(Atom(Eps()))))
    b = ltl_to_buchi(phi)
    rng = random.Random(2)
    words = constant_words([Eps()]) + [random_lasso(rng, [Eps()]) for _ in range(20)]
    assert not any(buchi_accepts(b, w) for w in words)


def test_automaton_without_accepting_states():
    b = BuchiAutomaton(frozenset({0}), ((0, frozenset(), 0),), frozenset({0}), frozenset())
    assert not any(buchi_accepts(b, w) for w in constant_words(LETTER_ATOMS))


def test_automaton_accepting_everything():
    b = BuchiAutomaton(frozenset({0}), ((0, frozenset(), 0),), frozenset({0}), frozenset({0}))
    assert all(buchi_accepts(b, w) for w in constant_words(LETTER_ATOMS))


def test_guards_are_cubes_over_the_formula_atoms():
    b = ltl_to_buchi(Atom(R))
    literals = set().union(*(guard for _, guard, _ in b.transitions))

    assert b.atoms == {R}
    assert literals <= {(R, True), (R, False)}


def test_states_are_numbered_from_zero():
    b = ltl_to_buchi(Always(Eventually(Atom(R))))
    assert b.states == set(range(len(b.states)))
    assert b.initial


def test_translation_agrees_with_word_semantics():
    rng = random.Random(42)
    formulas = [random_formula(rng, size=rng.randrange(1, 7)) for _ in range(100)]
    words = [random_lasso(rng) for _ in range(50)]
    for phi in formulas:
        positive, negative = ltl_to_buchi(phi), ltl_to_buchi(Not(phi))
        for w in words:
            expected = word_sat(w, phi)
            assert buchi_accepts(positive, w) == expected, f"{phi} on {w}"
            assert buchi_accepts(negative, w) != expected, f"!{phi} on {w}"


def test_every_letter_is_enumerated():
    letters = all_letters(LETTER_ATOMS)
    assert len(letters) == 8
    assert frozenset() in letters
    assert frozenset(LETTER_ATOMS) in letters
