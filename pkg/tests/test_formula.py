import pytest

from src.logic.formula import (
    TRUE, Always, And, Atom, Eventually, LassoWord, Next, Not, Until, atoms, subformulas, word_sat,
)
from src.logic.rite import Eps, Test

R = Test("r")
S = Test("s")


def test_atoms():
    assert atoms(TRUE) == frozenset()
    assert atoms(Always(Atom(Eps()))) == {Eps()}
    assert atoms(Until(Atom(Test("x")), Atom(Test("x")))) == {Test("x")}


def test_subformulas_list_children_first():
    phi = And(Atom(R), Next(Atom(R)))
    assert subformulas(phi) == [Atom(R), Next(Atom(R)), phi]


def test_lasso_positions():
    w = LassoWord.of([[]], [[R], [S]])

    assert len(w) == 3
    assert w.letter(0) == frozenset()
    assert w.letter(2) == {S}
    assert w.successor(2) == 1
    assert str(w) == "{} | {r} {s}"


def test_lasso_needs_a_loop():
    with pytest.raises(ValueError):
        LassoWord.of([[R]], [])


def test_always_on_constant_word():
    assert word_sat(LassoWord.of([], [[R]]), Always(Atom(R)))


def test_atom_is_read_at_the_first_position():
    w = LassoWord.of([[]], [[R]])
    assert not word_sat(w, Atom(R))
    assert word_sat(w, Next(Atom(R)))


def test_eventually_fails_when_never_seen():
    assert not word_sat(LassoWord.of([], [[]]), Eventually(Atom(R)))


def test_until_inside_the_loop():
    w = LassoWord.of([[R]], [[R], [R, S]])
    assert word_sat(w, Until(Atom(R), Atom(S)))
    assert word_sat(w, Until(Atom(S), Atom(R)))
    assert not word_sat(w, Until(Atom(S), Next(Atom(S))))


def test_infinitely_often():
    w = LassoWord.of([[S]], [[], [R]])
    assert word_sat(w, Always(Eventually(Atom(R))))
    assert not word_sat(w, Eventually(Always(Atom(R))))
    assert not word_sat(w, Not(TRUE))
