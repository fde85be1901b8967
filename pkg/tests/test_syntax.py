from src.syntax import (
    Call, Choice, FieldWrite, GuardNeq, New, Seq, VarCopy, ast_text, closure,
    stack_alphabet, statement_closure,
)


def test_closure_excludes_sequences():
    # p :: x := new; p
    body = Seq(New("x"), Call("p"))
    assert statement_closure(body) == {New("x"), Call("p")}


def test_closure_keeps_choices():
    body = Choice(Call("a"), Call("b"))
    assert statement_closure(body) == {Call("a"), Call("b"), body}


def test_closure_of_basic_statement():
    stmt = FieldWrite("x", "f", "y")
    assert statement_closure(stmt) == {stmt}


def test_closure_keeps_guards_and_their_bodies():
    guard = GuardNeq("z", "nil", VarCopy("z", "nil"))
    assert statement_closure(guard) == {guard, VarCopy("z", "nil")}


def test_stack_alphabet_adds_sequences_and_bodies(corpus):
    prog = corpus("rec_alloc.shy")
    body = Seq(New("x"), Call("p"))

    assert closure(prog) == {Call("p"), New("x")}
    assert stack_alphabet(prog) == {Call("p"), New("x"), body}


def test_program_text_uses_braces_for_nested_blocks():
    stmt = Seq(Choice(New("x"), Call("p")), VarCopy("y", "x"))
    assert str(stmt) == "{ x := new + p }; y := x"
    assert ast_text(stmt) == "Seq(Choice(New(x), Call(p)), VarCopy(y, x))"


def test_guard_text():
    guard = GuardNeq("z", "nil", Seq(VarCopy("z", "nil"), Call("p")))
    assert str(guard) == "[z != nil] { z := nil; p }"
