"""
Abstract syntax of Shylock programs.

Statements are immutable and hashable: they double as the statement part of
the pushdown stack alphabet.
"""

from dataclasses import dataclass, field
from typing import FrozenSet, Iterator, Mapping, Union

NIL = "nil"
MAIN = "main"


@dataclass(frozen=True)
class FieldWrite:
    target: str
    field: str
    source: str

    def __str__(self):
        return f"{self.target}.{self.field} := {self.source}"


@dataclass(frozen=True)
class FieldRead:
    target: str
    source: str
    field: str

    def __str__(self):
        return f"{self.target} := {self.source}.{self.field}"


@dataclass(frozen=True)
class New:
    target: str

    def __str__(self):
        return f"{self.target} := new"


@dataclass(frozen=True)
class VarCopy:
    target: str
    source: str

    def __str__(self):
        return f"{self.target} := {self.source}"


@dataclass(frozen=True)
class GuardEq:
    left: str
    right: str
    body: "Stmt"

    def __str__(self):
        return f"[{self.left} = {self.right}] {_basic_text(self.body)}"


@dataclass(frozen=True)
class GuardNeq:
    left: str
    right: str
    body: "Stmt"

    def __str__(self):
        return f"[{self.left} != {self.right}] {_basic_text(self.body)}"


@dataclass(frozen=True)
class Choice:
    left: "Stmt"
    right: "Stmt"

    def __str__(self):
        left = f"{{ {self.left} }}" if isinstance(self.left, Choice) else str(self.left)
        return f"{left} + {self.right}"


@dataclass(frozen=True)
class Seq:
    first: "Stmt"
    second: "Stmt"

    def __str__(self):
        first = f"{{ {self.first} }}" if isinstance(self.first, (Seq, Choice)) else str(self.first)
        second = f"{{ {self.second} }}" if isinstance(self.second, Choice) else str(self.second)
        return f"{first}; {second}"


@dataclass(frozen=True)
class Call:
    proc: str

    def __str__(self):
        return self.proc


Stmt = Union[FieldWrite, FieldRead, New, VarCopy, GuardEq, GuardNeq, Choice, Seq, Call]

ASSIGNMENTS = (FieldWrite, FieldRead, New, VarCopy)
GUARDS = (GuardEq, GuardNeq)


def _basic_text(stmt: Stmt) -> str:
    if isinstance(stmt, (Seq, Choice)):
        return f"{{ {stmt} }}"
    return str(stmt)


@dataclass(frozen=True)
class ProgramDecl:
    globals: FrozenSet[str]
    locals: FrozenSet[str]
    fields: FrozenSet[str]
    procs: Mapping[str, Stmt] = field(hash=False)
    initial: str = MAIN

    @property
    def variables(self) -> FrozenSet[str]:
        return self.globals | self.locals

    def body(self, proc: str) -> Stmt:
        return self.procs[proc]

    @property
    def entry(self) -> Stmt:
        return self.procs[self.initial]


def ast_text(stmt: Stmt) -> str:
    """Constructor notation, e.g. ``Seq(New(x), Call(p))``."""
    if isinstance(stmt, FieldWrite):
        return f"FieldWrite({stmt.target}, {stmt.field}, {stmt.source})"
    if isinstance(stmt, FieldRead):
        return f"FieldRead({stmt.target}, {stmt.source}, {stmt.field})"
    if isinstance(stmt, New):
        return f"New({stmt.target})"
    if isinstance(stmt, VarCopy):
        return f"VarCopy({stmt.target}, {stmt.source})"
    if isinstance(stmt, GuardEq):
        return f"GuardEq({stmt.left}, {stmt.right}, {ast_text(stmt.body)})"
    if isinstance(stmt, GuardNeq):
        return f"GuardNeq({stmt.left}, {stmt.right}, {ast_text(stmt.body)})"
    if isinstance(stmt, Choice):
        return f"Choice({ast_text(stmt.left)}, {ast_text(stmt.right)})"
    if isinstance(stmt, Seq):
        return f"Seq({ast_text(stmt.first)}, {ast_text(stmt.second)})"
    return f"Call({stmt.proc})"


def sub_statements(stmt: Stmt) -> Iterator[Stmt]:
    yield stmt
    if isinstance(stmt, GUARDS):
        yield from sub_statements(stmt.body)
    elif isinstance(stmt, Choice):
        yield from sub_statements(stmt.left)
        yield from sub_statements(stmt.right)
    elif isinstance(stmt, Seq):
        yield from sub_statements(stmt.first)
        yield from sub_statements(stmt.second)


def statement_closure(stmt: Stmt) -> FrozenSet[Stmt]:
    """cl(B): sequences contribute only their parts, choices and guards also themselves."""
    if isinstance(stmt, Seq):
        return statement_closure(stmt.first) | statement_closure(stmt.second)
    if isinstance(stmt, Choice):
        return statement_closure(stmt.left) | statement_closure(stmt.right) | {stmt}
    if isinstance(stmt, GUARDS):
        return statement_closure(stmt.body) | {stmt}
    return frozenset({stmt})


def closure(prog: ProgramDecl) -> FrozenSet[Stmt]:
    result: FrozenSet[Stmt] = frozenset()
    for body in prog.procs.values():
        result |= statement_closure(body)
    return result


def stack_alphabet(prog: ProgramDecl) -> FrozenSet[Stmt]:
    """Every statement that can sit on the stack: the closure plus sequences and bodies."""
    symbols = set(closure(prog))
    for body in prog.procs.values():
        symbols.add(body)
        symbols.update(s for s in sub_statements(body) if isinstance(s, Seq))
    return frozenset(symbols)

