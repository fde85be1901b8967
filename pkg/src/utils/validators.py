import re
from typing import Iterable

from src.exceptions import ProgramValidationError
from src.syntax import (
    NIL, Call, FieldRead, FieldWrite, GuardEq, GuardNeq, New, ProgramDecl, VarCopy,
    sub_statements,
)

# c0, c1, ... are cut point variables; oc is the allocation counter
CUT_VARIABLE_RE = re.compile(r'^c(0|[1-9][0-9]*)$')
COUNTER_NAME = "oc"


def is_cut_variable(name: str) -> bool:
    return bool(CUT_VARIABLE_RE.match(name))


def cut_variable(index: int) -> str:
    return f"c{index}"


def is_reserved(name: str) -> bool:
    return name == COUNTER_NAME or is_cut_variable(name)


def _check_names(kind: str, names: Iterable[str]):
    for name in names:
        if is_reserved(name):
            raise ProgramValidationError(f"{name} is reserved and cannot be declared as a {kind}")


def validate_program(prog: ProgramDecl) -> ProgramDecl:
    """
    Checks the static well-formedness rules of a program:
    disjoint name spaces, nil declared and constant, no reserved names,
    every name used is declared and the initial procedure exists.
    """
    if NIL not in prog.globals:
        raise ProgramValidationError("nil must be a global variable")

    _check_names("global", prog.globals)
    _check_names("local", prog.locals)
    _check_names("field", prog.fields)
    _check_names("procedure", prog.procs)

    overlap = prog.globals & prog.locals
    if overlap:
        raise ProgramValidationError(f"declared both global and local: {', '.join(sorted(overlap))}")

    spaces = {"variable": prog.variables, "field": prog.fields, "procedure": frozenset(prog.procs)}
    kinds = list(spaces)
    for i, first in enumerate(kinds):
        for second in kinds[i + 1:]:
            clash = spaces[first] & spaces[second]
            if clash:
                raise ProgramValidationError(
                    f"name used as both {first} and {second}: {', '.join(sorted(clash))}"
                )

    if prog.initial not in prog.procs:
        raise ProgramValidationError(f"missing procedure {prog.initial}")

    for proc, body in prog.procs.items():
        for stmt in sub_statements(body):
            _validate_statement(prog, proc, stmt)

    return prog


def _validate_statement(prog: ProgramDecl, proc: str, stmt):
    def variable(name: str):
        if is_reserved(name):
            raise ProgramValidationError(f"{name} is reserved (in {proc})")
        if name not in prog.variables:
            raise ProgramValidationError(f"undeclared variable {name} (in {proc})")

    def assigned(name: str):
        variable(name)
        if name == NIL:
            raise ProgramValidationError(f"nil is constant (in {proc})")

    def field_name(name: str):
        if name not in prog.fields:
            raise ProgramValidationError(f"undeclared field {name} (in {proc})")

    if isinstance(stmt, FieldWrite):
        assigned(stmt.target)
        field_name(stmt.field)
        variable(stmt.source)
    elif isinstance(stmt, FieldRead):
        assigned(stmt.target)
        variable(stmt.source)
        field_name(stmt.field)
    elif isinstance(stmt, New):
        assigned(stmt.target)
    elif isinstance(stmt, VarCopy):
        assigned(stmt.target)
        variable(stmt.source)
    elif isinstance(stmt, (GuardEq, GuardNeq)):
        variable(stmt.left)
        variable(stmt.right)
    elif isinstance(stmt, Call):
        if stmt.proc not in prog.procs:
            raise ProgramValidationError(f"undeclared procedure {stmt.proc} (in {proc})")
