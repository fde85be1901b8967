import logging
from typing import List

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedEOF, UnexpectedInput, VisitError

from src.exceptions import ProgramSyntaxError, ShylockError
from src.syntax import (
    NIL, Call, Choice, FieldRead, FieldWrite, GuardEq, GuardNeq, New, ProgramDecl, Seq, Stmt, VarCopy,
)
from src.utils.validators import validate_program

logger = logging.getLogger(__name__)

PROGRAM_GRAMMAR = r"""
    start: decls proc+

    decls: "globals" idlist ";" "locals" idlist ";" "fields" idlist ";"
    idlist: (NAME ("," NAME)*)?

    proc: "proc" NAME "{" stmt "}"

    stmt: seq ("+" seq)*
    seq: basic (";" basic)*

    ?basic: NAME "." NAME ":=" NAME         -> field_write
          | NAME ":=" NAME "." NAME         -> field_read
          | NAME ":=" "new"                 -> new
          | NAME ":=" NAME                  -> var_copy
          | "[" NAME "=" NAME "]" basic     -> guard_eq
          | "[" NAME "!=" NAME "]" basic    -> guard_neq
          | NAME                            -> call
          | "{" stmt "}"

    NAME: /[A-Za-z_][A-Za-z0-9_]*/
    COMMENT: /\/\/[^\n]*/

    %import common.WS
    %ignore WS
    %ignore COMMENT
"""


def _right_nested(parts: List[Stmt], node) -> Stmt:
    result = parts[-1]
    for part in reversed(parts[:-1]):
        result = node(part, result)
    return result


@v_args(inline=True)
class ProgramBuilder(Transformer):
    def start(self, decls, *procs):
        globals_, locals_, fields = decls
        bodies = {}
        for name, body in procs:
            if name in bodies:
                raise ProgramSyntaxError(f"duplicate procedure {name}")
            bodies[name] = body
        return ProgramDecl(
            globals=frozenset(globals_) | {NIL},
            locals=frozenset(locals_),
            fields=frozenset(fields),
            procs=bodies,
        )

    def decls(self, globals_, locals_, fields):
        return globals_, locals_, fields

    def idlist(self, *names: Token):
        return [str(name) for name in names]

    def proc(self, name, body):
        return str(name), body

    def stmt(self, *parts):
        return _right_nested(list(parts), Choice)

    def seq(self, *parts):
        return _right_nested(list(parts), Seq)

    def field_write(self, target, field, source):
        return FieldWrite(str(target), str(field), str(source))

    def field_read(self, target, source, field):
        return FieldRead(str(target), str(source), str(field))

    def new(self, target):
        return New(str(target))

    def var_copy(self, target, source):
        return VarCopy(str(target), str(source))

    def guard_eq(self, left, right, body):
        return GuardEq(str(left), str(right), body)

    def guard_neq(self, left, right, body):
        return GuardNeq(str(left), str(right), body)

    def call(self, proc):
        return Call(str(proc))


class ProgramParser:
    """Parses ``.shy`` program text into a validated ProgramDecl."""

    def __init__(self):
        self.parser = Lark(PROGRAM_GRAMMAR, parser="lalr", lexer="contextual")

    def parse(self, text: str) -> ProgramDecl:
        try:
            tree = self.parser.parse(text)
        except UnexpectedEOF as e:
            raise ProgramSyntaxError("unexpected end of input") from e
        except UnexpectedInput as e:
            line, column = error_location(e)
            raise ProgramSyntaxError(f"unexpected {describe_unexpected(e)}", line, column) from e

        try:
            prog = ProgramBuilder().transform(tree)
        except VisitError as e:
            if isinstance(e.orig_exc, ShylockError):
                raise e.orig_exc from None
            raise

        validate_program(prog)
        logger.info(
            f"Parsed program with {len(prog.procs)} procedures, "
            f"{len(prog.globals)} globals, {len(prog.locals)} locals, {len(prog.fields)} fields"
        )
        return prog


def error_location(e: UnexpectedInput):
    line = getattr(e, "line", None)
    if not isinstance(line, int) or line < 0:
        return None, None
    return line, e.column


def describe_unexpected(e: UnexpectedInput) -> str:
    token = getattr(e, "token", None)
    if token is not None:
        # the LALR parser reports a premature end as the $END token
        return "end of input" if token.type == "$END" else f"input {str(token)!r}"
    char = getattr(e, "char", None)
    return f"input {char!r}" if char is not None else "input"


_default_parser = None


def parse_program(text: str) -> ProgramDecl:
    global _default_parser
    if _default_parser is None:
        _default_parser = ProgramParser()
    return _default_parser.parse(text)


def load_program(path: str) -> ProgramDecl:
    with open(path, encoding="utf-8") as handle:
        return parse_program(handle.read())
