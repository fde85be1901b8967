import logging

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedEOF, UnexpectedInput, VisitError

from src.exceptions import FormulaError, ShylockError
from src.logic.formula import (
    TRUE, Always, And, Atom, Eventually, Formula, Implies, Next, Not, Or, Until,
)
from src.logic.rite import Act, Alt, Cat, Eps, NegTest, Star, Test
from src.services.program_parser import describe_unexpected, error_location
from src.syntax import ProgramDecl

logger = logging.getLogger(__name__)

# -> < | < & < U < unary operators; inside braces + < . < *
FORMULA_GRAMMAR = r"""
    ?start: implication

    ?implication: disjunction
                | disjunction "->" implication  -> implies
    ?disjunction: conjunction
                | disjunction "|" conjunction   -> or_
    ?conjunction: until
                | conjunction "&" until         -> and_
    ?until: unary
          | unary "U" until                     -> until
    ?unary: "!" unary                           -> not_
          | "X" unary                           -> next
          | "F" unary                           -> eventually
          | "G" unary                           -> always
          | primary
    ?primary: "true"                            -> true
            | "{" alt "}"                       -> atom
            | "(" implication ")"

    ?alt: cat
        | alt "+" cat                           -> alt
    ?cat: star
        | cat "." star                          -> cat
    ?star: rite_primary
         | star "*"                             -> star
    ?rite_primary: "eps"                        -> eps
                 | NAME                         -> name
                 | "~" NAME                     -> neg_test
                 | "(" alt ")"

    NAME: /[A-Za-z_][A-Za-z0-9_]*/

    %import common.WS
    %ignore WS
"""


@v_args(inline=True)
class FormulaBuilder(Transformer):
    def __init__(self, prog: ProgramDecl):
        super().__init__()
        self.prog = prog

    def implies(self, left, right):
        return Implies(left, right)

    def or_(self, left, right):
        return Or(left, right)

    def and_(self, left, right):
        return And(left, right)

    def until(self, left, right):
        return Until(left, right)

    def not_(self, body):
        return Not(body)

    def next(self, body):
        return Next(body)

    def eventually(self, body):
        return Eventually(body)

    def always(self, body):
        return Always(body)

    def true(self):
        return TRUE

    def atom(self, rite):
        return Atom(rite)

    def alt(self, left, right):
        return Alt(left, right)

    def cat(self, left, right):
        return Cat(left, right)

    def star(self, body):
        return Star(body)

    def eps(self):
        return Eps()

    def name(self, token):
        name = str(token)
        if name in self.prog.variables:
            return Test(name)
        if name in self.prog.fields:
            return Act(name)
        raise FormulaError(f"{name} is neither a declared variable nor a field", token.line, token.column)

    def neg_test(self, token):
        name = str(token)
        if name not in self.prog.variables:
            raise FormulaError(f"~{name} needs a declared variable", token.line, token.column)
        return NegTest(name)


class FormulaParser:
    """Parses temporal formulas, resolving atom identifiers against a program's declarations."""

    def __init__(self):
        self.parser = Lark(FORMULA_GRAMMAR, parser="lalr", lexer="contextual")

    def parse(self, text: str, prog: ProgramDecl) -> Formula:
        try:
            tree = self.parser.parse(text)
        except UnexpectedEOF as e:
            raise FormulaError("unexpected end of formula") from e
        except UnexpectedInput as e:
            line, column = error_location(e)
            message = f"cannot parse formula {text!r}: unexpected {describe_unexpected(e)}"
            raise FormulaError(message, line, column) from e

        try:
            phi = FormulaBuilder(prog).transform(tree)
        except VisitError as e:
            if isinstance(e.orig_exc, ShylockError):
                raise e.orig_exc from None
            raise
        logger.info(f"Parsed formula {phi}")
        return phi


_default_parser = None


def parse_formula(text: str, prog: ProgramDecl) -> Formula:
    global _default_parser
    if _default_parser is None:
        _default_parser = FormulaParser()
    return _default_parser.parse(text, prog)
