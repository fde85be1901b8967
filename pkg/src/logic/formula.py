"""
Linear temporal formulas whose atoms are heap expressions, and their
semantics over ultimately periodic words (stem followed by a repeated loop).
"""

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Tuple, Union

from src.logic.rite import Rite


@dataclass(frozen=True)
class TrueFormula:
    def __str__(self):
        return "true"


@dataclass(frozen=True)
class Atom:
    rite: Rite

    def __str__(self):
        return f"{{{self.rite}}}"


@dataclass(frozen=True)
class Not:
    body: "Formula"

    def __str__(self):
        return f"!{self.body}"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return f"({self.left} & {self.right})"


@dataclass(frozen=True)
class Next:
    body: "Formula"

    def __str__(self):
        return f"X {self.body}"


@dataclass(frozen=True)
class Until:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return f"({self.left} U {self.right})"


Formula = Union[TrueFormula, Atom, Not, And, Next, Until]

TRUE = TrueFormula()


# --- Derived operators ---

def Or(left: Formula, right: Formula) -> Formula:
    return Not(And(Not(left), Not(right)))


def Implies(left: Formula, right: Formula) -> Formula:
    return Or(Not(left), right)


def Eventually(body: Formula) -> Formula:
    return Until(TRUE, body)


def Always(body: Formula) -> Formula:
    return Not(Eventually(Not(body)))


def children(phi: Formula) -> Tuple[Formula, ...]:
    if isinstance(phi, (Not, Next)):
        return (phi.body,)
    if isinstance(phi, (And, Until)):
        return (phi.left, phi.right)
    return ()


def subformulas(phi: Formula) -> List[Formula]:
    """Distinct subformulas, every child listed before its parents."""
    order: List[Formula] = []
    seen = set()

    def visit(psi: Formula):
        if psi in seen:
            return
        for child in children(psi):
            visit(child)
        seen.add(psi)
        order.append(psi)

    visit(phi)
    return order


def atoms(phi: Formula) -> FrozenSet[Rite]:
    return frozenset(psi.rite for psi in subformulas(phi) if isinstance(psi, Atom))


Letter = FrozenSet[Rite]


@dataclass(frozen=True)
class LassoWord:
    """The infinite word ``stem`` followed by ``loop`` repeated forever."""

    stem: Tuple[Letter, ...]
    loop: Tuple[Letter, ...]

    def __post_init__(self):
        if not self.loop:
            raise ValueError("the loop of a lasso word must be nonempty")

    @classmethod
    def of(cls, stem: Iterable[Iterable[Rite]], loop: Iterable[Iterable[Rite]]) -> "LassoWord":
        return cls(tuple(frozenset(a) for a in stem), tuple(frozenset(a) for a in loop))

    def __len__(self):
        return len(self.stem) + len(self.loop)

    def letter(self, i: int) -> Letter:
        return self.stem[i] if i < len(self.stem) else self.loop[i - len(self.stem)]

    def successor(self, i: int) -> int:
        return i + 1 if i + 1 < len(self) else len(self.stem)

    def __str__(self):
        def letter_text(a: Letter) -> str:
            return "{" + ",".join(sorted(str(r) for r in a)) + "}"

        stem = " ".join(letter_text(a) for a in self.stem)
        loop = " ".join(letter_text(a) for a in self.loop)
        return f"{stem} | {loop}"


def word_sat(w: LassoWord, phi: Formula) -> bool:
    """Decides whether the lasso word satisfies ``phi`` at position 0."""
    size = len(w)
    values: Dict[Formula, List[bool]] = {}

    for psi in subformulas(phi):
        if isinstance(psi, TrueFormula):
            row = [True] * size
        elif isinstance(psi, Atom):
            row = [psi.rite in w.letter(i) for i in range(size)]
        elif isinstance(psi, Not):
            row = [not v for v in values[psi.body]]
        elif isinstance(psi, And):
            left, right = values[psi.left], values[psi.right]
            row = [a and b for a, b in zip(left, right)]
        elif isinstance(psi, Next):
            body = values[psi.body]
            row = [body[w.successor(i)] for i in range(size)]
        else:
            left, right = values[psi.left], values[psi.right]
            # least fixpoint of U = right | (left & X U)
            row = [False] * size
            changed = True
            while changed:
                changed = False
                for i in reversed(range(size)):
                    value = right[i] or (left[i] and row[w.successor(i)])
                    if value and not row[i]:
                        row[i] = True
                        changed = True
        values[psi] = row

    return values[phi][0]
