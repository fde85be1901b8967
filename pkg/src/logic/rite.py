"""
Regular heap expressions: tests on variables, field actions, and the
Kleene operators over them. An expression relates identities of a heap;
a heap satisfies it when every reachable identity has some target.
"""

from collections import deque
from dataclasses import dataclass
from typing import FrozenSet, Set, Union

from src.heap import Heap, Identity, all_reachable


@dataclass(frozen=True)
class Eps:
    def __str__(self):
        return "eps"


@dataclass(frozen=True)
class Test:
    var: str

    def __str__(self):
        return self.var


@dataclass(frozen=True)
class NegTest:
    var: str

    def __str__(self):
        return f"~{self.var}"


@dataclass(frozen=True)
class Act:
    field: str

    def __str__(self):
        return self.field


@dataclass(frozen=True)
class Cat:
    left: "Rite"
    right: "Rite"

    def __str__(self):
        return f"{_text(self.left, 1)}.{_text(self.right, 2)}"


@dataclass(frozen=True)
class Alt:
    left: "Rite"
    right: "Rite"

    def __str__(self):
        return f"{_text(self.left, 0)}+{_text(self.right, 1)}"


@dataclass(frozen=True)
class Star:
    body: "Rite"

    def __str__(self):
        return f"{_text(self.body, 3)}*"


Rite = Union[Eps, Test, NegTest, Act, Cat, Alt, Star]

# binding strength used when rendering: + < . < *
_PRECEDENCE = {Alt: 0, Cat: 1, Star: 2}


def _text(r: Rite, context: int) -> str:
    text = str(r)
    if _PRECEDENCE.get(type(r), 3) < context:
        return f"({text})"
    return text


def rite_targets(h: Heap, r: Rite, n: Identity) -> FrozenSet[Identity]:
    """All m with n related to m by ``r`` in ``h``."""
    if isinstance(r, Eps):
        return frozenset({n})
    if isinstance(r, Test):
        return frozenset({n}) if h.get(r.var) == n else frozenset()
    if isinstance(r, NegTest):
        return frozenset({n}) if h.get(r.var) != n else frozenset()
    if isinstance(r, Act):
        return frozenset({h.deref(r.field, n)})
    if isinstance(r, Alt):
        return rite_targets(h, r.left, n) | rite_targets(h, r.right, n)
    if isinstance(r, Cat):
        result: Set[Identity] = set()
        for m in rite_targets(h, r.left, n):
            result |= rite_targets(h, r.right, m)
        return frozenset(result)
    if isinstance(r, Star):
        seen = {n}
        queue = deque([n])
        while queue:
            m = queue.popleft()
            for target in rite_targets(h, r.body, m):
                if target not in seen:
                    seen.add(target)
                    queue.append(target)
        return frozenset(seen)
    raise TypeError(f"not a heap expression: {r!r}")


def heap_sat(h: Heap, r: Rite) -> bool:
    return all(rite_targets(h, r, n) for n in all_reachable(h))

