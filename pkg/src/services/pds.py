"""
The k-bounded pushdown system of a program, generated on the fly from the
abstract semantics. Controls are normalized heaps or TOP (out of bound);
stack symbols are statements, saved heaps, or the bottom marker Z.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Tuple, Union

from src.heap import Heap, visible_size
from src.services.semantics import AbstractSemantics, Config, initial_heap
from src.syntax import ProgramDecl, Stmt

logger = logging.getLogger(__name__)


class Marker(Enum):
    Z = "Z"
    TOP = "TOP"

    def __str__(self):
        return self.value


Z = Marker.Z
TOP = Marker.TOP

Control = Union[Heap, Marker]
StackSym = Union[Stmt, Heap, Marker]
Word = Tuple[StackSym, ...]
RuleTarget = Tuple[Control, Word]


@dataclass(frozen=True)
class Head:
    control: Control
    top: StackSym


class PushdownSystem:
    """Successor oracle of the k-bounded system; rules are computed once per head."""

    def __init__(self, prog: ProgramDecl, k: int):
        self.prog = prog
        self.k = k
        self.semantics = AbstractSemantics(prog)
        self._rules: Dict[Head, Tuple[RuleTarget, ...]] = {}

    def initial(self) -> RuleTarget:
        return initial_heap(self.prog), (self.prog.entry, Z)

    def successors(self, head: Head) -> Tuple[RuleTarget, ...]:
        cached = self._rules.get(head)
        if cached is None:
            cached = self._compute(head)
            self._rules[head] = cached
        return cached

    def _compute(self, head: Head) -> Tuple[RuleTarget, ...]:
        if head.control is TOP:
            return ((TOP, (head.top,)),)
        if head.top is Z:
            return ((head.control, (Z,)),)

        steps = self.semantics.step(Config(head.control, (head.top,)))
        if not steps:
            return ((head.control, (Z,)),)

        targets = []
        for successor in steps:
            if visible_size(successor.current) > self.k:
                target = (TOP, (head.top,))
            else:
                target = (successor.current, successor.stack)
            if len(target[1]) > 2:
                raise AssertionError(f"rule pushes more than two symbols: {target[1]}")
            if target not in targets:
                targets.append(target)
        return tuple(targets)

    @property
    def discovered_rules(self) -> Dict[Head, Tuple[RuleTarget, ...]]:
        return dict(self._rules)


def successors_k(head: Head, prog: ProgramDecl, k: int) -> Tuple[RuleTarget, ...]:
    return PushdownSystem(prog, k).successors(head)
