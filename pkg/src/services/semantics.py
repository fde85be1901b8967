"""
Small-step semantics of Shylock programs.

Both semantics share every rule except allocation, call and return:

* concrete: ``new`` takes the next value of an external counter, a return
  restores the caller's locals and cut point variables;
* abstract: ``new`` reuses the least identity not reachable from any variable,
  a call keeps only what the callee can see (plus cut point variables marking
  the boundary), a return renames clashing callee objects and glues the
  caller's purely local part back. Every abstract heap is normalized.

Step functions return successors as an ordered tuple (left branch of a
choice first) so a seeded scheduler can pick the same branch on both sides.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from src.exceptions import IsomorphismError, NullDereferenceError
from src.heap import (
    BOT, Heap, HeapLayout, Renaming, all_reachable, apply_renaming, cut_points, global_names,
    isomorphic, normalize, ordered_cut_points, purely_local, reachable,
)
from src.syntax import (
    Call, Choice, FieldRead, FieldWrite, GuardEq, GuardNeq, New, ProgramDecl, Seq, Stmt, VarCopy,
)
from src.utils.validators import cut_variable

logger = logging.getLogger(__name__)

Frame = Union[Stmt, Heap]


@dataclass(frozen=True)
class Config:
    current: Heap
    stack: Tuple[Frame, ...]  # stack[0] is the top
    counter: Optional[int] = None

    @property
    def top(self) -> Optional[Frame]:
        return self.stack[0] if self.stack else None

    @property
    def depth(self) -> int:
        return len(self.stack)

    def heaps(self) -> List[Heap]:
        """The current heap followed by the saved heaps, top to bottom."""
        return [self.current] + [frame for frame in self.stack if isinstance(frame, Heap)]


@dataclass(frozen=True)
class Step:
    rule: str
    config: Config


# --- Heap operations of the abstract semantics ---

def fresh_min(h: Heap) -> int:
    used = all_reachable(h)
    n = 0
    while n in used:
        n += 1
    return n


def bind_cut_points(h: Heap) -> Heap:
    """Clears locals and old cut point variables, then binds c0, c1, ... to the cut points of ``h``."""
    updates = {name: BOT for name in h.layout.locals}
    updates.update({name: BOT for name in h.cut_variables})
    updates.update({cut_variable(i): n for i, n in enumerate(ordered_cut_points(h))})
    return h.assign(updates)


def call_heap(h: Heap) -> Heap:
    return normalize(bind_cut_points(h))


def restore_caller(hc: Heap, hl: Heap) -> Heap:
    """hc with the locals and cut point variables of hl."""
    updates = {name: hl.get(name) for name in hl.layout.locals}
    updates.update({name: BOT for name in hc.cut_variables})
    updates.update({name: hl.get(name) for name in hl.cut_variables})
    return hc.assign(updates)


def return_renaming(hc: Heap, hl: Heap) -> Renaming:
    """Swaps every caller-local identity the callee reused with the least free identities."""
    outer = reachable(hc, global_names(hc) + list(hc.cut_variables))
    local_part = purely_local(hl)
    clashes = sorted(n for n in local_part & outer)
    taken = outer | local_part
    targets = []
    n = 0
    while len(targets) < len(clashes):
        if n not in taken:
            targets.append(n)
        n += 1
    return Renaming(tuple(zip(clashes, targets)))


def return_combine(hc: Heap, hl: Heap) -> Heap:
    rho = return_renaming(hc, hl)
    renamed = restore_caller(apply_renaming(rho, hc), hl)
    local_part = purely_local(hl)
    fields = {}
    for fname in renamed.field_names:
        entries = {n: m for n, m in renamed.field_map(fname).items() if n not in local_part}
        entries.update({n: hl.deref(fname, n) for n in local_part})
        fields[fname] = entries
    if rho.swaps:
        logger.debug(f"return renames {rho.swaps}")
    return normalize(renamed.replace(dict(renamed.vars), fields))


# --- Properness and cut point identification ---

def is_proper(heaps: Sequence[Heap]) -> bool:
    """Checks a top-to-bottom sequence of heaps: each one must leave the
    purely local part of the heap below untouched and unreachable."""
    for above, below in zip(heaps, heaps[1:]):
        local_part = purely_local(below)
        for n in local_part:
            for fname in below.field_names:
                if above.deref(fname, n) != below.deref(fname, n):
                    return False
        shared = all_reachable(below) & all_reachable(above)
        if not shared <= reachable(below, global_names(below)):
            return False
    return True


def cp_identification(hc: Heap, hl: Heap, hc2: Heap, hl2: Heap) -> bool:
    alpha_l = isomorphic(hl, hl2)
    if alpha_l is None:
        raise IsomorphismError("caller heaps are not isomorphic")
    points = sorted(cut_points(hl))
    for n in points:
        names = [c for c in hc.cut_variables if hc.get(c) == n]
        if not any(hc2.get(c) == alpha_l[n] for c in names):
            return False
    # only reached once every cut point has a variable on both sides
    alpha_c = isomorphic(hc, hc2)
    if alpha_c is None:
        raise IsomorphismError("callee heaps are not isomorphic")
    return all(alpha_c.get(n) == alpha_l[n] for n in points)


# --- Transition relations ---

def initial_heap(prog: ProgramDecl) -> Heap:
    return Heap.initial(HeapLayout.of(prog))


class Semantics:
    """Rules shared by both semantics; subclasses decide allocation, call and return."""

    name = "shared"

    def __init__(self, prog: ProgramDecl):
        self.prog = prog

    def initial(self) -> Config:
        raise NotImplementedError

    def allocate(self, c: Config, target: str) -> Config:
        raise NotImplementedError

    def enter(self, h: Heap) -> Heap:
        raise NotImplementedError

    def leave(self, hc: Heap, hl: Heap) -> Heap:
        raise NotImplementedError

    def tidy(self, h: Heap) -> Heap:
        return h

    def transitions(self, c: Config) -> Tuple[Step, ...]:
        if not c.stack:
            return ()
        top, rest = c.stack[0], c.stack[1:]
        h = c.current

        def step(rule: str, heap: Heap, pushed: Iterable[Frame] = (), counter=c.counter) -> Step:
            return Step(rule, Config(heap, tuple(pushed) + rest, counter))

        if isinstance(top, Heap):
            return (step("return", self.leave(h, top)),)
        if isinstance(top, FieldWrite):
            try:
                heap = _write_field(h, top)
            except NullDereferenceError as e:
                logger.debug(f"stuck: {e}")
                return ()
            return (step("field-write", self.tidy(heap)),)
        if isinstance(top, FieldRead):
            heap = h.assign({top.target: h.deref(top.field, h.get(top.source))})
            return (step("field-read", self.tidy(heap)),)
        if isinstance(top, New):
            allocated = self.allocate(c, top.target)
            return (Step("new", Config(allocated.current, rest, allocated.counter)),)
        if isinstance(top, VarCopy):
            heap = h.assign({top.target: h.get(top.source)})
            return (step("copy", self.tidy(heap)),)
        if isinstance(top, (GuardEq, GuardNeq)):
            equal = h.get(top.left) == h.get(top.right)
            if equal != isinstance(top, GuardEq):
                return ()
            return (step("guard", h, (top.body,)),)
        if isinstance(top, Seq):
            return (step("seq", h, (top.first, top.second)),)
        if isinstance(top, Choice):
            return (step("choice", h, (top.left,)), step("choice", h, (top.right,)))
        if isinstance(top, Call):
            return (step("call", self.enter(h), (self.prog.body(top.proc), h)),)
        raise TypeError(f"not a frame: {top!r}")

    def step(self, c: Config) -> Tuple[Config, ...]:
        return tuple(s.config for s in self.transitions(c))


def _write_field(h: Heap, stmt: FieldWrite) -> Heap:
    n = h.get(stmt.target)
    if n is BOT:
        raise NullDereferenceError(f"null dereference on write: {stmt}")
    return h.write_field(stmt.field, n, h.get(stmt.source))


class ConcreteSemantics(Semantics):
    name = "concrete"

    def initial(self) -> Config:
        return Config(initial_heap(self.prog), (self.prog.entry,), 0)

    def allocate(self, c: Config, target: str) -> Config:
        n = c.counter
        heap = c.current.assign({target: n}).clear_object(n)
        return Config(heap, c.stack, n + 1)

    def enter(self, h: Heap) -> Heap:
        return bind_cut_points(h)

    def leave(self, hc: Heap, hl: Heap) -> Heap:
        return restore_caller(hc, hl)


class AbstractSemantics(Semantics):
    name = "abstract"

    def initial(self) -> Config:
        return Config(initial_heap(self.prog), (self.prog.entry,))

    def allocate(self, c: Config, target: str) -> Config:
        n = fresh_min(c.current)
        heap = c.current.assign({target: n}).clear_object(n)
        return Config(normalize(heap), c.stack)

    def enter(self, h: Heap) -> Heap:
        return call_heap(h)

    def leave(self, hc: Heap, hl: Heap) -> Heap:
        return return_combine(hc, hl)

    def tidy(self, h: Heap) -> Heap:
        return normalize(h)


SEMANTICS = {
    ConcreteSemantics.name: ConcreteSemantics,
    AbstractSemantics.name: AbstractSemantics,
}


def concrete_step(c: Config, prog: ProgramDecl) -> Tuple[Config, ...]:
    return ConcreteSemantics(prog).step(c)


def abstract_step(c: Config, prog: ProgramDecl) -> Tuple[Config, ...]:
    return AbstractSemantics(prog).step(c)


def lemma_holds(hc: Heap, hl: Heap) -> bool:
    """At a return, objects the restored locals see beyond the callee's
    global and cut point region must be caller-local."""
    restored = hc.assign({name: hl.get(name) for name in hl.layout.locals})
    outer = reachable(hc, global_names(hc) + list(hc.cut_variables))
    return (all_reachable(restored) - outer) <= purely_local(hl)
