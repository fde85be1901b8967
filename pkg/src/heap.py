"""
Heaps over object identities and the heap-level mathematics used by both
semantics: reachability, the purely local part, cut points, renamings,
isomorphism and normalization.

An identity is a natural number or ``BOT`` (the undefined object). A heap
stores every declared variable, the cut point variables that are currently
active (bound to a natural) and, per field, only the entries whose image is
defined. Absent entries read as ``BOT``, which also gives h(f)(BOT) = BOT.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

from src.exceptions import HeapError
from src.syntax import NIL, ProgramDecl
from src.utils.validators import is_cut_variable

logger = logging.getLogger(__name__)

Identity = Optional[int]
BOT: Identity = None


def format_identity(n: Identity) -> str:
    return "bot" if n is BOT else str(n)


@dataclass(frozen=True)
class HeapLayout:
    """The declared variable and field universe a heap ranges over."""

    globals: FrozenSet[str]
    locals: FrozenSet[str]
    fields: FrozenSet[str]

    @classmethod
    def of(cls, prog: ProgramDecl) -> "HeapLayout":
        return cls(frozenset(prog.globals), frozenset(prog.locals), frozenset(prog.fields))

    @classmethod
    def create(cls, globals: Iterable[str], locals: Iterable[str], fields: Iterable[str]) -> "HeapLayout":
        return cls(frozenset(globals) | {NIL}, frozenset(locals), frozenset(fields))


@dataclass(frozen=True)
class Heap:
    layout: HeapLayout = field(compare=False, repr=False)
    vars: Tuple[Tuple[str, Identity], ...]
    fields: Tuple[Tuple[str, Tuple[Tuple[int, int], ...]], ...]

    @classmethod
    def build(
        cls,
        layout: HeapLayout,
        vars: Optional[Mapping[str, Identity]] = None,
        fields: Optional[Mapping[str, Mapping[int, Identity]]] = None,
    ) -> "Heap":
        """Canonical constructor: missing declared variables read BOT, BOT entries are dropped."""
        vars = dict(vars or {})
        fields = fields or {}

        values: Dict[str, Identity] = {name: BOT for name in layout.globals | layout.locals}
        for name, value in vars.items():
            if name not in values and not is_cut_variable(name):
                raise HeapError(f"unknown variable {name}")
            _check_identity(value)
            if value is BOT and is_cut_variable(name):
                continue
            values[name] = value
        if values.get(NIL, BOT) is not BOT:
            raise HeapError("nil must be undefined")

        maps = []
        for fname in sorted(layout.fields):
            entries = []
            for src, tgt in (fields.get(fname) or {}).items():
                if src is BOT:
                    continue
                _check_identity(src)
                _check_identity(tgt)
                if tgt is not BOT:
                    entries.append((src, tgt))
            maps.append((fname, tuple(sorted(entries))))
        unknown = set(fields) - layout.fields
        if unknown:
            raise HeapError(f"unknown field {', '.join(sorted(unknown))}")

        return cls(layout, tuple(sorted(values.items())), tuple(maps))

    @classmethod
    def initial(cls, layout: HeapLayout) -> "Heap":
        return cls.build(layout)

    @cached_property
    def _var_map(self) -> Dict[str, Identity]:
        return dict(self.vars)

    @cached_property
    def _field_maps(self) -> Dict[str, Dict[int, int]]:
        return {fname: dict(entries) for fname, entries in self.fields}

    @property
    def variable_names(self) -> Tuple[str, ...]:
        return tuple(name for name, _ in self.vars)

    @property
    def cut_variables(self) -> Tuple[str, ...]:
        return tuple(name for name, _ in self.vars if is_cut_variable(name))

    @property
    def field_names(self) -> Tuple[str, ...]:
        return tuple(fname for fname, _ in self.fields)

    def get(self, name: str) -> Identity:
        if name in self._var_map:
            return self._var_map[name]
        if is_cut_variable(name):
            return BOT
        raise HeapError(f"unknown variable {name}")

    def deref(self, fname: str, n: Identity) -> Identity:
        try:
            entries = self._field_maps[fname]
        except KeyError:
            raise HeapError(f"unknown field {fname}") from None
        if n is BOT:
            return BOT
        return entries.get(n, BOT)

    def field_map(self, fname: str) -> Dict[int, int]:
        return dict(self._field_maps[fname])

    def assign(self, updates: Mapping[str, Identity]) -> "Heap":
        values = dict(self._var_map)
        values.update(updates)
        return Heap.build(self.layout, values, self._field_maps)

    def write_field(self, fname: str, n: int, m: Identity) -> "Heap":
        maps = {f: dict(entries) for f, entries in self._field_maps.items()}
        if fname not in maps:
            raise HeapError(f"unknown field {fname}")
        maps[fname][n] = m
        return Heap.build(self.layout, self._var_map, maps)

    def clear_object(self, n: int) -> "Heap":
        """Sets every field of ``n`` to BOT."""
        maps = {f: {s: t for s, t in entries.items() if s != n} for f, entries in self._field_maps.items()}
        return Heap.build(self.layout, self._var_map, maps)

    def replace(self, vars: Mapping[str, Identity], fields: Mapping[str, Mapping[int, Identity]]) -> "Heap":
        return Heap.build(self.layout, vars, fields)


def _check_identity(n: Identity):
    if n is not BOT and (not isinstance(n, int) or isinstance(n, bool) or n < 0):
        raise HeapError(f"invalid identity {n!r}")


# --- Reachability ---

def reachable(h: Heap, names: Iterable[str]) -> FrozenSet[Identity]:
    """Least set containing the values of ``names`` and closed under every field."""
    seen = set()
    queue = deque()
    for name in names:
        n = h.get(name)
        if n not in seen:
            seen.add(n)
            queue.append(n)
    while queue:
        n = queue.popleft()
        if n is BOT:
            continue
        for fname in h.field_names:
            m = h.deref(fname, n)
            if m not in seen:
                seen.add(m)
                queue.append(m)
    return frozenset(seen)


def global_names(h: Heap) -> List[str]:
    return sorted(h.layout.globals)


def local_side_names(h: Heap) -> List[str]:
    """Locals plus the active cut point variables (the L ∪ C side)."""
    return sorted(h.layout.locals) + list(h.cut_variables)


def all_reachable(h: Heap) -> FrozenSet[Identity]:
    return reachable(h, h.variable_names)


def purely_local(h: Heap) -> FrozenSet[Identity]:
    return reachable(h, local_side_names(h)) - reachable(h, global_names(h))


def cut_points(h: Heap) -> FrozenSet[int]:
    global_part = reachable(h, global_names(h)) - {BOT}
    pointed = {h.get(name) for name in local_side_names(h)}
    for n in purely_local(h):
        for fname in h.field_names:
            pointed.add(h.deref(fname, n))
    return frozenset(global_part & pointed)


def discovery_order(h: Heap) -> List[Identity]:
    """Breadth-first order from the variables sorted by name, fields sorted by name.

    Isomorphic heaps list corresponding identities at the same positions.
    """
    order: List[Identity] = []
    seen = set()
    queue = deque()
    for name in h.variable_names:
        n = h.get(name)
        if n not in seen:
            seen.add(n)
            order.append(n)
            queue.append(n)
    while queue:
        n = queue.popleft()
        if n is BOT:
            continue
        for fname in h.field_names:
            m = h.deref(fname, n)
            if m not in seen:
                seen.add(m)
                order.append(m)
                queue.append(m)
    return order


def ordered_cut_points(h: Heap) -> List[int]:
    points = cut_points(h)
    return [n for n in discovery_order(h) if n in points]


def visible_size(h: Heap) -> int:
    return len(all_reachable(h) - {BOT})


# --- Renamings ---

@dataclass(frozen=True)
class Renaming:
    """A permutation of the naturals made of disjoint transpositions; fixes BOT."""

    swaps: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        touched = [n for pair in self.swaps for n in pair]
        if len(touched) != len(set(touched)):
            raise HeapError(f"transpositions overlap: {self.swaps}")
        for n in touched:
            _check_identity(n)
            if n is BOT:
                raise HeapError("renamings fix bot")

    @cached_property
    def _table(self) -> Dict[int, int]:
        table = {}
        for a, b in self.swaps:
            table[a] = b
            table[b] = a
        return table

    def __call__(self, n: Identity) -> Identity:
        if n is BOT:
            return BOT
        return self._table.get(n, n)

    @property
    def inverse(self) -> "Renaming":
        return self


def apply_renaming(r: Renaming, h: Heap) -> Heap:
    if not r.swaps:
        return h
    vars = {name: r(value) for name, value in h.vars}
    # rho(H)(f)(n) = rho(H(f)(rho^-1(n))): the entry at src moves to rho(src)
    maps = {
        fname: {r(src): r(tgt) for src, tgt in entries}
        for fname, entries in h.fields
    }
    return h.replace(vars, maps)


# --- Isomorphism and normalization ---

def isomorphic(h1: Heap, h2: Heap) -> Optional[Dict[Identity, Identity]]:
    """The unique bijection between reachable identities that respects
    variables and fields, or None when the heaps are not isomorphic."""
    if h1.field_names != h2.field_names:
        raise HeapError("heaps range over different fields")

    alpha: Dict[Identity, Identity] = {BOT: BOT}
    inverse: Dict[Identity, Identity] = {BOT: BOT}
    queue = deque()

    def relate(a: Identity, b: Identity) -> bool:
        if a in alpha:
            return alpha[a] == b
        if b in inverse:
            return False
        alpha[a] = b
        inverse[b] = a
        queue.append(a)
        return True

    for name in sorted(set(h1.variable_names) | set(h2.variable_names)):
        if not relate(h1.get(name), h2.get(name)):
            return None

    while queue:
        a = queue.popleft()
        b = alpha[a]
        for fname in h1.field_names:
            if not relate(h1.deref(fname, a), h2.deref(fname, b)):
                return None
    return alpha


def normalize(h: Heap) -> Heap:
    """Drops field entries whose source is unreachable."""
    live = all_reachable(h)
    maps = {
        fname: {src: tgt for src, tgt in entries if src in live}
        for fname, entries in h.fields
    }
    return h.replace(dict(h.vars), maps)


# --- Dump format ---

def dump_lines(h: Heap) -> List[str]:
    lines = [f"var {name} = {format_identity(value)}" for name, value in sorted(h.vars)]
    sources = sorted(n for n in all_reachable(h) if n is not BOT)
    for fname in sorted(h.field_names):
        entries = ", ".join(f"{n} -> {format_identity(h.deref(fname, n))}" for n in sources)
        lines.append(f"field {fname}: {entries}" if entries else f"field {fname}:")
    return lines


def dump_heap(h: Heap) -> str:
    return "\n".join(dump_lines(h))


def dump_heap_line(h: Heap) -> str:
    return "; ".join(dump_lines(h))
