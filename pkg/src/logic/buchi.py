"""
Translation of temporal formulas into Büchi automata, and lasso membership.

The translation builds the tableau of elementary sets of subformulas: a state
fixes the truth of every subformula at the current position, reads the
letter its atoms describe, and must agree with its successor on every
``X`` and ``U`` obligation. Each until contributes one acceptance set; the
generalized condition is turned into a plain one with a round-robin counter.
"""

import itertools
import logging
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, List, Tuple

import networkx as nx

from src.logic.formula import (
    And, Atom, Formula, LassoWord, Letter, Next, Not, TrueFormula, Until, atoms, subformulas,
)
from src.logic.rite import Rite

logger = logging.getLogger(__name__)

# a cube: every literal (atom, polarity) must agree with the letter
Guard = FrozenSet[Tuple[Rite, bool]]


def guard_holds(guard: Guard, letter: Letter) -> bool:
    return all((r in letter) == positive for r, positive in guard)


@dataclass(frozen=True)
class BuchiAutomaton:
    states: FrozenSet[int]
    transitions: Tuple[Tuple[int, Guard, int], ...]
    initial: FrozenSet[int]
    accepting: FrozenSet[int]
    atoms: FrozenSet[Rite] = frozenset()

    @cached_property
    def _outgoing(self) -> Dict[int, List[Tuple[Guard, int]]]:
        table: Dict[int, List[Tuple[Guard, int]]] = {q: [] for q in self.states}
        for source, guard, target in self.transitions:
            table[source].append((guard, target))
        return table

    def successors(self, state: int, letter: Letter) -> List[int]:
        """States reachable from ``state`` on ``letter``, in transition order, without repeats."""
        result = []
        for guard, target in self._outgoing.get(state, ()):
            if target not in result and guard_holds(guard, letter):
                result.append(target)
        return result

    def is_accepting(self, state: int) -> bool:
        return state in self.accepting


def _elementary_sets(phi: Formula) -> Tuple[List[Formula], List[Dict[Formula, bool]]]:
    subs = subformulas(phi)
    base = [psi for psi in subs if isinstance(psi, (Atom, Next, Until))]
    elementary = []
    for bits in itertools.product((False, True), repeat=len(base)):
        value: Dict[Formula, bool] = dict(zip(base, bits))
        for psi in subs:
            if isinstance(psi, TrueFormula):
                value[psi] = True
            elif isinstance(psi, Not):
                value[psi] = not value[psi.body]
            elif isinstance(psi, And):
                value[psi] = value[psi.left] and value[psi.right]
        consistent = all(
            (not value[psi.right] or value[psi])
            and (not value[psi] or value[psi.right] or value[psi.left])
            for psi in subs if isinstance(psi, Until)
        )
        if consistent:
            elementary.append(value)
    return subs, elementary


def _compatible(subs: List[Formula], current: Dict[Formula, bool], following: Dict[Formula, bool]) -> bool:
    for psi in subs:
        if isinstance(psi, Next) and current[psi] != following[psi.body]:
            return False
        if isinstance(psi, Until):
            expected = current[psi.right] or (current[psi.left] and following[psi])
            if current[psi] != expected:
                return False
    return True


def ltl_to_buchi(phi: Formula) -> BuchiAutomaton:
    """Büchi automaton over letters in 2^atoms(phi) accepting exactly the models of ``phi``."""
    subs, elementary = _elementary_sets(phi)
    untils = [psi for psi in subs if isinstance(psi, Until)]
    rounds = max(1, len(untils))
    phi_atoms = atoms(phi)

    def fulfils(index: int, round_: int) -> bool:
        if not untils:
            return True
        u = untils[round_]
        value = elementary[index]
        return not value[u] or value[u.right]

    guards = [
        frozenset((psi.rite, value[psi]) for psi in subs if isinstance(psi, Atom))
        for value in elementary
    ]
    following = [
        [j for j, other in enumerate(elementary) if _compatible(subs, value, other)]
        for value in elementary
    ]

    # states (elementary set, round) numbered in discovery order
    numbering: Dict[Tuple[int, int], int] = {}
    queue = deque()
    for i, value in enumerate(elementary):
        if value[phi]:
            numbering[(i, 0)] = len(numbering)
            queue.append((i, 0))
    initial = frozenset(numbering.values())

    transitions = []
    while queue:
        i, round_ = queue.popleft()
        next_round = (round_ + 1) % rounds if fulfils(i, round_) else round_
        for j in following[i]:
            key = (j, next_round)
            if key not in numbering:
                numbering[key] = len(numbering)
                queue.append(key)
            transitions.append((numbering[(i, round_)], guards[i], numbering[key]))

    accepting = frozenset(q for (i, round_), q in numbering.items() if round_ == 0 and fulfils(i, 0))
    automaton = BuchiAutomaton(
        states=frozenset(numbering.values()),
        transitions=tuple(transitions),
        initial=initial,
        accepting=accepting,
        atoms=phi_atoms,
    )
    logger.debug(f"Büchi automaton for {phi}: {len(automaton.states)} states, {len(transitions)} transitions")
    return automaton


def _lasso_product(b: BuchiAutomaton, w: LassoWord) -> nx.DiGraph:
    graph = nx.DiGraph()
    queue = deque()
    for q in sorted(b.initial):
        graph.add_node((q, 0))
        queue.append((q, 0))
    while queue:
        q, i = queue.popleft()
        j = w.successor(i)
        for target in b.successors(q, w.letter(i)):
            node = (target, j)
            if node not in graph:
                queue.append(node)
            graph.add_edge((q, i), node)
    return graph


def has_accepting_cycle(graph: nx.DiGraph, is_accepting) -> bool:
    for component in nx.strongly_connected_components(graph):
        if not any(is_accepting(node) for node in component):
            continue
        if len(component) > 1:
            return True
        node = next(iter(component))
        if graph.has_edge(node, node):
            return True
    return False


def buchi_accepts(b: BuchiAutomaton, w: LassoWord) -> bool:
    graph = _lasso_product(b, w)
    return has_accepting_cycle(graph, lambda node: b.is_accepting(node[0]))
