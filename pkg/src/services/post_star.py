"""
Forward saturation (post*) for pushdown systems given by a rule oracle.

The result is a P-automaton: a configuration <p, w> is reachable iff the
automaton reads w from state p to the final state. Rules are requested
lazily for every head (control, top symbol) the automaton comes to
recognize. Each transition carries a bit recording whether an accepting
control was visited on the way, which the head graph needs for repeated
head detection.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Dict, Hashable, Iterable, List, Sequence, Set, Tuple

import networkx as nx

from src import config
from src.exceptions import ExplorationLimitError

logger = logging.getLogger(__name__)

Control = Hashable
Symbol = Hashable
RuleOracle = Callable[[Control, Symbol], Sequence[Tuple[Control, Tuple[Symbol, ...]]]]


@dataclass(frozen=True)
class Mid:
    """Target of the first symbol pushed by rules rewriting into <control, symbol ...>."""

    control: Control
    symbol: Symbol


@dataclass(frozen=True)
class InitState:
    config: int
    position: int


class _Final:
    def __repr__(self):
        return "FINAL"


FINAL = _Final()
EPSILON = None

AUXILIARY = (Mid, InitState, _Final)


def is_control(state) -> bool:
    return not isinstance(state, AUXILIARY)


@dataclass
class PAutomaton:
    transitions: Dict[Tuple[object, Symbol, object], bool] = field(default_factory=dict)
    heads: List[Tuple[Control, Symbol]] = field(default_factory=list)
    rules: Dict[Tuple[Control, Symbol], Tuple[Tuple[Control, Tuple[Symbol, ...]], ...]] = field(default_factory=dict)
    controls: List[Control] = field(default_factory=list)

    def _outgoing(self) -> Dict[object, List[Tuple[Symbol, object]]]:
        table: Dict[object, List[Tuple[Symbol, object]]] = {}
        for source, symbol, target in self.transitions:
            table.setdefault(source, []).append((symbol, target))
        return table

    def accepts(self, control: Control, word: Sequence[Symbol]) -> bool:
        outgoing = self._outgoing()
        states = {control} | {t for s, t in outgoing.get(control, ()) if s is EPSILON}
        for symbol in word:
            states = {t for q in states for s, t in outgoing.get(q, ()) if s is not EPSILON and s == symbol}
            if not states:
                return False
        return FINAL in states

    def configurations(self, max_depth: int) -> Set[Tuple[Control, Tuple[Symbol, ...]]]:
        """Every recognized configuration whose stack has at most ``max_depth`` symbols."""
        outgoing = self._outgoing()
        result = set()
        for control in self.controls:
            frontier = {(control, ())}
            frontier |= {(t, ()) for s, t in outgoing.get(control, ()) if s is EPSILON}
            for depth in range(max_depth + 1):
                next_frontier = set()
                for state, word in frontier:
                    if state is FINAL:
                        result.add((control, word))
                    if depth == max_depth:
                        continue
                    for symbol, target in outgoing.get(state, ()):
                        if symbol is not EPSILON:
                            next_frontier.add((target, word + (symbol,)))
                frontier = next_frontier
        return result


def post_star(
    oracle: RuleOracle,
    initial_configs: Iterable[Tuple[Control, Tuple[Symbol, ...]]],
    is_accepting: Callable[[Control], bool] = lambda control: False,
    max_controls: int = config.MAX_CONTROLS,
) -> PAutomaton:
    automaton = PAutomaton()
    rel = automaton.transitions
    from_state: Dict[object, List[Tuple[Symbol, object]]] = {}
    eps_into: Dict[object, List[object]] = {}
    known_controls: Dict[Control, None] = {}
    worklist = deque()

    def see_control(control: Control):
        if control not in known_controls:
            known_controls[control] = None
            automaton.controls.append(control)
            if len(known_controls) > max_controls:
                raise ExplorationLimitError(
                    f"post* discovered more than {max_controls} control locations; "
                    f"the bound does not keep the system finite"
                )

    def rules_of(control: Control, symbol: Symbol):
        head = (control, symbol)
        rules = automaton.rules.get(head)
        if rules is None:
            rules = tuple(oracle(control, symbol))
            automaton.rules[head] = rules
            automaton.heads.append(head)
        return rules

    def record(source, symbol, target, bit: bool) -> bool:
        """Adds or upgrades a transition; True when rel changed."""
        key = (source, symbol, target)
        old = rel.get(key)
        if old is not None and (old or not bit):
            return False
        rel[key] = bit
        if old is None:
            if symbol is EPSILON:
                eps_into.setdefault(target, []).append(source)
            else:
                from_state.setdefault(source, []).append((symbol, target))
        return True

    def add_direct(source, symbol, target, bit: bool):
        if record(source, symbol, target, bit):
            for p in eps_into.get(source, ()):
                worklist.append((p, symbol, target, bit or rel[(p, EPSILON, source)]))

    for index, (control, word) in enumerate(initial_configs):
        see_control(control)
        states = [control] + [InitState(index, i) for i in range(1, len(word))] + [FINAL]
        for i, symbol in enumerate(word):
            if i == 0:
                worklist.append((states[0], symbol, states[1], False))
            else:
                record(states[i], symbol, states[i + 1], False)

    processed = 0
    while worklist:
        p, symbol, q, bit = worklist.popleft()
        if not record(p, symbol, q, bit):
            continue
        processed += 1
        bit = rel[(p, symbol, q)]

        if symbol is EPSILON:
            for next_symbol, target in list(from_state.get(q, ())):
                worklist.append((p, next_symbol, target, bit or rel[(q, next_symbol, target)]))
            continue

        carried = bit or is_accepting(p)
        for target_control, word in rules_of(p, symbol):
            see_control(target_control)
            if not word:
                worklist.append((target_control, EPSILON, q, carried))
            elif len(word) == 1:
                worklist.append((target_control, word[0], q, carried))
            else:
                mid = Mid(target_control, word[0])
                worklist.append((target_control, word[0], mid, False))
                add_direct(mid, word[1], q, carried)

    logger.info(
        f"post* saturated: {len(automaton.controls)} controls, {len(automaton.heads)} heads, "
        f"{len(rel)} transitions"
    )
    logger.debug(f"post* processed {processed} worklist items")
    return automaton


def head_graph(
    automaton: PAutomaton, is_accepting: Callable[[Control], bool] = lambda control: False
) -> nx.DiGraph:
    """Head reachability graph; edge attribute ``accepting`` marks an accepting visit en route."""
    graph = nx.DiGraph()
    eps_into: Dict[object, List[Tuple[Control, bool]]] = {}
    for (source, symbol, target), bit in automaton.transitions.items():
        if symbol is EPSILON:
            eps_into.setdefault(target, []).append((source, bit))

    def connect(u, v, accepting: bool):
        if graph.has_edge(u, v):
            graph[u][v]["accepting"] = graph[u][v]["accepting"] or accepting
        else:
            graph.add_edge(u, v, accepting=accepting)

    for head in automaton.heads:
        graph.add_node(head)
        control, _ = head
        visit = is_accepting(control)
        for target_control, word in automaton.rules[head]:
            if not word:
                continue
            connect(head, (target_control, word[0]), visit)
            if len(word) == 2:
                for popped_to, bit in eps_into.get(Mid(target_control, word[0]), ()):
                    connect(head, (popped_to, word[1]), visit or bit)
    return graph


def repeating_heads(graph: nx.DiGraph) -> List[Tuple[Control, Symbol]]:
    """Heads on a cycle that contains an accepting edge."""
    result = []
    for component in nx.strongly_connected_components(graph):
        accepting = any(
            data["accepting"]
            for u, v, data in graph.subgraph(component).edges(data=True)
        )
        if accepting:
            result.extend(component)
    order = {node: i for i, node in enumerate(graph.nodes)}
    return sorted(result, key=order.__getitem__)
