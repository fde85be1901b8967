import logging
from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from src import config
from src.exceptions import ExplorationLimitError
from src.heap import Heap
from src.logic.buchi import BuchiAutomaton, ltl_to_buchi
from src.logic.formula import Formula, Not, atoms
from src.logic.rite import Rite, heap_sat
from src.services.pds import TOP, Control, Head, PushdownSystem, StackSym, Word
from src.services.post_star import PAutomaton, head_graph, post_star, repeating_heads
from src.syntax import ProgramDecl

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProductControl:
    base: Control
    bstate: int


@dataclass(frozen=True)
class WitnessStep:
    """One rule application <control, symbol> -> <target, word>."""

    control: object
    symbol: StackSym
    target: object
    word: Word


@dataclass(frozen=True)
class Holds:
    pass


@dataclass(frozen=True)
class Violated:
    stem: Tuple[WitnessStep, ...]
    loop_head: Tuple[ProductControl, StackSym]


@dataclass(frozen=True)
class BoundExceeded:
    head: Head


Verdict = Union[Holds, Violated, BoundExceeded]


def label(control: Control, ats: Iterable[Rite]) -> FrozenSet[Rite]:
    """The atoms a control satisfies; TOP satisfies none."""
    if control is TOP:
        return frozenset()
    return frozenset(r for r in ats if heap_sat(control, r))


class ProductSystem:
    """The k-bounded pushdown system synchronized with a Büchi automaton.

    The letter of a step is the labeling of its source control.
    """

    def __init__(self, pds: PushdownSystem, buchi: BuchiAutomaton, ats: Iterable[Rite]):
        self.pds = pds
        self.buchi = buchi
        self.ats = frozenset(ats)
        self._labels: Dict[Control, FrozenSet[Rite]] = {}

    def label(self, control: Control) -> FrozenSet[Rite]:
        letter = self._labels.get(control)
        if letter is None:
            letter = label(control, self.ats)
            self._labels[control] = letter
        return letter

    def successors(self, pc: ProductControl, symbol: StackSym) -> List[Tuple[ProductControl, Word]]:
        bstates = self.buchi.successors(pc.bstate, self.label(pc.base))
        if not bstates:
            return []
        return [
            (ProductControl(control, q), word)
            for control, word in self.pds.successors(Head(pc.base, symbol))
            for q in bstates
        ]

    def initial(self) -> List[Tuple[ProductControl, Word]]:
        control, word = self.pds.initial()
        return [(ProductControl(control, q), word) for q in sorted(self.buchi.initial)]

    def is_accepting(self, pc: ProductControl) -> bool:
        return self.buchi.is_accepting(pc.bstate)


def product_successors(
    pc: ProductControl, symbol: StackSym, prog: ProgramDecl, k: int, b: BuchiAutomaton, ats: Iterable[Rite]
) -> List[Tuple[ProductControl, Word]]:
    return ProductSystem(PushdownSystem(prog, k), b, ats).successors(pc, symbol)


def find_stem(
    oracle, initial_configs: Sequence[Tuple[object, Word]], targets: Iterable[Tuple[object, StackSym]],
    limit: int = config.WITNESS_SEARCH_LIMIT,
) -> Tuple[Tuple[WitnessStep, ...], Tuple[object, StackSym]]:
    """Shortest rule sequence from an initial configuration to one whose head is in ``targets``."""
    wanted = set(targets)
    parents: Dict[Tuple[object, Word], Optional[Tuple[Tuple[object, Word], WitnessStep]]] = {}
    queue = deque()
    for configuration in initial_configs:
        if configuration not in parents:
            parents[configuration] = None
            queue.append(configuration)

    while queue:
        configuration = queue.popleft()
        control, stack = configuration
        head = (control, stack[0])
        if head in wanted:
            steps = []
            cursor = configuration
            while parents[cursor] is not None:
                cursor, step = parents[cursor]
                steps.append(step)
            return tuple(reversed(steps)), head
        for target, word in oracle(control, stack[0]):
            successor = (target, tuple(word) + stack[1:])
            if successor in parents:
                continue
            if len(parents) >= limit:
                logger.warning(f"Witness search gave up after {limit} configurations")
                raise ExplorationLimitError(f"no witness stem within {limit} configurations")
            parents[successor] = (configuration, WitnessStep(control, stack[0], target, tuple(word)))
            queue.append(successor)

    raise ExplorationLimitError("repeating head is not reachable by explicit search")


def replay(oracle, initial: Tuple[object, Word], stem: Sequence[WitnessStep]) -> Tuple[object, Word]:
    """Applies the stem rule by rule; raises ValueError when a step is not enabled."""
    control, stack = initial
    for step in stem:
        if (control, stack[0]) != (step.control, step.symbol):
            raise ValueError(f"step {step} does not apply at head {(control, stack[0])}")
        if (step.target, step.word) not in list(oracle(control, stack[0])):
            raise ValueError(f"no rule {step}")
        control, stack = step.target, tuple(step.word) + stack[1:]
    return control, stack


class ModelChecker:
    def __init__(
        self,
        prog: ProgramDecl,
        k: int = config.DEFAULT_BOUND,
        max_controls: int = config.MAX_CONTROLS,
        witness_limit: int = config.WITNESS_SEARCH_LIMIT,
    ):
        if k < 0:
            raise ValueError("the bound must be a natural number")
        self.prog = prog
        self.k = k
        self.max_controls = max_controls
        self.witness_limit = witness_limit
        self.pds = PushdownSystem(prog, k)

    def explore(self) -> PAutomaton:
        """post* of the plain k-bounded system from <H0, main Z>."""
        return post_star(
            lambda control, symbol: self.pds.successors(Head(control, symbol)),
            [self.pds.initial()],
            max_controls=self.max_controls,
        )

    def bound_violation(self, automaton: PAutomaton) -> Optional[Head]:
        for control, symbol in automaton.heads:
            if control is TOP:
                continue
            if any(target is TOP for target, _ in automaton.rules[(control, symbol)]):
                return Head(control, symbol)
        return None

    def check(self, phi: Formula) -> Verdict:
        logger.info(f"Phase 1: bound {self.k} reachability")
        offending = self.bound_violation(self.explore())
        if offending is not None:
            logger.info("Bound exceeded")
            return BoundExceeded(offending)

        logger.info(f"Phase 2: emptiness of the product with the automaton for !({phi})")
        buchi = ltl_to_buchi(Not(phi))
        product = ProductSystem(self.pds, buchi, atoms(phi))
        initial = product.initial()
        if not initial:
            return Holds()

        automaton = post_star(product.successors, initial, product.is_accepting, self.max_controls)
        graph = head_graph(automaton, product.is_accepting)
        repeating = repeating_heads(graph)
        logger.info(f"Head graph: {graph.number_of_nodes()} heads, {len(repeating)} repeating")
        if not repeating:
            return Holds()

        stem, loop_head = find_stem(product.successors, initial, repeating, self.witness_limit)
        return Violated(stem, loop_head)


def check(prog: ProgramDecl, phi: Formula, k: int = config.DEFAULT_BOUND) -> Verdict:
    return ModelChecker(prog, k).check(phi)
