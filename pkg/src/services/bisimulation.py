"""
Differential test of the concrete and abstract semantics: both run side by
side, choices resolved by one shared seeded scheduler, and every pair of
configurations must be related (isomorphic heaps, equal statements, cut
point identification on saved heaps, properness on the concrete side).
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional

from src import config
from src.exceptions import IsomorphismError
from src.heap import Heap, dump_heap_line, isomorphic
from src.services.interpreter import Scheduler
from src.services.semantics import (
    AbstractSemantics, ConcreteSemantics, Config, cp_identification, is_proper, lemma_holds,
)
from src.syntax import ProgramDecl

logger = logging.getLogger(__name__)


@dataclass
class BisimFailure:
    trial: int
    step: int
    reason: str
    concrete: Config
    abstract: Config

    def describe(self) -> List[str]:
        return [
            f"trial {self.trial}, step {self.step}: {self.reason}",
            f"  concrete | {dump_heap_line(self.concrete.current)} | stack-depth={self.concrete.depth}",
            f"  abstract | {dump_heap_line(self.abstract.current)} | stack-depth={self.abstract.depth}",
        ]


@dataclass
class BisimReport:
    passed: bool
    trials_run: int
    trials_passed: int
    steps_checked: int = 0
    failure: Optional[BisimFailure] = None

    @property
    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.trials_passed}/{self.trials_run}"


@dataclass
class _TrialResult:
    steps: int
    failure: Optional[BisimFailure] = None


def relate(c: Config, a: Config) -> Optional[str]:
    """Reason why the two configurations are not related, or None."""
    if isomorphic(c.current, a.current) is None:
        return "current heaps are not isomorphic"
    if c.depth != a.depth:
        return f"stack depths differ ({c.depth} vs {a.depth})"

    above_c, above_a = c.current, a.current
    for position, (frame_c, frame_a) in enumerate(zip(c.stack, a.stack)):
        saved_c = isinstance(frame_c, Heap)
        saved_a = isinstance(frame_a, Heap)
        if saved_c != saved_a:
            return f"frame {position} mixes a statement and a heap"
        if not saved_c:
            if frame_c != frame_a:
                return f"frame {position} holds different statements"
            continue
        if isomorphic(frame_c, frame_a) is None:
            return f"saved heap {position} is not isomorphic"
        try:
            if not cp_identification(above_c, frame_c, above_a, frame_a):
                return f"cut points of saved heap {position} are not identified"
        except IsomorphismError as e:
            return str(e)
        above_c, above_a = frame_c, frame_a

    if not is_proper(c.heaps()):
        return "concrete configuration is not proper"
    return None


def run_trial(prog: ProgramDecl, depth: int, trial: int, seed: int) -> _TrialResult:
    concrete_side = ConcreteSemantics(prog)
    abstract_side = AbstractSemantics(prog)
    scheduler = Scheduler(seed + trial)
    c, a = concrete_side.initial(), abstract_side.initial()

    def failed(step: int, reason: str) -> _TrialResult:
        return _TrialResult(step, BisimFailure(trial, step, reason, c, a))

    reason = relate(c, a)
    if reason:
        return failed(0, reason)

    for step in range(1, depth + 1):
        options_c = concrete_side.transitions(c)
        options_a = abstract_side.transitions(a)
        if len(options_c) != len(options_a):
            return failed(step, f"{len(options_c)} concrete successors against {len(options_a)} abstract")
        if not options_c:
            return _TrialResult(step - 1)

        choice = scheduler.pick(len(options_c))
        step_c, step_a = options_c[choice], options_a[choice]
        if step_c.rule != step_a.rule:
            return failed(step, f"rules differ ({step_c.rule} vs {step_a.rule})")
        if step_c.rule == "return" and not lemma_holds(c.current, c.top):
            return failed(step, "return reaches objects outside the caller's local part")

        c, a = step_c.config, step_a.config
        reason = relate(c, a)
        if reason:
            return failed(step, reason)
    return _TrialResult(depth)


def lockstep_bisim(
    prog: ProgramDecl,
    depth: int = config.DEFAULT_STEPS,
    trials: int = config.DEFAULT_TRIALS,
    seed: int = config.DEFAULT_SEED,
    workers: int = config.BISIM_WORKERS,
) -> BisimReport:
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda t: run_trial(prog, depth, t, seed), range(trials)))
    else:
        results = [run_trial(prog, depth, t, seed) for t in range(trials)]

    failures = [r.failure for r in results if r.failure is not None]
    report = BisimReport(
        passed=not failures,
        trials_run=trials,
        trials_passed=trials - len(failures),
        steps_checked=sum(r.steps for r in results),
        failure=failures[0] if failures else None,
    )
    if failures:
        logger.error(f"Bisimulation failed: {failures[0].reason} (trial {failures[0].trial}, step {failures[0].step})")
    else:
        logger.info(f"Bisimulation {report.summary}, {report.steps_checked} steps checked")
    return report
