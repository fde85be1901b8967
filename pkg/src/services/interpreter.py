import logging
import random
from dataclasses import dataclass, field
from typing import List, Optional

from src import config
from src.heap import dump_heap_line
from src.services.semantics import SEMANTICS, Config, Semantics
from src.syntax import FieldWrite, ProgramDecl

logger = logging.getLogger(__name__)

TERMINATED = "TERMINATED"
STUCK = "STUCK"
STEP_LIMIT = "STEP-LIMIT"


class Scheduler:
    """Resolves choices with a seeded generator; draws only when there is a real choice."""

    def __init__(self, seed: int):
        self.rng = random.Random(seed)

    def pick(self, options: int) -> int:
        return self.rng.randrange(options) if options > 1 else 0


@dataclass
class RunResult:
    outcome: str
    steps: int
    final: Config
    trace: List[str] = field(default_factory=list)
    stuck_at: Optional[str] = None


def trace_line(index: int, rule: str, c: Config) -> str:
    return f"#{index} {rule} | {dump_heap_line(c.current)} | stack-depth={c.depth}"


class Interpreter:
    def __init__(self, prog: ProgramDecl, semantics: str = "concrete", seed: int = config.DEFAULT_SEED):
        if semantics not in SEMANTICS:
            raise ValueError(f"unknown semantics {semantics}, expected one of {', '.join(SEMANTICS)}")
        self.prog = prog
        self.semantics: Semantics = SEMANTICS[semantics](prog)
        self.seed = seed

    def run(self, steps: int = config.DEFAULT_STEPS, trace: bool = False) -> RunResult:
        """Executes at most ``steps`` transitions from the initial configuration."""
        scheduler = Scheduler(self.seed)
        current = self.semantics.initial()
        lines: List[str] = []

        for index in range(1, steps + 1):
            if not current.stack:
                logger.info(f"Terminated after {index - 1} steps")
                return RunResult(TERMINATED, index - 1, current, lines)
            options = self.semantics.transitions(current)
            if not options:
                top = current.top
                if isinstance(top, FieldWrite):
                    logger.warning(f"Stuck on null dereference at {top}")
                else:
                    logger.info(f"Stuck at {top}")
                return RunResult(STUCK, index - 1, current, lines, str(top))
            chosen = options[scheduler.pick(len(options))]
            current = chosen.config
            logger.debug(f"step {index}: {chosen.rule}")
            if trace:
                lines.append(trace_line(index, chosen.rule, current))

        if not current.stack:
            return RunResult(TERMINATED, steps, current, lines)
        logger.info(f"Step limit {steps} reached")
        return RunResult(STEP_LIMIT, steps, current, lines)
