"""
Response models shared by the command line (``--format json``/``kv``) and the
HTTP API, so both surfaces report the same fields.
"""

from pydantic import BaseModel

from src.heap import Heap, dump_lines
from src.services.bisimulation import BisimReport
from src.services.checker import BoundExceeded, Verdict, Violated
from src.services.interpreter import RunResult
from src.syntax import ProgramDecl, ast_text
from src.utils.rendering import (
    render_control, render_step, render_symbol, verdict_exit_code, verdict_name,
)


# ── Program ───────────────────────────────────────────────────────────

class ProcedureResponse(BaseModel):
    name: str
    ast: str
    text: str


class ProgramResponse(BaseModel):
    globals: list[str]
    locals: list[str]
    fields: list[str]
    procedures: list[ProcedureResponse]

    @classmethod
    def from_program(cls, prog: ProgramDecl) -> "ProgramResponse":
        return cls(
            globals=sorted(prog.globals),
            locals=sorted(prog.locals),
            fields=sorted(prog.fields),
            procedures=[
                ProcedureResponse(name=name, ast=ast_text(body), text=str(body))
                for name, body in sorted(prog.procs.items())
            ],
        )


# ── Verdict ───────────────────────────────────────────────────────────

class HeadResponse(BaseModel):
    control: str
    symbol: str
    heap: list[str] = []


class VerdictResponse(BaseModel):
    verdict: str
    exit_code: int
    bound: int
    formula: str
    witness: list[str] = []
    loop_head: HeadResponse | None = None
    head: HeadResponse | None = None

    @classmethod
    def from_verdict(cls, verdict: Verdict, bound: int, formula: str) -> "VerdictResponse":
        response = cls(
            verdict=verdict_name(verdict),
            exit_code=verdict_exit_code(verdict),
            bound=bound,
            formula=formula,
        )
        if isinstance(verdict, Violated):
            control, symbol = verdict.loop_head
            response.witness = [render_step(step) for step in verdict.stem]
            response.loop_head = HeadResponse(
                control=render_control(control),
                symbol=render_symbol(symbol),
                heap=dump_lines(control.base) if isinstance(control.base, Heap) else [],
            )
        elif isinstance(verdict, BoundExceeded):
            response.head = HeadResponse(
                control=render_control(verdict.head.control),
                symbol=render_symbol(verdict.head.top),
                heap=dump_lines(verdict.head.control),
            )
        return response

    def kv_lines(self) -> list[str]:
        lines = [
            f"verdict={self.verdict}",
            f"exit_code={self.exit_code}",
            f"bound={self.bound}",
            f"formula={self.formula}",
        ]
        lines.extend(f"witness.{i}={rule}" for i, rule in enumerate(self.witness))
        if self.loop_head is not None:
            lines.append(f"loop_head.control={self.loop_head.control}")
            lines.append(f"loop_head.symbol={self.loop_head.symbol}")
        if self.head is not None:
            lines.append(f"head.control={self.head.control}")
            lines.append(f"head.symbol={self.head.symbol}")
        return lines


# ── Simulation ────────────────────────────────────────────────────────

class RunResponse(BaseModel):
    semantics: str
    outcome: str
    steps: int
    stuck_at: str | None = None
    heap: list[str]
    trace: list[str] = []

    @classmethod
    def from_result(cls, result: RunResult, semantics: str) -> "RunResponse":
        return cls(
            semantics=semantics,
            outcome=result.outcome,
            steps=result.steps,
            stuck_at=result.stuck_at,
            heap=dump_lines(result.final.current),
            trace=result.trace,
        )


class BisimResponse(BaseModel):
    passed: bool
    summary: str
    trials_run: int
    trials_passed: int
    steps_checked: int
    failure: list[str] | None = None

    @classmethod
    def from_report(cls, report: BisimReport) -> "BisimResponse":
        return cls(
            passed=report.passed,
            summary=report.summary,
            trials_run=report.trials_run,
            trials_passed=report.trials_passed,
            steps_checked=report.steps_checked,
            failure=report.failure.describe() if report.failure else None,
        )


class ErrorResponse(BaseModel):
    message: str
    line: int | None = None
    column: int | None = None
