import logging

from fastapi import FastAPI, HTTPException

from src.exceptions import ShylockError
from src.services.bisimulation import lockstep_bisim
from src.services.checker import ModelChecker
from src.services.formula_parser import parse_formula
from src.services.interpreter import Interpreter
from src.services.program_parser import parse_program
from src.utils.schemas import (
    BisimResponse, ErrorResponse, ProgramResponse, RunResponse, VerdictResponse,
)

from .schemas import BisimRequest, CheckRequest, ParseRequest, RunRequest

logger = logging.getLogger(__name__)

app = FastAPI(
    title="Shylock Model Checker API",
    description="Parse, simulate and model check heap-manipulating recursive programs.",
    version="1.0.0",
)


def _unprocessable(error: ShylockError) -> HTTPException:
    logger.error(f"Rejected request: {error}")
    detail = ErrorResponse(
        message=str(error),
        line=getattr(error, "line", None),
        column=getattr(error, "column", None),
    )
    return HTTPException(status_code=422, detail=detail.model_dump())


@app.get("/health")
def health_check():
    """Simple health check to verify the server is running."""
    return {"status": "ok"}


@app.post("/api/parse", response_model=ProgramResponse)
def parse(request: ParseRequest):
    """Parses and validates a program, returning its declarations and procedure ASTs."""
    try:
        prog = parse_program(request.source)
    except ShylockError as e:
        raise _unprocessable(e)
    return ProgramResponse.from_program(prog)


@app.post("/api/check", response_model=VerdictResponse)
def check(request: CheckRequest):
    """Checks a temporal heap property on every run of the k-bounded program."""
    try:
        prog = parse_program(request.source)
        phi = parse_formula(request.formula, prog)
        verdict = ModelChecker(prog, request.bound).check(phi)
    except ShylockError as e:
        raise _unprocessable(e)
    return VerdictResponse.from_verdict(verdict, request.bound, request.formula)


@app.post("/api/run", response_model=RunResponse)
def run(request: RunRequest):
    """Simulates a program under the concrete or the abstract semantics."""
    try:
        prog = parse_program(request.source)
    except ShylockError as e:
        raise _unprocessable(e)
    result = Interpreter(prog, request.semantics, request.seed).run(request.steps, request.trace)
    return RunResponse.from_result(result, request.semantics)


@app.post("/api/bisim", response_model=BisimResponse)
def bisim(request: BisimRequest):
    """Runs both semantics in lockstep and reports the first divergence, if any."""
    try:
        prog = parse_program(request.source)
    except ShylockError as e:
        raise _unprocessable(e)
    report = lockstep_bisim(prog, request.steps, request.trials, request.seed)
    return BisimResponse.from_report(report)
