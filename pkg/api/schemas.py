"""
Pydantic request bodies of the HTTP API. Response shapes live in
``src/utils/schemas.py`` and are shared with the command line.
"""

from typing import Literal

from pydantic import BaseModel, Field

from src import config


# ── Requests ──────────────────────────────────────────────────────────

class ParseRequest(BaseModel):
    source: str


class CheckRequest(BaseModel):
    source: str
    formula: str
    bound: int = Field(config.DEFAULT_BOUND, ge=0, description="k: maximal visible heap size")


class RunRequest(BaseModel):
    source: str
    semantics: Literal["concrete", "abstract"] = "concrete"
    steps: int = Field(config.DEFAULT_STEPS, ge=1)
    seed: int = Field(config.DEFAULT_SEED, ge=0)
    trace: bool = False


class BisimRequest(BaseModel):
    source: str
    steps: int = Field(config.DEFAULT_STEPS, ge=1)
    trials: int = Field(config.DEFAULT_TRIALS, ge=1)
    seed: int = Field(config.DEFAULT_SEED, ge=0)
