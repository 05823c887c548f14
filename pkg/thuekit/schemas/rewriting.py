# thuekit/schemas/rewriting.py
from pydantic import BaseModel, Field
from typing import List, Optional
from enum import Enum

from thuekit.models.derivation import Derivation, Direction, Redex
from thuekit.models.word import Word

SCHEMA_VERSION = 1


class Strategy(str, Enum):
    LEFTMOST = "leftmost"
    RIGHTMOST = "rightmost"
    RANDOM = "random"


class RedexResponse(BaseModel):
    rule: str
    param: Optional[int] = None
    position: int
    direction: Direction
    source: Word
    target: Word

    @classmethod
    def from_redex(cls, redex: Redex) -> "RedexResponse":
        return cls(
            rule=redex.rule_id,
            param=redex.param,
            position=redex.position,
            direction=redex.direction,
            source=redex.source,
            target=redex.target,
        )


class WordRequest(BaseModel):
    system: str = Field("S", description="Builtin system id (R, S, T, U)")
    word: str


class RedexesRequest(WordRequest):
    include_reverse: bool = False
    param_cap: Optional[int] = Field(None, ge=0)


class RedexListResponse(BaseModel):
    schema_version: int = Field(SCHEMA_VERSION, alias="schema")
    system: str
    word: Word
    redexes: List[RedexResponse]

    model_config = {"populate_by_name": True}


class ReduceRequest(WordRequest):
    strategy: Strategy = Strategy.LEFTMOST
    seed: Optional[int] = None
    max_steps: Optional[int] = Field(None, gt=0)


class NormalFormResponse(BaseModel):
    schema_version: int = Field(SCHEMA_VERSION, alias="schema")
    system: str
    word: Word
    normal_form: Word
    steps: int
    derivation: Optional[Derivation] = None

    model_config = {"populate_by_name": True}


class VerificationResult(BaseModel):
    valid: bool
    failed_step: Optional[int] = None
    reason: Optional[str] = None

    def __bool__(self) -> bool:
        return self.valid
