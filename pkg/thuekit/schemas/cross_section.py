# thuekit/schemas/cross_section.py
from pydantic import BaseModel, Field
from typing import List, Optional
from enum import Enum

from thuekit.models.word import Word


class Verdict(str, Enum):
    REFUTED = "refuted"
    CONSISTENT = "consistent-within-horizon"


class DuplicatePair(BaseModel):
    first: Word
    second: Word
    normal_form: Word


class CrossSectionReport(BaseModel):
    horizon: int
    accepted: int
    duplicates: List[DuplicatePair] = Field(default_factory=list)
    unreached_classes: List[Word] = Field(default_factory=list)
    verdict: Verdict


class Violation(BaseModel):
    first: Word
    second: Word
    normal_form: Word
    base: Optional[Word] = None
    run_index: Optional[int] = None
    pump_length: Optional[int] = None


class CrossSectionRequest(BaseModel):
    dfa: str = Field(..., description="DFA file contents")
    horizon: int = Field(6, ge=0, le=10)
