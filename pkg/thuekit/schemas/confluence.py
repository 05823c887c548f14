# thuekit/schemas/confluence.py
from pydantic import BaseModel, Field
from typing import List, Optional, Tuple
from enum import Enum

from thuekit.models.derivation import Derivation
from thuekit.models.word import Word


class OverlapKind(str, Enum):
    SUFFIX_PREFIX = "suffix-prefix"
    CONTAINMENT = "containment"


class RuleRef(BaseModel):
    rule: str
    param: Optional[int] = None
    position: int = 0

    @property
    def label(self) -> str:
        return self.rule if self.param is None else f"{self.rule}[n={self.param}]"

    model_config = {"frozen": True}


class CriticalPair(BaseModel):
    source: Word
    left_reduct: Word
    right_reduct: Word
    overlap_kind: OverlapKind
    rules: Tuple[RuleRef, RuleRef]

    model_config = {"frozen": True}

    @property
    def key(self):
        return (self.source, self.rules[0].label, self.rules[1].label)


class ResolutionReport(BaseModel):
    pair: CriticalPair
    resolved: bool
    common_word: Optional[Word] = None
    left_normal_form: Word
    right_normal_form: Word
    derivations: Tuple[Derivation, Derivation]


class ConfluenceSummary(BaseModel):
    system: str
    param_bound: int
    pairs: int
    resolved: int
    unresolved: List[CriticalPair] = Field(default_factory=list)

    @property
    def locally_confluent(self) -> bool:
        return not self.unresolved


class CriticalPairsRequest(BaseModel):
    system: str = "S"
    max_param: int = Field(2, ge=0, le=16)
    max_steps: Optional[int] = Field(None, gt=0)


class CriticalPairLine(BaseModel):
    source: Word
    rules: Tuple[str, str]
    overlap_kind: OverlapKind
    resolved: bool
    normal_form: Optional[Word] = None
