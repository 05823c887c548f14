# thuekit/schemas/dehn.py
from pydantic import BaseModel, Field
from typing import Optional, Tuple
from enum import Enum

from thuekit.models.derivation import Derivation
from thuekit.models.word import Word


class DistanceStatus(str, Enum):
    EXACT = "exact"
    NOT_FOUND = "not-found-within-caps"


class DistanceMode(str, Enum):
    THUE = "thue"
    FORWARD = "forward"


class CappedDistanceResult(BaseModel):
    u: Word
    v: Word
    distance: Optional[int] = None
    status: DistanceStatus
    caps: Tuple[int, int]
    explored: int
    mode: DistanceMode = DistanceMode.THUE
    derivation: Optional[Derivation] = None

    @property
    def exact(self) -> bool:
        return self.status == DistanceStatus.EXACT


class DehnProfilePoint(BaseModel):
    n: int
    value: int
    witness: Optional[Tuple[Word, Word]] = None
    status: DistanceStatus = DistanceStatus.EXACT


class DistanceRequest(BaseModel):
    system: str = "R"
    u: str
    v: str
    length_cap: Optional[int] = Field(None, ge=0)
    dist_cap: Optional[int] = Field(None, ge=0)
    mode: DistanceMode = DistanceMode.THUE
