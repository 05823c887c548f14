# thuekit/schemas/paper.py
from pydantic import BaseModel, Field
from typing import List, Optional
from enum import Enum


class Lemma(str, Enum):
    F = "f"
    EQUIVALENT = "equivalent"
    DISTACAC = "distacac"
    COMPLETE_S = "complete-S"
    COMPLETE_U = "complete-U"
    LDF_CASE1 = "ldf-case1"
    LDF_CASE2 = "ldf-case2"
    LEFT_CANCEL = "left-cancel"
    NOREGCS = "noregcs"
    MONOTONICITY = "monotonicity"


class FMode(str, Enum):
    CLOSED = "closed"
    RECURSIVE = "recursive"
    SIMULATE = "simulate"


class SuiteResult(BaseModel):
    lemma: Lemma
    passed: bool
    checked: int
    failures: List[str] = Field(default_factory=list)
    witnesses: List[str] = Field(default_factory=list)
    detail: Optional[str] = None

    @property
    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status} {self.lemma.value} checked={self.checked}"
        if self.detail:
            text += f" {self.detail}"
        return text


class FResponse(BaseModel):
    values: List[int]
    mode: FMode
    value: int


class SuiteSizes(BaseModel):
    """Sweep bounds for the property suites."""

    f_max_k: int = 4
    f_max_d: int = 3
    acac_max: int = 6
    acac_bfs_max: int = 2
    equivalent_total: int = 8
    equivalent_length_cap: int = 14
    complete_s_params: int = 5
    complete_u_params: int = 8
    confluence_length_s: int = 8
    confluence_length_u: int = 8
    random_runs: int = 50
    ldf1_length: int = 8
    ldf1_bfs_length: int = 5
    ldf1_bfs_samples: int = 40
    ldf2_total: int = 8
    left_cancel_length: int = 6
    noregcs_qs: List[int] = Field(default_factory=lambda: [1, 2, 3])
    horizon: int = 8
    monotonicity_samples: int = 1000

    model_config = {"frozen": True}


FULL_SIZES = SuiteSizes()

QUICK_SIZES = SuiteSizes(
    acac_bfs_max=1,
    equivalent_total=5,
    complete_s_params=3,
    complete_u_params=4,
    confluence_length_s=4,
    confluence_length_u=5,
    random_runs=5,
    ldf1_length=5,
    ldf1_bfs_length=4,
    ldf1_bfs_samples=10,
    ldf2_total=5,
    left_cancel_length=4,
    noregcs_qs=[1, 2],
    horizon=6,
    monotonicity_samples=100,
)
