from typing import List, Optional

from fastapi import APIRouter, HTTPException, Query

from thuekit.api.v1.errors import http_error
from thuekit.core.exceptions import ThueKitError
from thuekit.core.logging import logger
from thuekit.schemas.paper import FMode, FResponse, Lemma, SuiteResult
from thuekit.services.paper import PaperSystemsService
from thuekit.services.verification import VerificationService

router = APIRouter(prefix="/paper", tags=["paper"])


@router.get("/f", response_model=FResponse)
def evaluate_f(
    values: List[int] = Query(..., description="d_k, ..., d_1"),
    mode: FMode = Query(FMode.CLOSED),
):
    logger.info(f"API request: GET /paper/f - values={values}, mode={mode.value}")

    try:
        return FResponse(values=values, mode=mode, value=PaperSystemsService.f_eval(values, mode))
    except ThueKitError as e:
        logger.warning(f"f rejected: {e.detail}")
        raise http_error(e)
    except HTTPException:
        raise
    except Exception as e:
        logger.error(f"Unexpected error in evaluate_f: {e}", exc_info=True)
        raise HTTPException(
            status_code=500,
            detail="Internal server error"
        )


@router.get("/verify/{lemma}", response_model=SuiteResult)
def verify(
    lemma: Lemma,
    seed: Optional[int] = Query(None, description="Seed for randomized checks"),
):
    """Run one property suite at the quick sizes"""
    logger.info(f"API request: GET /paper/verify/{lemma.value} - seed={seed}")

    try:
        return VerificationService.run_suite(lemma, seed)
    except HTTPException:
        raise
    except Exception as e:
        logger.error(f"Unexpected error in verify: {e}", exc_info=True)
        raise HTTPException(
            status_code=500,
            detail="Internal server error"
        )
