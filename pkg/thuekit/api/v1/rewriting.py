from fastapi import APIRouter, HTTPException

from thuekit.api.v1.errors import http_error
from thuekit.core.exceptions import ThueKitError
from thuekit.core.logging import logger
from thuekit.schemas.rewriting import (
    NormalFormResponse,
    RedexesRequest,
    RedexListResponse,
    RedexResponse,
    ReduceRequest,
)
from thuekit.services.rewriting import RewritingService
from thuekit.services.systems import builtin_system

router = APIRouter(prefix="/rewriting", tags=["rewriting"])


@router.post("/normal-form", response_model=NormalFormResponse)
def normal_form(request: ReduceRequest):
    """Reduce a word to normal form under a builtin system"""
    logger.info(f"API request: POST /rewriting/normal-form - system={request.system}, word={request.word}")

    try:
        system = builtin_system(request.system)
        w = RewritingService.parse_word(request.word, system)
        normal, derivation = RewritingService.reduce_to_normal_form(
            system, w, request.strategy, request.seed, request.max_steps
        )
        return NormalFormResponse(
            system=system.name,
            word=w,
            normal_form=normal,
            steps=derivation.length,
            derivation=derivation,
        )
    except ThueKitError as e:
        logger.warning(f"normal-form rejected: {e.detail}")
        raise http_error(e)
    except HTTPException:
        raise
    except Exception as e:
        logger.error(f"Unexpected error in normal_form: {e}", exc_info=True)
        raise HTTPException(
            status_code=500,
            detail="Internal server error"
        )


@router.post("/redexes", response_model=RedexListResponse)
def list_redexes(request: RedexesRequest):
    """Every redex of a word"""
    logger.info(f"API request: POST /rewriting/redexes - system={request.system}, word={request.word}")

    try:
        system = builtin_system(request.system)
        w = RewritingService.parse_word(request.word, system)
        found = RewritingService.find_redexes(system, w, request.include_reverse, request.param_cap)
        return RedexListResponse(
            system=system.name,
            word=w,
            redexes=[RedexResponse.from_redex(r) for r in found],
        )
    except ThueKitError as e:
        logger.warning(f"redexes rejected: {e.detail}")
        raise http_error(e)
    except HTTPException:
        raise
    except Exception as e:
        logger.error(f"Unexpected error in list_redexes: {e}", exc_info=True)
        raise HTTPException(
            status_code=500,
            detail="Internal server error"
        )
