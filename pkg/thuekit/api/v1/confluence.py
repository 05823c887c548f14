from typing import List

from fastapi import APIRouter, HTTPException

from thuekit.api.v1.errors import http_error
from thuekit.core.exceptions import ThueKitError
from thuekit.core.logging import logger
from thuekit.schemas.confluence import CriticalPairLine, CriticalPairsRequest
from thuekit.services.confluence import ConfluenceService
from thuekit.services.systems import builtin_system

router = APIRouter(prefix="/confluence", tags=["confluence"])


@router.post("/critical-pairs", response_model=List[CriticalPairLine])
def critical_pairs(request: CriticalPairsRequest):
    """Critical pairs of a builtin system with their resolution"""
    logger.info(f"API request: POST /confluence/critical-pairs - system={request.system}, max_param={request.max_param}")

    try:
        system = builtin_system(request.system)
        reports = ConfluenceService.resolve_all(system, request.max_param, request.max_steps)
        return [
            CriticalPairLine(
                source=report.pair.source,
                rules=(report.pair.rules[0].label, report.pair.rules[1].label),
                overlap_kind=report.pair.overlap_kind,
                resolved=report.resolved,
                normal_form=report.common_word,
            )
            for report in reports
        ]
    except ThueKitError as e:
        logger.warning(f"critical-pairs rejected: {e.detail}")
        raise http_error(e)
    except HTTPException:
        raise
    except Exception as e:
        logger.error(f"Unexpected error in critical_pairs: {e}", exc_info=True)
        raise HTTPException(
            status_code=500,
            detail="Internal server error"
        )
