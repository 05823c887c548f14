from fastapi import APIRouter, HTTPException

from thuekit.api.v1.errors import http_error
from thuekit.core.exceptions import ThueKitError
from thuekit.core.logging import logger
from thuekit.schemas.cross_section import CrossSectionReport, CrossSectionRequest
from thuekit.services.cross_section import CrossSectionService

router = APIRouter(prefix="/cross-section", tags=["cross-section"])


@router.post("/check", response_model=CrossSectionReport)
def check(request: CrossSectionRequest):
    """Check a DFA as a cross-section of the monoid up to the horizon"""
    logger.info(f"API request: POST /cross-section/check - horizon={request.horizon}")

    try:
        dfa = CrossSectionService.load_dfa(request.dfa)
        return CrossSectionService.check_cross_section(dfa, request.horizon)
    except ThueKitError as e:
        logger.warning(f"cross-section check rejected: {e.detail}")
        raise http_error(e)
    except HTTPException:
        raise
    except Exception as e:
        logger.error(f"Unexpected error in cross-section check: {e}", exc_info=True)
        raise HTTPException(
            status_code=500,
            detail="Internal server error"
        )
