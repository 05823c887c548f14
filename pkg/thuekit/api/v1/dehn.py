from fastapi import APIRouter, HTTPException

from thuekit.api.v1.errors import http_error
from thuekit.core.exceptions import ThueKitError
from thuekit.core.logging import logger
from thuekit.schemas.dehn import CappedDistanceResult, DistanceRequest
from thuekit.services.dehn import DehnService
from thuekit.services.rewriting import RewritingService
from thuekit.services.systems import builtin_system

router = APIRouter(prefix="/dehn", tags=["dehn"])


@router.post("/distance", response_model=CappedDistanceResult)
def distance(request: DistanceRequest):
    """Capped Thue distance between two words"""
    logger.info(f"API request: POST /dehn/distance - system={request.system}, u={request.u}, v={request.v}")

    try:
        system = builtin_system(request.system)
        u = RewritingService.parse_word(request.u, system)
        v = RewritingService.parse_word(request.v, system)
        return DehnService.capped_distance(
            system, u, v, request.length_cap, request.dist_cap, request.mode, with_derivation=True
        )
    except ThueKitError as e:
        logger.warning(f"distance rejected: {e.detail}")
        raise http_error(e)
    except HTTPException:
        raise
    except Exception as e:
        logger.error(f"Unexpected error in distance: {e}", exc_info=True)
        raise HTTPException(
            status_code=500,
            detail="Internal server error"
        )
