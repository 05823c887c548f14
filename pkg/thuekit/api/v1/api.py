from fastapi import APIRouter
from thuekit.api.v1.rewriting import router as rewriting_router
from thuekit.api.v1.confluence import router as confluence_router
from thuekit.api.v1.dehn import router as dehn_router
from thuekit.api.v1.paper import router as paper_router
from thuekit.api.v1.cross_section import router as cross_section_router

api_router = APIRouter()
api_router.include_router(rewriting_router)
api_router.include_router(confluence_router)
api_router.include_router(dehn_router)
api_router.include_router(paper_router)
api_router.include_router(cross_section_router)
