from functools import lru_cache
from importlib import resources
from typing import Optional

from thuekit.core.exceptions import ThueKitError
from thuekit.core.logging import logger
from thuekit.models.system import RewritingSystem
from thuekit.services.rewriting import RewritingService

SYSTEM_IDS = ("R", "S", "T", "U")

# complete system presenting the same congruence
_COMPANIONS = {"R": "S", "S": "S", "T": "U", "U": "U"}


def system_text(system_id: str) -> str:
    """Contents of the bundled system file for a builtin id."""
    key = system_id.upper()
    if key not in SYSTEM_IDS:
        logger.warning(f"Unknown builtin system: {system_id}")
        raise ThueKitError(f"unknown builtin system {system_id!r} (choose from {', '.join(SYSTEM_IDS)})")
    return (resources.files("thuekit") / "data" / "systems" / f"{key}.txt").read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def builtin_system(system_id: str) -> RewritingSystem:
    key = system_id.upper()
    return RewritingService.parse_system(system_text(key), name=key)


def complete_companion(system: RewritingSystem) -> Optional[RewritingSystem]:
    """The complete builtin equivalent to ``system``, if it is a builtin."""
    companion = _COMPANIONS.get(system.name)
    if companion is None:
        return None
    builtin = builtin_system(system.name)
    if builtin != system:
        return None
    return builtin_system(companion)
