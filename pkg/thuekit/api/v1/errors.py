from fastapi import HTTPException, status

from thuekit.core.exceptions import (
    DenseCapExceeded,
    DFAFormatError,
    ExponentFormError,
    PreconditionError,
    StepBudgetExceeded,
    SystemSyntaxError,
    ThueKitError,
    UnknownSymbolError,
)

INPUT_ERRORS = (SystemSyntaxError, UnknownSymbolError, ExponentFormError, DFAFormatError)
CAP_ERRORS = (StepBudgetExceeded, DenseCapExceeded)


def http_error(e: ThueKitError) -> HTTPException:
    """Map a domain error onto the status code the API reports for it."""
    if isinstance(e, INPUT_ERRORS):
        code = status.HTTP_400_BAD_REQUEST
    elif isinstance(e, PreconditionError):
        code = status.HTTP_422_UNPROCESSABLE_ENTITY
    elif isinstance(e, CAP_ERRORS):
        code = status.HTTP_409_CONFLICT
    elif type(e) is ThueKitError:
        # unknown system ids and malformed words
        code = status.HTTP_400_BAD_REQUEST
    else:
        code = status.HTTP_500_INTERNAL_SERVER_ERROR
    return HTTPException(status_code=code, detail=e.detail)
