from typing import Optional


class ThueKitError(Exception):
    """Base class for every error raised by the toolkit."""

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class SystemSyntaxError(ThueKitError):
    def __init__(self, detail: str, line: Optional[int] = None):
        if line is not None:
            detail = f"line {line}: {detail}"
        super().__init__(detail)
        self.line = line


class UnknownSymbolError(ThueKitError):
    def __init__(self, symbol: str, alphabet=None, line: Optional[int] = None):
        detail = f"unknown symbol {symbol!r}"
        if alphabet is not None:
            detail += f" (alphabet: {' '.join(alphabet)})"
        if line is not None:
            detail = f"line {line}: {detail}"
        super().__init__(detail)
        self.symbol = symbol
        self.line = line


class ExponentFormError(ThueKitError):
    pass


class RedexMismatchError(ThueKitError):
    pass


class StepBudgetExceeded(ThueKitError):
    def __init__(self, detail: str, steps: int):
        super().__init__(detail)
        self.steps = steps


class DenseCapExceeded(ThueKitError):
    def __init__(self, length: int, cap: int):
        super().__init__(f"dense length {length} exceeds cap {cap}")
        self.length = length
        self.cap = cap


class DerivationError(ThueKitError):
    pass


class DFAFormatError(ThueKitError):
    def __init__(self, detail: str, line: Optional[int] = None):
        if line is not None:
            detail = f"line {line}: {detail}"
        super().__init__(detail)
        self.line = line


class PreconditionError(ThueKitError):
    pass
