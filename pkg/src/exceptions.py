from typing import Optional


class ShylockError(Exception):
    """Base class for every error raised by the checker."""


class ProgramSyntaxError(ShylockError):
    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        location = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{location}")


class ProgramValidationError(ShylockError):
    pass


class FormulaError(ShylockError):
    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        location = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{location}")


class HeapError(ShylockError):
    pass


class NullDereferenceError(ShylockError):
    pass


class IsomorphismError(ShylockError):
    pass


class ExplorationLimitError(ShylockError):
    pass
