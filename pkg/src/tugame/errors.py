"""Exception hierarchy shared by the library and the CLI."""
from typing import Optional


class TuGameError(Exception):
    pass


class GameError(TuGameError, ValueError):
    """A game, coalition or allocation violates a structural invariant."""


class NotAnImputation(GameError):
    pass


class GameFileError(GameError):
    def __init__(self, message: str, *, path: Optional[str] = None, line: Optional[int] = None):
        self.path = path
        self.line = line
        self.message = message
        where = ""
        if path is not None:
            where = f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class VectorFormatError(TuGameError, ValueError):
    """Malformed allocation vector or coalition collection on the command line."""


class LinAlgError(TuGameError, ArithmeticError):
    pass


class DegenerateSystemError(TuGameError, ArithmeticError):
    pass


class LpError(TuGameError, RuntimeError):
    pass
