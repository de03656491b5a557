"""
Exception hierarchy shared by the folf library and the command line.
"""


class FolfError(Exception):
    """Base class for every error raised by the toolkit"""


class ParseError(FolfError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        if line:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class ArityError(ParseError):
    pass


class SubstitutionCaptureError(FolfError):
    pass


class KindError(FolfError):
    """Raised when an operation receives a program of the wrong kind"""


class GroundingError(FolfError):
    pass


class NotReducibleError(FolfError):
    def __init__(self, message: str, safety=None, complete=None):
        self.safety = safety
        self.complete = complete
        super().__init__(message)


class OracleLimitError(FolfError):
    pass


class InterpretationError(FolfError):
    pass


class NotFirstOrderError(FolfError):
    pass


class ProverError(FolfError):
    pass
