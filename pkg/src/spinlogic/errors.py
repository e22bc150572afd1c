"""Exception hierarchy."""


class SpinLogicError(Exception):
    pass


class NotHermitianError(SpinLogicError, ValueError):
    pass


class NotUnitaryError(SpinLogicError, ValueError):
    pass


class DimensionError(SpinLogicError, ValueError):
    pass


class UnknownSpinError(SpinLogicError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown spin"


class ParseError(SpinLogicError):
    """Syntax or resolution failure in a pulse-sequence file."""

    def __init__(self, message, line=None, col=None):
        self.message = message
        self.line = line
        self.col = col
        loc = f"line {line}, column {col}: " if line is not None else ""
        super().__init__(loc + message)


class TransportBlocked(SpinLogicError):
    def __init__(self, cell, message=None):
        self.cell = cell
        super().__init__(message or f"transport blocked at cell {cell}")
