"""Exception types shared across the toolkit."""


class GroupoidkitError(Exception):
    """Base class for all toolkit errors."""


class GraphParseError(GroupoidkitError):
    """Malformed graph file. Carries the offending line number when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MixedGraphError(GroupoidkitError):
    """Operands built over different graphs were combined."""


class NotFullError(GroupoidkitError):
    """A clopen set required to be full is not; carries a witness orbit.

    The witness is either ``("cycle", path)`` for a periodic orbit that never
    meets the set, or ``("sink-path", path)`` for a finite boundary point
    that never meets it.
    """

    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


class StageBudgetError(GroupoidkitError):
    """Conjugation needed more unitary stages than the allowed budget."""


class MoveError(GroupoidkitError):
    """Invalid move parameters (wrong vertex class, bad partition, ...)."""
