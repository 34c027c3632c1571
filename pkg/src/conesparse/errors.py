"""Exception hierarchy.

Every failure raised by the library derives from :class:`ConeSparseError` so the
CLI can map it onto an exit code without catching unrelated bugs.
"""


class ConeSparseError(Exception):
    """Base class for all library errors."""


class InputError(ConeSparseError):
    """Malformed or inconsistent input data."""


class EngineError(ConeSparseError):
    """A numerical engine could not complete."""


class NonInterior(InputError):
    pass


class NoBracket(EngineError):
    pass


class Inconsistent(InputError):
    pass


class NegativeQuadraticForm(EngineError):
    pass


class StepNotFound(EngineError):
    def __init__(self, message, iteration=None, diagnostics=None):
        super().__init__(message)
        self.iteration = iteration
        self.diagnostics = diagnostics or {}


class NonPairwiseBarrier(InputError):
    pass


class DegenerateElement(InputError):
    pass


class BadResult(InputError):
    pass


class Disconnected(InputError):
    pass


class Infeasible(EngineError):
    pass


class Unbounded(EngineError):
    pass


class PremiseFailed(EngineError):
    pass
