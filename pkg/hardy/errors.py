"""
Hardy errors
"""

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_PRECONDITION = 2
EXIT_INCONCLUSIVE = 3
EXIT_USAGE = 64


class HardyError(Exception):
    """
    Base class for every error raised by the library.

    `exit_code` is what the command line returns when the error escapes a run.
    """
    exit_code = EXIT_PRECONDITION

    def to_dict(self):
        return {"error": type(self).__name__, "message": str(self)}


class DomainError(HardyError, ValueError):
    """ An argument lies outside the domain of the operation. """


class DegenerateDimension(DomainError):
    """ The operation has no meaning for p = N. """


class DegenerateGradient(HardyError, ArithmeticError):
    """ |u'| vanished where the p-Laplacian needs it for p != 2. """


class PreconditionViolated(HardyError):
    """
    A hypothesis of a check failed on the sampled grid.
    """
    def __init__(self, message, node=None, **evidence):
        super().__init__(message)
        self.node = node
        self.evidence = evidence

    def to_dict(self):
        return {**super().to_dict(), "node": self.node, "evidence": self.evidence}


class InconclusiveGrid(HardyError):
    exit_code = EXIT_INCONCLUSIVE


class GradientDegenerate(HardyError, ArithmeticError):
    """ phi' reached zero while integrating with p > 2. """


class Blowup(HardyError, OverflowError):
    pass


class ToleranceFailure(HardyError, ArithmeticError):
    pass


class InsufficientWindow(HardyError):
    pass


class NoBracket(HardyError):
    pass


class UsageError(HardyError):
    """ Missing or malformed command line input. """
    exit_code = EXIT_USAGE
