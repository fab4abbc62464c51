"""Exception hierarchy shared by every qde module."""


class QDEError(Exception):
    """Base class for all errors raised by qde."""


class DomainError(QDEError, ValueError):
    pass


class ParseError(QDEError, ValueError):
    """Malformed quaternion or matrix literal; ``offset`` is the byte position."""

    def __init__(self, message, offset=None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at offset {offset})"
        super().__init__(message)


class DimensionMismatch(QDEError, ValueError):
    pass


class NonSquare(DimensionMismatch):
    pass


class StructureError(QDEError, ValueError):
    pass


class SingularMatrix(QDEError, ArithmeticError):
    pass


class ConvergenceError(QDEError, ArithmeticError):
    pass


class IntegrationError(ConvergenceError):
    pass


class EigenFailure(ConvergenceError):
    pass


class ResidualTooLarge(QDEError, ArithmeticError):
    pass


class DefectiveMatrix(QDEError, ArithmeticError):
    pass


class SplitRejected(QDEError, ArithmeticError):
    pass


class ConditionViolated(QDEError, ArithmeticError):
    pass


class NotASolution(QDEError, ValueError):
    pass


class SingularCertificate(SingularMatrix):
    pass


class NonUnitAxis(DomainError):
    pass


class VerificationFailed(QDEError):
    pass
