"""Exception hierarchy.

Every error carries an ``exit_code`` so the command-line front end can map
failures onto process status without inspecting messages.
"""


class CremonaError(Exception):
    exit_code = 1


class ParseError(CremonaError, ValueError):
    exit_code = 2

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class MathDomainError(CremonaError, ArithmeticError):
    exit_code = 3


class VariableMismatch(MathDomainError):
    pass


class NotBirational(MathDomainError):
    pass


class NotInverse(MathDomainError):
    pass


class ResourceCapExceeded(MathDomainError):
    pass


class EliminationFailure(MathDomainError):
    pass


class JetDepthExceeded(MathDomainError):
    pass


class AlgebraicAnchorUnsupported(MathDomainError):
    pass


class IndeterminatePoint(MathDomainError):
    """Raised when a map is evaluated at one of its base points."""


class UnknownVerdict(CremonaError):
    exit_code = 4
