"""Exception hierarchy shared by every module of the package."""


class RobinCornerError(Exception):
    """Base class for all package errors."""


class ConfigError(RobinCornerError, ValueError):
    """Invalid corner parameters (angle, exponent, coefficient, approach)."""


class ClosedFormBranchError(RobinCornerError, ValueError):
    """Raised when alpha = -1 reaches code that only handles alpha != -1."""


class InconsistentSystemError(RobinCornerError, ArithmeticError):
    """A triangular system has a structurally zero pivot it cannot absorb."""


class TerminationMismatchError(RobinCornerError, RuntimeError):
    """The recursion stopped somewhere the exact classification forbids."""


class DomainError(RobinCornerError, ValueError):
    """Evaluation requested outside the domain where a quantity exists."""


class SingularityError(DomainError):
    """Evaluation at the corner tip of a function that is singular there."""


class DivergentEnergyError(DomainError):
    """The epsilon -> 0 energy limit was requested for an infinite-energy series."""
