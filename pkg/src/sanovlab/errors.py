"""Exception types shared across the package."""


class ValidationError(ValueError):
    """An input failed a structural invariant (hermiticity, trace, dimension...)."""


class DomainError(ValueError):
    """A scalar argument lies outside the operation's domain."""


class SupportViolationError(ArithmeticError):
    """A matrix function was requested outside the operator's support.

    Carries the offending eigenvalues so callers can report the support
    interaction instead of silently returning +/-inf.
    """

    def __init__(self, message, eigenvalues=None):
        super().__init__(message)
        self.eigenvalues = eigenvalues


class NumericalInstabilityError(ArithmeticError):
    """A certified numeric procedure (monotone extrapolation, bracketing) failed."""


class ResourceBudgetError(RuntimeError):
    """An operator-level computation exceeds the configured size budget."""
