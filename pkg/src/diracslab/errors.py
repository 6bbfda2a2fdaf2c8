"""Exception hierarchy shared by every module of the package."""


class DiracSlabError(Exception):
    """Base class for all package errors."""


class DomainError(DiracSlabError, ValueError):
    """Input outside the modelled physical regime.

    ``field`` names the offending input so front ends can report it.
    """

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class SingularConfigurationError(DiracSlabError, ArithmeticError):
    """A closed-form denominator vanished; ``expression`` names it."""

    def __init__(self, message, expression=None):
        super().__init__(message)
        self.expression = expression


class DegeneratePolynomialError(DiracSlabError, ArithmeticError):
    """The determinant vanishes identically in K."""


class ConsistencyError(DiracSlabError, RuntimeError):
    """An internal cross-check failed. Signals a bug, not bad input."""


class NotARootError(DiracSlabError, ValueError):
    """The requested K does not make the boundary matrix singular."""


class NotApplicableError(DiracSlabError, ValueError):
    """Operation requested for a variant it does not apply to."""


class InvalidModeError(DiracSlabError, ValueError):
    """Mode with a vanishing coefficient vector."""
