"""Exception hierarchy shared across the package."""


class MagnomechError(Exception):
    """Base class for all package errors."""


class ValidationError(MagnomechError, ValueError):
    """Invalid parameter value or configuration field.

    ``field`` carries the dotted path of the offending entry when known.
    """

    def __init__(self, message, field=None):
        self.field = field
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)


class PhysicsDomainError(MagnomechError):
    """The requested quantity does not exist for this configuration."""


class InstabilityError(PhysicsDomainError):
    """Steady state is linearly unstable (or the closed-form gain diverges)."""

    def __init__(self, message, eigenvalue=None):
        self.eigenvalue = eigenvalue
        if eigenvalue is not None:
            message = f"{message} (max eigenvalue {eigenvalue:.6g})"
        super().__init__(message)


class ConvergenceError(PhysicsDomainError):
    """Iterative solver stopped without meeting its tolerance."""

    def __init__(self, message, residual=None):
        self.residual = residual
        super().__init__(message)


class DivergenceError(PhysicsDomainError):
    """Time integration produced a non-finite state."""

    def __init__(self, message, time=None):
        self.time = time
        super().__init__(message)


class FitError(MagnomechError):
    """Lineshape or parameter fit failed."""


class RootBracketError(MagnomechError):
    """No sign change found while scanning for a root."""
