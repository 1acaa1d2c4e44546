"""Exception hierarchy shared by every qcdisk module."""


class QCError(Exception):
    """Base class for all errors raised by qcdisk."""


class ParameterError(QCError, ValueError):
    """Invalid mesh order, tolerance or other configuration value."""


class DomainError(QCError, ValueError):
    """Argument outside the domain on which a function is defined."""


class DegenerateInputError(QCError, ValueError):
    """Coincident or collinear points where distinct/noncollinear ones are required."""


class InadmissibleFieldError(QCError, ValueError):
    """A Beltrami field (or one of its averages) reached modulus >= 1."""


class UnsupportedOracleError(QCError, ValueError):
    """No closed-form reference map is available for the requested field."""


class SolverError(QCError, RuntimeError):
    """The least-squares solve could not produce a certified solution.

    ``diagnostics`` carries whatever the solver knew when it gave up.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class ResourceError(QCError, RuntimeError):
    """A requested enumeration or allocation exceeds a configured cap."""
