"""Exception taxonomy. The CLI maps these onto exit codes (see cli.EXIT_*)."""


class CoopsirError(Exception):
    """Base class for every error raised by this package."""


class DomainError(CoopsirError, ValueError):
    """Invalid parameter or argument outside an operation's domain."""


class ConvergenceError(CoopsirError, ArithmeticError):
    """A series, quadrature or root bracket failed to converge."""


class EvaluationOverflowError(ConvergenceError):
    """A result or mandatory intermediate exceeds double range."""


class ConsistencyError(CoopsirError, ArithmeticError):
    """A computed probability landed outside [0,1] beyond numerical slack."""


class UnboundedRateError(CoopsirError):
    """Silencing with k = eta: no interference, any rate meets any target."""


class NoInterferenceError(CoopsirError):
    """SIR sample requested with an empty interferer set."""


class OracleValidationError(CoopsirError):
    """Closed form disagrees with an oracle on the self-check grid."""
