"""Exception types shared across the package.

Each class marks one failure mode of the numerical contracts; callers that
want to distinguish configuration problems from data problems can catch
ConfigError separately (the CLI maps it to a dedicated exit code).
"""


class GroupwalkError(Exception):
    """Base class for all package-specific errors."""


class SingularInput(GroupwalkError):
    """A matrix pivot or determinant is too small for the requested factorization."""


class NoConvergence(GroupwalkError):
    """An iterative kernel failed to reach its target within its sweep cap."""


class DimMismatch(GroupwalkError):
    """Operands have incompatible dimensions."""


class ParseError(GroupwalkError):
    """Input text or file is not syntactically valid."""


class ValidationError(GroupwalkError):
    """Parsed input violates a semantic invariant (weights, invertibility, ...)."""


class InvalidKind(GroupwalkError):
    """Unknown cocycle kind or experiment name."""


class TooShort(GroupwalkError):
    """A path or sample is too short for the requested statistic."""


class TooLarge(GroupwalkError):
    """Problem size exceeds a documented exact-method cap."""


class BadExponent(GroupwalkError):
    """Moment exponent p outside the supported range."""


class AlphabetTooLarge(GroupwalkError):
    """Exact conditional support would exceed the atom cap; use the sampled fallback."""


class TooFewPoints(GroupwalkError):
    """A fit needs more data points than were supplied."""


class NonPositive(GroupwalkError):
    """Log-scale fitting requires strictly positive values."""


class ZeroMatrix(GroupwalkError):
    """The covariance matrix has no positive eigenvalue."""


class ConfigError(GroupwalkError):
    """CLI or config-file arguments are invalid."""
