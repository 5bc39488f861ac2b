"""Exception types raised across the package."""


class GaussEmbedError(ValueError):
    """Base class for all domain errors."""


class InvalidPoint(GaussEmbedError):
    """A family point violates its parameter ranges."""


class InvalidFrame(GaussEmbedError):
    """Canonical bracket coefficients do not define a Lie algebra."""


class NotPositiveDefinite(GaussEmbedError):
    """A Gram matrix failed the positive-definiteness check."""


class PreconditionViolated(GaussEmbedError):
    """An operation was called outside its domain of validity."""


class TNotPositive(PreconditionViolated):
    """The curvature determinant is not strictly positive."""


class ZeroCurvature(PreconditionViolated):
    """The curvature tensor vanishes within tolerance."""
