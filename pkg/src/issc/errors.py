"""Exception types raised across the package."""


class ISSCError(Exception):
    """Base class for all package errors."""


class ParameterError(ISSCError, ValueError):
    """A parameter lies outside its allowed range."""


class DimensionError(ISSCError, ValueError):
    """Array shapes disagree or contain invalid values."""


class FormatError(ISSCError, ValueError):
    """A file could not be parsed."""


class EmptyDataError(FormatError):
    """A data file holds no rows."""


class InfeasibleError(ISSCError):
    """A linear program has no feasible point."""


class DegenerateEmbeddingError(ISSCError):
    """The projection eigenproblem has no positive eigenvalue."""


class NumericalError(ISSCError):
    """An eigensolver or factorization failed."""
