"""Exception types shared across the package."""


class QuiverError(Exception):
    """Base class for all quiverstair errors."""


class ValidationError(QuiverError, ValueError):
    """Malformed input: bad shapes, inconsistent files, out-of-range labels."""


class NumericError(QuiverError, ArithmeticError):
    """A dense kernel routine failed (e.g. the SVD did not converge)."""


class InconsistencyError(QuiverError, RuntimeError):
    """Rank decisions contradicted each other mid-algorithm.

    Raised when a result the theory guarantees (a nonsingular regular part,
    a terminating shave) fails numerically.  This signals tolerance trouble
    on near-degenerate input, not a recoverable condition.
    """
