"""Exception types shared across the package."""


class DomainError(ValueError):
    """A spectral parameter was requested inside the essential band."""


class PoleError(ValueError):
    """A critical curve was evaluated at its pole abscissa."""


class PreconditionError(ValueError):
    """An operation was called with inputs violating its contract."""


class DegenerateEigenvectorError(RuntimeError):
    """No usable eigenvector could be extracted from the coefficient system."""


class InconsistencyError(RuntimeError):
    """A numerical result contradicts a structural bound (signals a bug)."""


class NumericError(RuntimeError):
    """An iterative numerical routine failed to converge."""
