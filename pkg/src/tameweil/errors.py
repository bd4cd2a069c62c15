"""Exception hierarchy shared across the package.

Exceptions map onto process exit codes as follows: InvalidInput -> 2,
Retriable (resource or budget exhaustion) -> 3.  Rejection of a
well-formed descriptor is a result, not an exception, so it has no
exception class here.
"""


class TameweilError(Exception):
    """Base class for all package errors."""


class InvalidInputError(TameweilError):
    """Malformed or precondition-violating input (exit code 2)."""


class RetriableError(TameweilError):
    """Resource or budget exhaustion; retrying with a larger cap may help (exit code 3)."""


class PrecisionExhaustedError(RetriableError):
    """An internal precision cap was hit before a separation succeeded.

    Kept for interface stability.  The shipped splitting algorithm is
    exact and never raises this; search-based routines raise
    SearchBudgetError instead.
    """


class SearchBudgetError(RetriableError):
    """A bounded deterministic search ran out of candidates."""


class RandomizedInconclusiveError(RetriableError):
    """A sampling-based nonvanishing check exhausted its retry cap."""


class EndpointRootError(InvalidInputError):
    """A Sturm query was made with a root at an endpoint.

    The caller must perturb the endpoint or split off the offending
    factor exactly; silently nudging would break exactness guarantees.
    """


class IrrationalSplitError(InvalidInputError):
    """A matrix model requires an irrational central idempotent to split."""
