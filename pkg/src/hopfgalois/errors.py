"""Exception hierarchy.  Every error carries enough text to name what failed."""


class HopfGaloisError(Exception):
    """Base class for all errors raised by this package."""


class MalformedInputError(HopfGaloisError, ValueError):
    pass


class InvalidSubgroupError(HopfGaloisError, ValueError):
    pass


class ResourceLimitError(HopfGaloisError):
    """A configured search or scan bound was exceeded; the result is inconclusive."""


class ReducibilityError(HopfGaloisError):
    """The defining polynomial turned out to have a nontrivial factor."""


class InvalidAutomorphismError(HopfGaloisError, ValueError):
    pass


class NotGaloisError(HopfGaloisError, ValueError):
    pass


class InvalidIntegralBasisError(HopfGaloisError, ValueError):
    pass


class NotASublatticeError(HopfGaloisError, ValueError):
    pass


class DescentFailureError(HopfGaloisError):
    """Galois descent did not close over Q; the instance data is inconsistent."""


class InternalInconsistencyError(HopfGaloisError):
    pass


class UnsupportedCaseError(HopfGaloisError):
    pass


class InconclusiveError(HopfGaloisError):
    pass


class SchemaError(HopfGaloisError, ValueError):
    pass


class ValidationError(HopfGaloisError, ValueError):
    """Instance validation failed; ``failures`` lists each broken invariant."""

    def __init__(self, failures: list[str]):
        self.failures = list(failures)
        super().__init__("; ".join(self.failures))
