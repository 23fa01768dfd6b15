"""Exception hierarchy shared by every module of the package."""


class AffineFlagError(Exception):
    """Base class for all errors raised by affineflag."""


class InvalidParameters(AffineFlagError, ValueError):
    pass


class NotPrime(InvalidParameters):
    pass


class SizeCapExceeded(AffineFlagError):
    pass


class OrbitCapExceeded(SizeCapExceeded):
    pass


class DivisionByZero(AffineFlagError, ZeroDivisionError):
    pass


class LogOfZero(AffineFlagError, ValueError):
    pass


class NoPrimitiveFound(AffineFlagError, RuntimeError):
    """Internal: a finite field without a primitive element means a bug."""


class CoincidentPoints(AffineFlagError, ValueError):
    pass


class DimensionMismatch(AffineFlagError, ValueError):
    pass


class NotASubgroup(AffineFlagError, ValueError):
    pass


class InvalidShape(AffineFlagError, ValueError):
    pass


class IncompatibleSeed(AffineFlagError, ValueError):
    pass


class NotSelfPaired(AffineFlagError, ValueError):
    pass


class NotSelfPairedForC(NotSelfPaired):
    pass


class InternalMismatch(AffineFlagError, RuntimeError):
    """Two independent routes to the same quantity disagree."""


class WitnessError(AffineFlagError):
    """A verification failure carrying a witness for the report."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotCompleteMultipartite(WitnessError):
    pass


class NotAnAutomorphismGroup(WitnessError):
    pass


class NotAlmostMulticover(WitnessError):
    pass


class NotA2Design(WitnessError):
    pass
