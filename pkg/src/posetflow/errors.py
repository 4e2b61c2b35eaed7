"""Exception hierarchy shared by every posetflow module."""


class PosetflowError(ValueError):
    """Base class for all errors raised by posetflow."""


class CycleDetected(PosetflowError):
    pass


class NotGraded(PosetflowError):
    pass


class NonPositiveWeight(PosetflowError):
    pass


class UnknownElement(PosetflowError):
    pass


class TooLargeForOracle(PosetflowError):
    pass


class SizeLimit(PosetflowError):
    pass


class SizeMismatch(PosetflowError):
    pass


class EdgeMismatch(PosetflowError):
    pass


class ConservationViolated(PosetflowError):
    pass


class NoSourceOrSink(PosetflowError):
    pass


class UnsatisfiableLowerBound(PosetflowError):
    pass


class NotBipartite(PosetflowError):
    pass


class MorphismUnverified(PosetflowError):
    pass


class NotAntichain(PosetflowError):
    pass
