"""Exception hierarchy shared by all modules."""


class RieszError(Exception):
    """Base class for every error raised by this package."""


class EmptySpace(RieszError, ValueError):
    pass


class NonPositiveWeight(RieszError, ValueError):
    pass


class SpaceMismatch(RieszError, ValueError):
    pass


class NegativeBase(RieszError, ValueError):
    pass


class NotRefining(RieszError, ValueError):
    def __init__(self, level: int, message: str = ""):
        self.level = level
        super().__init__(message or f"level {level} does not refine level {level - 1}")


class BadPartition(RieszError, ValueError):
    pass


class BadExponent(RieszError, ValueError):
    pass


class NotIntegrable(RieszError, ArithmeticError):
    pass


class BoundViolated(RieszError, ValueError):
    pass


class IntervalMismatch(RieszError, ValueError):
    pass


class NotConjugate(RieszError, ValueError):
    pass


class DepthExceeded(RieszError, ValueError):
    pass


class NotAMartingale(RieszError, ValueError):
    pass


class NotPredictable(RieszError, ValueError):
    pass


class NotAStoppingTime(RieszError, ValueError):
    pass


class NegativeProcess(RieszError, ValueError):
    pass


class UnboundedStop(RieszError, ValueError):
    pass


class FiltrationMismatch(RieszError, ValueError):
    pass


class BadLambda(RieszError, ValueError):
    pass


class Mismatch(RieszError, ValueError):
    pass


class CoefficientUnbounded(RieszError, ValueError):
    pass


class HorizonTooDeep(RieszError, ValueError):
    pass


class ConfigInvalid(RieszError, ValueError):
    pass
