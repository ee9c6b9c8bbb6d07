"""Exception hierarchy shared by every module."""


class LoewnerLabError(Exception):
    """Base class for all toolkit errors."""


class InputError(LoewnerLabError, ValueError):
    """Malformed or out-of-contract input."""


class NumericFailure(LoewnerLabError, ArithmeticError):
    """An algorithm failed to reach its accuracy target."""


class NotSymmetric(InputError):
    pass


class NonFinite(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class DomainViolation(InputError):
    pass


class DegenerateInterval(InputError):
    pass


class NotStrictlyPositive(InputError):
    pass


class WeightOutOfRange(InputError):
    pass


class NonPositiveFunction(InputError):
    pass


class SpectraOutOfBounds(InputError):
    pass


class WeightsNotNormalized(InputError):
    pass


class FlagMissing(InputError):
    pass


class HypothesisFailed(InputError):
    pass


class ZeroValueViolation(InputError):
    pass


class NotUnitVector(InputError):
    pass


class InfeasibleConstruction(InputError):
    pass


class UnknownChecker(InputError):
    pass


class UnknownCondition(InputError):
    pass


class NonConvergence(NumericFailure):
    pass


class QuadratureNotConverged(NumericFailure):
    pass
