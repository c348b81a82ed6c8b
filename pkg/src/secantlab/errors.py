"""Exception taxonomy shared across the lab modules."""


class SecantLabError(Exception):
    """Base class for all domain errors raised by this package."""


class IndexOverflowError(SecantLabError):
    """Fibonacci index beyond the exact-integer cap (n > 186)."""


class UnknownProblemError(SecantLabError):
    """Requested corpus problem id does not exist."""


class NotSimpleRootError(SecantLabError):
    """Operation requires a simple root (multiplicity 1)."""


class ZeroDerivativeError(SecantLabError):
    """First derivative vanishes where it must not."""


class ZeroCurvatureError(SecantLabError):
    """Second derivative vanishes at the root, so the superlinear
    error-constant formula does not apply."""


class EqualIteratesError(SecantLabError):
    """Secant iteration started or continued with two equal points."""


class SecantBreakdownError(SecantLabError):
    """Secant denominator vanished: f(x_prev) == f(x_curr)."""


class NewtonBreakdownError(SecantLabError):
    """Newton derivative vanished at the evaluation point."""


class OddMultiplicityError(SecantLabError):
    """Operation defined only for even multiplicities."""


class EvenMultiplicityError(SecantLabError):
    """Operation defined only for odd multiplicities."""


class PoleAtUnitPowerError(SecantLabError):
    """Ratio map evaluated too close to a pole (k**m == 1)."""


class InsufficientDataError(SecantLabError):
    """Too few usable samples for an estimate or diagnostic."""


class ExactRootTraceError(SecantLabError):
    """Trace hit the root exactly; asymptotic estimates are undefined."""


class WrongProblemError(SecantLabError):
    """Trace does not come from the function family the check assumes."""


class InvalidRegimeError(SecantLabError):
    """Efficiency-model inputs violate its preconditions."""
