"""Exception hierarchy shared by every module of the package."""


class ColombeauError(Exception):
    """Base class for all errors raised by this package."""


class UnboundSymbol(ColombeauError):
    def __init__(self, name: str):
        super().__init__(f"unbound symbol {name!r}")
        self.name = name


class DomainError(ColombeauError):
    pass


class NonDifferentiable(ColombeauError):
    pass


class ParamClash(ColombeauError):
    def __init__(self, name: str, left, right):
        super().__init__(f"parameter {name!r} bound to both {left} and {right}")
        self.name = name


class DomainProbeFailure(ColombeauError):
    pass


class UnknownBuiltin(ColombeauError):
    pass


class MissingParam(ColombeauError):
    pass


class UnsupportedTarget(ColombeauError):
    pass


class BadMollifier(ColombeauError):
    pass


class InsufficientSmoothness(ColombeauError):
    pass


class BadEpsilonOrder(ColombeauError):
    pass


class UnknownDemo(ColombeauError):
    pass


class QuadratureBudgetExceeded(ColombeauError):
    """Adaptive quadrature ran out of function evaluations.

    The partial result and its error estimate are kept on the exception so
    callers can still record them (flagged) in a pairing curve.
    """

    def __init__(self, value: complex, error: float, evaluations: int):
        super().__init__(
            f"quadrature budget exceeded after {evaluations} evaluations "
            f"(partial value {value}, error estimate {error:.3g})"
        )
        self.value = value
        self.error = error
        self.evaluations = evaluations
