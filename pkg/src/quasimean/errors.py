"""Exception hierarchy shared by every quasimean module."""


class QuasiMeanError(Exception):
    """Base class for errors raised by this package."""


class DomainError(QuasiMeanError, ValueError):
    """A value lies outside the domain (or image) a computation requires."""

    def __init__(self, message: str, value: float | None = None):
        super().__init__(message)
        self.value = value


class LengthMismatch(QuasiMeanError, ValueError):
    """Paired sequences (sample and weights, sample and arity) differ in length."""


class WeightError(QuasiMeanError, ValueError):
    """Weights are negative or do not sum to one."""


class UnknownMeanName(QuasiMeanError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class UnknownAggregator(UnknownMeanName):
    pass


class NonConvergence(QuasiMeanError, ArithmeticError):
    """Bisection did not reach its tolerance within the iteration budget."""


class EvaluatorFailure(QuasiMeanError, ArithmeticError):
    """A caller-supplied evaluator returned a non-finite value."""


class NoWitnessFound(QuasiMeanError, LookupError):
    """An exhaustive counterexample search came back empty."""


class ParseError(QuasiMeanError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class MixedWeightError(ParseError):
    """Some rows carry a weight and others do not."""
