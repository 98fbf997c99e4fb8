"""Generator functions ``f`` for quasi-arithmetic means.

A quasi-arithmetic mean is ``f^-1(mean(f(x_i)))`` for a continuous, strictly
monotone ``f``.  This module only knows the closed-form families below; the
means module builds the stable evaluation paths on top of them.

>>> forward(parse_generator("power:2"), 3.0)
9.0
>>> inverse(parse_generator("exp"), 1.0)
0.0
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DomainError, UnknownMeanName

__all__ = [
    "Kind",
    "Interval",
    "Generator",
    "IDENTITY",
    "SQUARE",
    "LOG",
    "RECIPROCAL",
    "EXP",
    "power",
    "forward",
    "inverse",
    "parse_generator",
]


class Kind(str, Enum):
    IDENTITY = "identity"
    SQUARE = "square"
    LOG = "log"
    RECIPROCAL = "reciprocal"
    POWER = "power"
    EXP = "exp"


@dataclass(frozen=True)
class Interval:
    """A real interval with optionally open ends."""

    lo: float = -math.inf
    hi: float = math.inf
    lo_open: bool = True
    hi_open: bool = True

    def __contains__(self, x: float) -> bool:
        if math.isnan(x):
            return False
        if x < self.lo or (self.lo_open and x == self.lo):
            return False
        if x > self.hi or (self.hi_open and x == self.hi):
            return False
        return True

    def __str__(self) -> str:
        left = "(" if self.lo_open else "["
        right = ")" if self.hi_open else "]"
        return f"{left}{self.lo:g}, {self.hi:g}{right}"


REALS = Interval()
NONNEGATIVE = Interval(0.0, math.inf, lo_open=False)
POSITIVE = Interval(0.0, math.inf)


def _is_odd_int(alpha: float) -> bool:
    return alpha > 0 and float(alpha).is_integer() and int(alpha) % 2 == 1


def _is_even_int(alpha: float) -> bool:
    return alpha > 0 and float(alpha).is_integer() and int(alpha) % 2 == 0


@dataclass(frozen=True)
class Generator:
    """One member of the closed-form generator families.

    ``alpha`` is only meaningful for ``Kind.POWER`` and must be nonzero there.
    """

    kind: Kind
    alpha: float | None = None

    def __post_init__(self) -> None:
        if self.kind is Kind.POWER:
            if self.alpha is None or not math.isfinite(self.alpha) or self.alpha == 0:
                raise ValueError(f"power generator needs a finite nonzero alpha, got {self.alpha!r}")
            object.__setattr__(self, "alpha", float(self.alpha))
        elif self.alpha is not None:
            raise ValueError(f"{self.kind.value} generator takes no alpha")

    @property
    def name(self) -> str:
        if self.kind is Kind.POWER:
            return f"power:{self.alpha!r}"
        return self.kind.value

    @property
    def exponent(self) -> float | None:
        """Exponent ``p`` when ``f(x) = x**p``, else ``None``."""
        if self.kind is Kind.SQUARE:
            return 2.0
        if self.kind is Kind.RECIPROCAL:
            return -1.0
        if self.kind is Kind.POWER:
            return self.alpha
        return None

    @property
    def domain(self) -> Interval:
        k = self.kind
        if k in (Kind.IDENTITY, Kind.EXP):
            return REALS
        if k is Kind.SQUARE:
            return NONNEGATIVE
        if k is Kind.POWER:
            if _is_odd_int(self.alpha):
                return REALS
            if _is_even_int(self.alpha):
                return NONNEGATIVE
        return POSITIVE

    @property
    def image(self) -> Interval:
        k = self.kind
        if k in (Kind.IDENTITY, Kind.LOG):
            return REALS
        if k is Kind.EXP or k is Kind.RECIPROCAL:
            return POSITIVE
        if k is Kind.SQUARE:
            return NONNEGATIVE
        # power: x**alpha maps the domain onto the same kind of interval
        return self.domain

    @property
    def increasing(self) -> bool:
        p = self.exponent
        return p is None or p > 0

    def check(self, x: float) -> None:
        if x not in self.domain:
            raise DomainError(f"{x!r} is outside the domain {self.domain} of the {self.name} generator", x)

    def forward(self, x: float) -> float:
        return forward(self, x)

    def inverse(self, y: float) -> float:
        return inverse(self, y)


IDENTITY = Generator(Kind.IDENTITY)
SQUARE = Generator(Kind.SQUARE)
LOG = Generator(Kind.LOG)
RECIPROCAL = Generator(Kind.RECIPROCAL)
EXP = Generator(Kind.EXP)


def power(alpha: float) -> Generator:
    return Generator(Kind.POWER, alpha)


def forward(g: Generator, x: float) -> float:
    """Evaluate ``f(x)``; raises DomainError outside ``g.domain``."""
    g.check(x)
    k = g.kind
    if k is Kind.IDENTITY:
        return float(x)
    if k is Kind.SQUARE:
        return x * x
    if k is Kind.LOG:
        return math.log(x)
    if k is Kind.RECIPROCAL:
        return 1.0 / x
    if k is Kind.EXP:
        return math.exp(x)
    if x < 0:
        # odd integer power only
        return -((-x) ** g.alpha)
    return x**g.alpha


def inverse(g: Generator, y: float) -> float:
    """Evaluate ``f^-1(y)``; raises DomainError outside the image of the domain."""
    if y not in g.image:
        raise DomainError(f"{y!r} is outside the image {g.image} of the {g.name} generator", y)
    k = g.kind
    if k is Kind.IDENTITY:
        return float(y)
    if k is Kind.SQUARE:
        return math.sqrt(y)
    if k is Kind.LOG:
        return math.exp(y)
    if k is Kind.RECIPROCAL:
        return 1.0 / y
    if k is Kind.EXP:
        return math.log(y)
    if y < 0:
        return -((-y) ** (1.0 / g.alpha))
    return y ** (1.0 / g.alpha)


_ALIASES = {
    "identity": IDENTITY,
    "square": SQUARE,
    "log": LOG,
    "reciprocal": RECIPROCAL,
    "exp": EXP,
}


def parse_generator(name: str) -> Generator:
    """Parse ``identity``, ``square``, ``log``, ``reciprocal``, ``exp`` or ``power:<alpha>``."""
    key = name.strip().lower()
    if key in _ALIASES:
        return _ALIASES[key]
    if key.startswith("power:"):
        try:
            alpha = float(key.split(":", 1)[1])
        except ValueError:
            raise UnknownMeanName(f"bad power exponent in {name!r}") from None
        try:
            return power(alpha)
        except ValueError as exc:
            raise UnknownMeanName(str(exc)) from None
    raise UnknownMeanName(f"unknown generator {name!r}")
