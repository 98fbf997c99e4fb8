"""Unweighted and weighted quasi-arithmetic means.

Every mean here is ``f^-1(sum(q_i * f(x_i)))`` for a generator ``f``, but
none of the built-in families is evaluated that literally:

* identity: compensated summation of the values;
* log (geometric): ``m * exp(mean(log(x_i / m)))`` with ``m`` the largest value,
  so ``prod(x_i)`` is never formed;
* exp (exponential): ``m + log(mean(exp(x_i - m)))``, the log-sum-exp shift;
* powers (square, reciprocal, ``x**alpha``) on positive data:
  ``r * exp(log1p(mean(expm1(p * log(x_i / r)))) / p)`` with ``r`` the
  largest value for ``p > 0`` and the smallest for ``p < 0``.  Every term lies
  in ``[-1, 0]`` so nothing overflows, and the ``alpha -> 0`` limit stays
  accurate.

Values are sorted before accumulation and sums go through ``math.fsum``, so
permuting a sample gives a bit-identical result.  A constant sample returns
its value exactly.
"""

from __future__ import annotations

import math
import sys
from collections.abc import Sequence
from typing import Protocol

from .errors import DomainError, LengthMismatch, UnknownMeanName, WeightError
from .generators import EXP, IDENTITY, LOG, RECIPROCAL, SQUARE, Generator, Kind, power

__all__ = [
    "MEAN_NAMES",
    "WEIGHT_TOL",
    "as_sample",
    "check_weights",
    "renormalize",
    "quasi_mean",
    "weighted_quasi_mean",
    "mean_generator",
    "named_mean",
    "median",
    "is_internal",
    "internality_tol",
]

WEIGHT_TOL = 1e-12

MEAN_NAMES = ("arithmetic", "quadratic", "geometric", "harmonic", "exponential", "power:<alpha>", "median")

_NAMED = {
    "arithmetic": IDENTITY,
    "quadratic": SQUARE,
    "geometric": LOG,
    "harmonic": RECIPROCAL,
    "exponential": EXP,
}

_TINY = sys.float_info.min


class GeneratorLike(Protocol):
    def forward(self, x: float) -> float: ...

    def inverse(self, y: float) -> float: ...


def as_sample(values: Sequence[float]) -> tuple[float, ...]:
    xs = tuple(float(v) for v in values)
    if not xs:
        raise ValueError("a sample needs at least one value")
    for x in xs:
        if not math.isfinite(x):
            raise DomainError(f"sample values must be finite, got {x!r}", x)
    return xs


def check_weights(weights: Sequence[float], n: int) -> tuple[float, ...]:
    """Validate a weight vector for a sample of length ``n`` (no renormalization)."""
    qs = tuple(float(q) for q in weights)
    if len(qs) != n:
        raise LengthMismatch(f"{len(qs)} weights for {n} values")
    for q in qs:
        if not math.isfinite(q) or q < 0:
            raise WeightError(f"weights must be finite and nonnegative, got {q!r}")
    total = math.fsum(qs)
    if abs(total - 1.0) > WEIGHT_TOL:
        raise WeightError(f"weights sum to {total!r}, not 1 (tolerance {WEIGHT_TOL:g})")
    return qs


def renormalize(weights: Sequence[float]) -> tuple[float, ...]:
    qs = tuple(float(q) for q in weights)
    if any(not math.isfinite(q) or q < 0 for q in qs):
        raise WeightError("weights must be finite and nonnegative")
    total = math.fsum(qs)
    if total <= 0:
        raise WeightError("weights sum to zero")
    return tuple(q / total for q in qs)


def _avg(terms: Sequence[float], qs: Sequence[float] | None) -> float:
    if qs is None:
        return math.fsum(terms) / len(terms)
    return math.fsum(q * t for q, t in zip(qs, terms))


def _log_ratio(x: float, ref: float) -> float:
    r = x / ref
    if _TINY <= r < math.inf:
        return math.log(r)
    return math.log(x) - math.log(ref)


def _stable_mean(xs: tuple[float, ...], qs: tuple[float, ...] | None, g: Generator) -> float:
    for x in xs:
        g.check(x)
    pairs = sorted(zip(xs, qs)) if qs is not None else [(x, None) for x in sorted(xs)]
    if qs is not None:
        # zero-weight entries must be in the domain but never enter the sum
        pairs = [(x, q) for x, q in pairs if q > 0]
    vals = [x for x, _ in pairs]
    ws = None if qs is None else [q for _, q in pairs]

    if g.kind is Kind.IDENTITY:
        return _avg(vals, ws)
    if g.kind is Kind.LOG:
        m = vals[-1]
        return m * math.exp(_avg([_log_ratio(x, m) for x in vals], ws))
    if g.kind is Kind.EXP:
        m = vals[-1]
        return m + math.log(_avg([math.exp(x - m) for x in vals], ws))

    p = g.exponent
    if vals[0] <= 0:
        # zeros (even powers) or negatives (odd powers): x**p is homogeneous
        s = max(abs(vals[0]), abs(vals[-1]))
        if s == 0:
            return 0.0
        return s * g.inverse(_avg([g.forward(x / s) for x in vals], ws))
    ref = vals[-1] if p > 0 else vals[0]
    terms = [math.expm1(p * _log_ratio(x, ref)) for x in vals]
    return ref * math.exp(math.log1p(_avg(terms, ws)) / p)


def _generic_mean(xs: tuple[float, ...], qs: tuple[float, ...] | None, g: GeneratorLike) -> float:
    check = getattr(g, "check", None)
    if check is not None:
        for x in xs:
            check(x)
    if qs is None:
        return g.inverse(_avg([g.forward(x) for x in sorted(xs)], None))
    pairs = sorted((x, q) for x, q in zip(xs, qs) if q > 0)
    return g.inverse(_avg([g.forward(x) for x, _ in pairs], [q for _, q in pairs]))


def quasi_mean(values: Sequence[float], g: Generator | GeneratorLike) -> float:
    """``f^-1((1/n) * sum(f(x_i)))`` for generator ``g``.

    Built-in :class:`Generator` instances use the overflow-free paths described
    in the module docstring.  Any other object with ``forward``/``inverse``
    methods is evaluated literally.

    >>> quasi_mean([2.0, 8.0], LOG)
    4.0
    >>> quasi_mean([1.0, 7.0], SQUARE)
    5.0
    """
    xs = as_sample(values)
    if isinstance(g, Generator):
        return _stable_mean(xs, None, g)
    return _generic_mean(xs, None, g)


def weighted_quasi_mean(
    values: Sequence[float], weights: Sequence[float], g: Generator | GeneratorLike
) -> float:
    """``f^-1(sum(q_i * f(x_i)))``; weights must be nonnegative and sum to one."""
    xs = as_sample(values)
    qs = check_weights(weights, len(xs))
    if isinstance(g, Generator):
        return _stable_mean(xs, qs, g)
    return _generic_mean(xs, qs, g)


def mean_generator(name: str) -> Generator:
    """Generator behind a mean name (``arithmetic``, ``power:0.5``, ...)."""
    key = name.strip().lower()
    if key in _NAMED:
        return _NAMED[key]
    if key.startswith("power:"):
        try:
            return power(float(key.split(":", 1)[1]))
        except ValueError:
            raise UnknownMeanName(f"bad power mean {name!r}; expected power:<nonzero alpha>") from None
    raise UnknownMeanName(f"unknown mean {name!r}; known: {', '.join(MEAN_NAMES)}")


def named_mean(values: Sequence[float], name: str, weights: Sequence[float] | None = None) -> float:
    key = name.strip().lower()
    if key == "median":
        if weights is not None:
            raise ValueError("the median takes no weights")
        return median(values)
    g = mean_generator(key)
    try:
        if weights is None:
            return quasi_mean(values, g)
        return weighted_quasi_mean(values, weights, g)
    except DomainError as exc:
        raise DomainError(f"{key} mean: {exc}", exc.value) from exc


def median(values: Sequence[float]) -> float:
    """Middle order statistic; the two central ones are averaged for even n.

    >>> median([1, 2, 3, 4, 100])
    3.0
    >>> median([4, 1, 3, 2])
    2.5
    """
    xs = sorted(as_sample(values))
    n = len(xs)
    mid = n // 2
    if n % 2:
        return xs[mid]
    a, b = xs[mid - 1], xs[mid]
    s = a + b
    return s / 2 if math.isfinite(s) else a / 2 + b / 2


def internality_tol(values: Sequence[float], rel: float = 1e-9) -> float:
    return rel * max(1.0, abs(max(values)))


def is_internal(value: float, values: Sequence[float], rel: float = 1e-9) -> bool:
    """Cauchy's condition ``min(x) <= value <= max(x)``, with slack ``rel * max(1, |max(x)|)``."""
    tol = internality_tol(values, rel)
    return min(values) - tol <= value <= max(values) + tol
