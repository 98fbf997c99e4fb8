"""Solving ``M(mu, ..., mu) = M(x_1, ..., x_n)`` for a representative value ``mu``.

The five built-in aggregates have closed-form solutions obtained by inverting
their diagonal map.  Custom aggregates go through a grid scan followed by
bisection on every sign change; see :func:`chisini_solve`.

A root need not lie between the smallest and largest value of the data.
``ChisiniSolution.internal`` flags each root accordingly:

>>> sol = chisini_solve(AggregateSpec.custom(lambda v: (v[0] - v[1]) ** 2 + v[0] + v[1], 2), [0, 2])
>>> sol.roots, sol.internal
((3.0,), (False,))
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from enum import Enum

from .errors import DomainError, EvaluatorFailure, LengthMismatch, NonConvergence, UnknownMeanName
from .means import as_sample, internality_tol

__all__ = [
    "Form",
    "Status",
    "AggregateSpec",
    "ChisiniSolution",
    "diagonal",
    "chisini_solve",
    "AGGREGATE_NAMES",
    "GRID_POINTS",
    "MAX_EXPANSION",
    "MAX_BISECTIONS",
]

log = logging.getLogger(__name__)

GRID_POINTS = 1024
MAX_EXPANSION = 2**20
MAX_BISECTIONS = 200
BISECT_RTOL = 1e-12
RESIDUAL_RTOL = 1e-9
MERGE_RTOL = 1e-9
OSCILLATION_LIMIT = 32


class Form(str, Enum):
    SUM = "sum"
    PRODUCT = "product"
    SUM_SQUARES = "sum-squares"
    SUM_INVERSES = "sum-inverses"
    SUM_EXP = "sum-exp"
    CUSTOM = "custom"


AGGREGATE_NAMES = tuple(f.value for f in Form if f is not Form.CUSTOM)

# forms restricted to positive inputs; sum-squares only needs mu >= 0
_POSITIVE_FORMS = (Form.PRODUCT, Form.SUM_INVERSES)


class Status(str, Enum):
    UNIQUE = "unique"
    MULTIPLE = "multiple"
    NONE = "none"
    UNDETERMINED = "undetermined-resolution"


@dataclass(frozen=True)
class AggregateSpec:
    """An aggregate functional ``M`` of fixed arity.

    ``evaluator`` is required for ``Form.CUSTOM`` and must be deterministic.
    ``domain`` optionally clips the custom root search to a closed interval.
    """

    form: Form
    arity: int
    evaluator: Callable[[Sequence[float]], float] | None = field(default=None, compare=False)
    domain: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        if self.arity < 1:
            raise ValueError(f"arity must be >= 1, got {self.arity}")
        if (self.form is Form.CUSTOM) != (self.evaluator is not None):
            raise ValueError("an evaluator is required for custom aggregates and only for them")

    @classmethod
    def builtin(cls, name: str | Form, arity: int) -> AggregateSpec:
        try:
            form = Form(name)
        except ValueError:
            raise UnknownMeanName(f"unknown aggregate {name!r}; known: {', '.join(AGGREGATE_NAMES)}") from None
        if form is Form.CUSTOM:
            raise ValueError("use AggregateSpec.custom for custom aggregates")
        return cls(form, arity)

    @classmethod
    def custom(
        cls,
        evaluator: Callable[[Sequence[float]], float],
        arity: int,
        domain: tuple[float, float] | None = None,
    ) -> AggregateSpec:
        return cls(Form.CUSTOM, arity, evaluator, domain)

    def check(self, x: float) -> None:
        if self.form in _POSITIVE_FORMS and not x > 0:
            raise DomainError(f"{self.form.value} aggregate requires positive values, got {x!r}", x)
        if self.form is Form.SUM_SQUARES and not x >= 0:
            raise DomainError(f"sum-squares aggregate requires nonnegative values, got {x!r}", x)
        if self.domain is not None and not self.domain[0] <= x <= self.domain[1]:
            raise DomainError(f"{x!r} is outside the aggregate domain {list(self.domain)}", x)

    def evaluate(self, values: Sequence[float]) -> float:
        """``M(values)``; may return ``inf`` when a product or exponential sum overflows."""
        for x in values:
            self.check(x)
        f = self.form
        if f is Form.SUM:
            return math.fsum(values)
        if f is Form.PRODUCT:
            return _guarded(lambda: math.prod(values))
        if f is Form.SUM_SQUARES:
            return math.fsum(x * x for x in values)
        if f is Form.SUM_INVERSES:
            return math.fsum(1.0 / x for x in values)
        if f is Form.SUM_EXP:
            return _guarded(lambda: math.fsum(math.exp(x) for x in values))
        y = self.evaluator(values)
        try:
            y = float(y)
        except (TypeError, ValueError):
            raise EvaluatorFailure(f"evaluator returned non-numeric {y!r}") from None
        if not math.isfinite(y):
            raise EvaluatorFailure(f"evaluator returned {y!r} at {list(values)!r}")
        return y


def _guarded(fn: Callable[[], float]) -> float:
    try:
        return fn()
    except OverflowError:
        return math.inf


@dataclass(frozen=True)
class ChisiniSolution:
    roots: tuple[float, ...]
    status: Status
    internal: tuple[bool, ...]
    target: float
    residuals: tuple[float, ...] = ()
    bracket: tuple[float, float] | None = None

    def to_dict(self) -> dict:
        return {
            "roots": list(self.roots),
            "status": self.status.value,
            "internal": list(self.internal),
            "target": self.target,
            "residuals": list(self.residuals),
        }


def diagonal(m: AggregateSpec, mu: float, n: int | None = None) -> float:
    """``M(mu, ..., mu)`` with ``n`` copies (``m.arity`` by default)."""
    n = m.arity if n is None else n
    m.check(mu)
    f = m.form
    if f is Form.SUM:
        return n * mu
    if f is Form.PRODUCT:
        return _guarded(lambda: mu**n)
    if f is Form.SUM_SQUARES:
        return n * mu * mu
    if f is Form.SUM_INVERSES:
        return n / mu
    if f is Form.SUM_EXP:
        return _guarded(lambda: n * math.exp(mu))
    return m.evaluate([mu] * n)


def _log_target(m: AggregateSpec, xs: Sequence[float]) -> float:
    if m.form is Form.PRODUCT:
        return math.fsum(math.log(x) for x in xs)
    top = max(xs)
    return top + math.log(math.fsum(math.exp(x - top) for x in xs))


def _closed_form(m: AggregateSpec, xs: tuple[float, ...], target: float) -> float:
    n = len(xs)
    f = m.form
    if f is Form.SUM:
        return target / n
    if f is Form.SUM_SQUARES:
        return math.sqrt(target / n)
    if f is Form.SUM_INVERSES:
        return n / target
    if f is Form.PRODUCT:
        # mu**n = prod(x); take the n-th root in log space if the product over/underflows
        if 0 < target < math.inf and target >= 1e-300:
            return target ** (1.0 / n)
        return math.exp(_log_target(m, xs) / n)
    # sum-exp: n * exp(mu) = sum(exp(x))
    if target < math.inf:
        return math.log(target / n)
    return _log_target(m, xs) - math.log(n)


def _residual(m: AggregateSpec, xs: Sequence[float], mu: float, target: float) -> float:
    """``|M(mu, ..., mu) - target| / max(1, |target|)``, overflow-safe for product and sum-exp."""
    n = len(xs)
    if m.form in (Form.PRODUCT, Form.SUM_EXP):
        lt = _log_target(m, xs)
        ld = n * math.log(mu) if m.form is Form.PRODUCT else math.log(n) + mu
        return abs(math.expm1(ld - lt)) * math.exp(min(0.0, lt))
    return abs(diagonal(m, mu, n) - target) / max(1.0, abs(target))


def _internal_flags(roots: Sequence[float], xs: Sequence[float]) -> tuple[bool, ...]:
    tol = internality_tol(xs)
    lo, hi = min(xs), max(xs)
    return tuple(lo - tol <= r <= hi + tol for r in roots)


def chisini_solve(m: AggregateSpec, values: Sequence[float]) -> ChisiniSolution:
    """Find every ``mu`` with ``M(mu, ..., mu) = M(values)``.

    Built-in forms are solved in closed form (status ``UNIQUE``).  Custom
    forms are scanned on a uniform grid of ``GRID_POINTS`` points over
    ``[min(x), max(x)]``; while no root shows up the bracket is widened
    symmetrically by a factor of two, up to ``MAX_EXPANSION`` times the
    sample range.  Every sign change is bisected and kept only if the
    residual passes.  Roots where the diagonal map touches the target without
    crossing it are not detected.

    A single root is reported ``UNIQUE`` only if the diagonal map is strictly
    monotone on the grid; otherwise uniqueness is not certified and the
    status is ``UNDETERMINED``, as it is for 32 or more sign changes or
    roots (an oscillating evaluator, or a target hit on a whole plateau).
    """
    xs = as_sample(values)
    if len(xs) != m.arity:
        raise LengthMismatch(f"aggregate has arity {m.arity} but the sample has {len(xs)} values")
    target = m.evaluate(xs)

    if m.form is not Form.CUSTOM:
        mu = _closed_form(m, xs, target)
        return ChisiniSolution(
            roots=(mu,),
            status=Status.UNIQUE,
            internal=_internal_flags([mu], xs),
            target=target,
            residuals=(_residual(m, xs, mu, target),),
        )
    return _scan_solve(m, xs, target)


def _scan_solve(m: AggregateSpec, xs: tuple[float, ...], target: float) -> ChisiniSolution:
    n = len(xs)
    lo0, hi0 = min(xs), max(xs)
    center = 0.5 * (lo0 + hi0)
    width = hi0 - lo0
    if width == 0:
        width = max(1.0, abs(center))
    scale = max(abs(lo0), abs(hi0))
    atol = BISECT_RTOL * scale if scale > 0 else BISECT_RTOL
    res_tol = RESIDUAL_RTOL * max(1.0, abs(target))

    def g(mu: float) -> float:
        return m.evaluate([mu] * n) - target

    factor = 1
    lo, hi = lo0, hi0
    while True:
        if factor > 1 or hi0 == lo0:
            half = 0.5 * width * factor
            lo, hi = center - half, center + half
        if m.domain is not None:
            lo, hi = max(lo, m.domain[0]), min(hi, m.domain[1])
        roots, changes, monotone = _scan(g, lo, hi, atol, res_tol)
        if roots or factor >= MAX_EXPANSION:
            break
        factor *= 2

    roots = _merge(roots, MERGE_RTOL * width)
    if changes >= OSCILLATION_LIMIT or len(roots) >= OSCILLATION_LIMIT:
        status = Status.UNDETERMINED
    elif len(roots) >= 2:
        status = Status.MULTIPLE
    elif len(roots) == 1:
        status = Status.UNIQUE if monotone else Status.UNDETERMINED
    else:
        status = Status.NONE
    log.debug("scan over [%g, %g] found %d root(s), %d sign change(s)", lo, hi, len(roots), changes)
    return ChisiniSolution(
        roots=tuple(roots),
        status=status,
        internal=_internal_flags(roots, xs),
        target=target,
        residuals=tuple(abs(g(r)) / max(1.0, abs(target)) for r in roots),
        bracket=(lo, hi),
    )


def _scan(g, lo: float, hi: float, atol: float, res_tol: float) -> tuple[list[float], int, bool]:
    step = (hi - lo) / (GRID_POINTS - 1)
    grid = [lo + i * step for i in range(GRID_POINTS - 1)] + [hi]
    vals = [g(mu) for mu in grid]

    roots: list[float] = []
    changes = 0
    for i, (mu, v) in enumerate(zip(grid, vals)):
        if v == 0:
            roots.append(mu)
            continue
        if i + 1 < len(grid):
            w = vals[i + 1]
            if w != 0 and (v < 0) != (w < 0):
                changes += 1
                r = _bisect(g, mu, grid[i + 1], v, atol)
                if abs(g(r)) <= res_tol:
                    roots.append(r)

    diffs = [b - a for a, b in zip(vals, vals[1:])]
    monotone = all(d > 0 for d in diffs) or all(d < 0 for d in diffs)
    return roots, changes, monotone


def _bisect(g, a: float, b: float, ga: float, atol: float) -> float:
    for _ in range(MAX_BISECTIONS):
        mid = 0.5 * (a + b)
        if b - a <= max(atol, BISECT_RTOL * abs(mid)) or mid in (a, b):
            return mid
        gm = g(mid)
        if gm == 0:
            return mid
        if (gm < 0) == (ga < 0):
            a, ga = mid, gm
        else:
            b = mid
    raise NonConvergence(f"bisection on [{a!r}, {b!r}] did not converge in {MAX_BISECTIONS} steps")


def _merge(roots: list[float], gap: float) -> list[float]:
    out: list[float] = []
    for r in sorted(roots):
        if out and r - out[-1] <= gap:
            continue
        out.append(r)
    return out
