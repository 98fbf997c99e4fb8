"""Randomized audit of the Kolmogorov-Nagumo mean axioms.

Each ``check_*`` function draws ``trials`` random samples from a seeded
generator, evaluates the aggregator, and returns a :class:`CheckResult`.  A
failing check carries the first violating :class:`Witness`; re-evaluating it
with :func:`verify_witness` reproduces the violation.

Axioms quantify over every sample length, so the audit only covers lengths up
to ``MAX_N``.  Continuity is a Lipschitz spot check and can only falsify.

Samples are drawn log-uniformly from ``[1e-3, 1e3]`` when the aggregator is
restricted to positive inputs and uniformly from ``[-1e3, 1e3]`` otherwise.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import DomainError, NoWitnessFound, UnknownAggregator, UnknownMeanName
from .means import mean_generator, median, quasi_mean

__all__ = [
    "AXIOMS",
    "Aggregator",
    "Witness",
    "CheckResult",
    "AxiomReport",
    "aggregator",
    "check_reflexivity",
    "check_symmetry",
    "check_monotonicity",
    "check_continuity_spot",
    "check_associativity",
    "check_internality",
    "full_audit",
    "verify_witness",
    "find_median_counterexample",
]

AXIOMS = ("reflexivity", "symmetry", "monotonicity", "continuity-spot", "associativity", "internality")

MAX_N = 16
ASSOC_N = (3, 10)
POSITIVE_RANGE = (1e-3, 1e3)
REAL_RANGE = (-1e3, 1e3)

REFLEXIVITY_RTOL = 1e-9
SYMMETRY_RTOL = 1e-12
MONOTONICITY_ATOL = 1e-12
MONOTONICITY_STEP = 1e-3
MONOTONICITY_FLOOR = 1e-6
LIPSCHITZ = 1e6
CONTINUITY_STEPS = (1e-4, 1e-6)
ASSOCIATIVITY_RTOL = 1e-9
INTERNALITY_RTOL = 1e-9

DEFAULT_TOLERANCES = {
    "reflexivity": REFLEXIVITY_RTOL,
    "symmetry": SYMMETRY_RTOL,
    "monotonicity": MONOTONICITY_ATOL,
    "continuity-spot": LIPSCHITZ,
    "associativity": ASSOCIATIVITY_RTOL,
    "internality": INTERNALITY_RTOL,
}

Seed = Union[int, np.random.SeedSequence, np.random.Generator, None]
Values = tuple[float, ...]


@dataclass(frozen=True)
class Aggregator:
    """A named aggregator plus the domain its random inputs are drawn from."""

    name: str
    fn: Callable[[Sequence[float]], float] = field(compare=False)
    positive: bool = False

    def __call__(self, values: Sequence[float]) -> float:
        return float(self.fn(tuple(values)))


def aggregator(target: str | Aggregator | Callable, *, name: str | None = None, positive: bool = False) -> Aggregator:
    """Resolve a mean name, ``"median"`` or a callable into an :class:`Aggregator`.

    Built-in means draw from the positive range whenever their generator is
    undefined for negative inputs.  ``positive`` applies to callables only.
    """
    if isinstance(target, Aggregator):
        return target
    if isinstance(target, str):
        key = target.strip().lower()
        if key == "median":
            return Aggregator("median", median)
        try:
            g = mean_generator(key)
        except UnknownMeanName:
            raise UnknownAggregator(f"unknown aggregator {target!r}") from None
        return Aggregator(key, lambda xs, g=g: quasi_mean(xs, g), positive=g.domain.lo >= 0)
    if callable(target):
        return Aggregator(name or getattr(target, "__name__", "custom"), target, positive)
    raise UnknownAggregator(f"cannot audit {target!r}")


@dataclass(frozen=True)
class Witness:
    """A concrete violation: ``lhs`` and ``rhs`` should have agreed (or been ordered) but did not.

    ``other`` is the second input that was evaluated (permuted, perturbed or
    block-replaced sample); ``index`` is the perturbed coordinate, ``k`` the
    associativity block length, ``step`` the continuity step.
    """

    sample: Values
    lhs: float
    rhs: float
    delta: float
    k: int | None = None
    other: Values | None = None
    index: int | None = None
    step: float | None = None

    def to_dict(self) -> dict:
        d = {"sample": list(self.sample), "k": self.k, "lhs": self.lhs, "rhs": self.rhs, "delta": self.delta}
        if self.other is not None:
            d["other"] = list(self.other)
        if self.index is not None:
            d["index"] = self.index
        if self.step is not None:
            d["step"] = self.step
        return d


@dataclass(frozen=True)
class CheckResult:
    axiom: str
    verdict: str
    trials: int
    skipped: int = 0
    witness: Witness | None = None
    error: str | None = None
    # monotonicity only: did every trial strictly increase?
    strict: bool | None = None

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        d = {
            "axiom": self.axiom,
            "verdict": self.verdict,
            "trials": self.trials,
            "skipped": self.skipped,
            "witness": None if self.witness is None else self.witness.to_dict(),
        }
        if self.strict is not None:
            d["strict"] = self.strict
        if self.error is not None:
            d["error"] = self.error
        return d


@dataclass(frozen=True)
class AxiomReport:
    target: str
    trials: int
    seed: int | None
    checks: tuple[CheckResult, ...]

    @property
    def verdicts(self) -> dict[str, str]:
        return {c.axiom: c.verdict for c in self.checks}

    @property
    def witnesses(self) -> dict[str, Witness]:
        return {c.axiom: c.witness for c in self.checks if c.witness is not None}

    @property
    def failed(self) -> list[str]:
        return [c.axiom for c in self.checks if not c.passed]

    def __getitem__(self, axiom: str) -> CheckResult:
        for c in self.checks:
            if c.axiom == axiom:
                return c
        raise KeyError(axiom)

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "trials": self.trials,
            "seed": self.seed,
            "results": [c.to_dict() for c in self.checks],
        }


def _rng(seed: Seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _draw(rng: np.random.Generator, n: int, positive: bool) -> Values:
    if positive:
        lo, hi = POSITIVE_RANGE
        return tuple(10.0 ** rng.uniform(math.log10(lo), math.log10(hi), n))
    return tuple(float(v) for v in rng.uniform(*REAL_RANGE, n))


def _length(rng: np.random.Generator, lo: int, hi: int) -> int:
    return int(rng.integers(lo, hi + 1))


def _rel_gap(a: float, b: float) -> float:
    return abs(a - b) / max(1.0, abs(a), abs(b))


def _bump(xs: Values, i: int, h: float) -> Values:
    return xs[:i] + (xs[i] + h,) + xs[i + 1 :]


def _step(x: float) -> float:
    return max(MONOTONICITY_STEP * abs(x), MONOTONICITY_FLOOR)


def check_reflexivity(a, trials: int, seed: Seed = None, *, tol: float = REFLEXIVITY_RTOL, max_n: int = MAX_N) -> CheckResult:
    """``a(c, ..., c) == c`` within ``tol * max(1, |c|)`` for random ``c`` and ``n <= max_n``."""
    a, rng = aggregator(a), _rng(seed)
    _require_trials(trials)
    for _ in range(trials):
        n = _length(rng, 1, max_n)
        c = _draw(rng, 1, a.positive)[0]
        xs = (c,) * n
        v = a(xs)
        if not abs(v - c) <= tol * max(1.0, abs(c)):
            return CheckResult("reflexivity", "fail", trials, witness=Witness(xs, v, c, abs(v - c)))
    return CheckResult("reflexivity", "pass", trials)


def check_symmetry(a, trials: int, seed: Seed = None, *, tol: float = SYMMETRY_RTOL, max_n: int = MAX_N) -> CheckResult:
    """Random permutations leave the output unchanged within ``tol`` (relative, floor 1)."""
    a, rng = aggregator(a), _rng(seed)
    _require_trials(trials)
    for _ in range(trials):
        xs = _draw(rng, _length(rng, 2, max_n), a.positive)
        perm = tuple(xs[i] for i in rng.permutation(len(xs)))
        lhs, rhs = a(xs), a(perm)
        if not _rel_gap(lhs, rhs) <= tol:
            return CheckResult("symmetry", "fail", trials, witness=Witness(xs, lhs, rhs, abs(lhs - rhs), other=perm))
    return CheckResult("symmetry", "pass", trials)


def check_monotonicity(a, trials: int, seed: Seed = None, *, tol: float = MONOTONICITY_ATOL, max_n: int = MAX_N) -> CheckResult:
    """Raising one coordinate by ``max(1e-3 * |x_i|, 1e-6)`` never lowers the output by more than ``tol``.

    The verdict uses this non-strict form; ``strict`` records whether every
    trial also produced a strict increase.
    """
    a, rng = aggregator(a), _rng(seed)
    _require_trials(trials)
    strict = True
    for _ in range(trials):
        xs = _draw(rng, _length(rng, 1, max_n), a.positive)
        i = int(rng.integers(len(xs)))
        up = _bump(xs, i, _step(xs[i]))
        lhs, rhs = a(up), a(xs)
        if lhs < rhs - tol:
            w = Witness(xs, lhs, rhs, rhs - lhs, other=up, index=i)
            return CheckResult("monotonicity", "fail", trials, witness=w, strict=False)
        strict = strict and lhs > rhs
    return CheckResult("monotonicity", "pass", trials, strict=strict)


def check_continuity_spot(
    a,
    trials: int,
    seed: Seed = None,
    *,
    tol: float = LIPSCHITZ,
    steps: Sequence[float] = CONTINUITY_STEPS,
    max_n: int = MAX_N,
) -> CheckResult:
    """Falsification-only continuity test: ``|a(x + h e_i) - a(x)| <= tol * h`` for each step ``h``."""
    a, rng = aggregator(a), _rng(seed)
    _require_trials(trials)
    for _ in range(trials):
        xs = _draw(rng, _length(rng, 1, max_n), a.positive)
        i = int(rng.integers(len(xs)))
        base = a(xs)
        for h in steps:
            moved = _bump(xs, i, h)
            v = a(moved)
            if not abs(v - base) <= tol * h:
                w = Witness(xs, v, base, abs(v - base), other=moved, index=i, step=h)
                return CheckResult("continuity-spot", "fail", trials, witness=w)
    return CheckResult("continuity-spot", "pass", trials)


def _associativity_pair(a: Aggregator, xs: Values, k: int) -> tuple[float, float, Values]:
    block = a(xs[:k])
    other = (block,) * k + xs[k:]
    return a(xs), a(other), other


def check_associativity(
    a, trials: int, seed: Seed = None, *, tol: float = ASSOCIATIVITY_RTOL, n_range: tuple[int, int] = ASSOC_N
) -> CheckResult:
    """Replacing a leading block of ``k`` values by ``k`` copies of its own mean keeps the mean.

    Trials whose replacement value falls outside the aggregator's domain are
    skipped and counted, not failed.
    """
    a, rng = aggregator(a), _rng(seed)
    _require_trials(trials)
    skipped = 0
    for _ in range(trials):
        xs = _draw(rng, _length(rng, *n_range), a.positive)
        k = int(rng.integers(1, len(xs)))
        try:
            lhs, rhs, other = _associativity_pair(a, xs, k)
        except DomainError:
            skipped += 1
            continue
        if not _rel_gap(lhs, rhs) <= tol:
            w = Witness(xs, lhs, rhs, abs(lhs - rhs), k=k, other=other)
            return CheckResult("associativity", "fail", trials, skipped=skipped, witness=w)
    return CheckResult("associativity", "pass", trials, skipped=skipped)


def check_internality(a, trials: int, seed: Seed = None, *, tol: float = INTERNALITY_RTOL, max_n: int = MAX_N) -> CheckResult:
    """``min(x) - t <= a(x) <= max(x) + t`` with ``t = tol * max(1, |max(x)|)``."""
    a, rng = aggregator(a), _rng(seed)
    _require_trials(trials)
    for _ in range(trials):
        xs = _draw(rng, _length(rng, 1, max_n), a.positive)
        v = a(xs)
        slack = tol * max(1.0, abs(max(xs)))
        lo, hi = min(xs), max(xs)
        if v < lo - slack:
            return CheckResult("internality", "fail", trials, witness=Witness(xs, v, lo, lo - v))
        if v > hi + slack:
            return CheckResult("internality", "fail", trials, witness=Witness(xs, v, hi, v - hi))
    return CheckResult("internality", "pass", trials)


_CHECKS = {
    "reflexivity": check_reflexivity,
    "symmetry": check_symmetry,
    "monotonicity": check_monotonicity,
    "continuity-spot": check_continuity_spot,
    "associativity": check_associativity,
    "internality": check_internality,
}


def _require_trials(trials: int) -> None:
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")


def full_audit(a, trials: int, seed: int | None = 0, *, tolerances: dict[str, float] | None = None) -> AxiomReport:
    """Run all six checks, each on its own substream spawned from ``seed``.

    A check that raises is reported with verdict ``"error"`` instead of
    aborting the audit.
    """
    a = aggregator(a)
    _require_trials(trials)
    tolerances = {**DEFAULT_TOLERANCES, **(tolerances or {})}
    streams = np.random.SeedSequence(seed).spawn(len(AXIOMS))
    results = []
    for axiom, stream in zip(AXIOMS, streams):
        try:
            results.append(_CHECKS[axiom](a, trials, stream, tol=tolerances[axiom]))
        except Exception as exc:  # noqa: BLE001 - custom evaluators may raise anything
            results.append(CheckResult(axiom, "error", trials, error=f"{type(exc).__name__}: {exc}"))
    return AxiomReport(a.name, trials, seed, tuple(results))


def verify_witness(a, axiom: str, w: Witness, tol: float | None = None) -> bool:
    """Re-evaluate ``w`` from scratch; True iff it still violates ``axiom`` beyond ``tol``."""
    a = aggregator(a)
    tol = DEFAULT_TOLERANCES[axiom] if tol is None else tol
    xs = w.sample
    if axiom == "reflexivity":
        c = xs[0]
        return abs(a(xs) - c) > tol * max(1.0, abs(c))
    if axiom == "symmetry":
        if sorted(w.other) != sorted(xs):
            return False
        return _rel_gap(a(xs), a(w.other)) > tol
    if axiom == "monotonicity":
        if w.other != _bump(xs, w.index, _step(xs[w.index])):
            return False
        return a(w.other) < a(xs) - tol
    if axiom == "continuity-spot":
        return abs(a(_bump(xs, w.index, w.step)) - a(xs)) > tol * w.step
    if axiom == "associativity":
        lhs, rhs, _ = _associativity_pair(a, xs, w.k)
        return _rel_gap(lhs, rhs) > tol
    if axiom == "internality":
        v = a(xs)
        slack = tol * max(1.0, abs(max(xs)))
        return not (min(xs) - slack <= v <= max(xs) + slack)
    raise KeyError(axiom)


def find_median_counterexample(
    max_n: int,
    value_grid: Sequence[float],
    *,
    include_even: bool = False,
    aggregate: Callable[[Sequence[float]], float] = median,
    tol: float = ASSOCIATIVITY_RTOL,
) -> Witness:
    """Exhaustive search for the smallest associativity violation over a value grid.

    Samples are ordered selections of distinct grid values, enumerated by
    length, then lexicographically, then by block length ``k``.  By default
    only odd ``n`` and odd ``k`` are tried, so the median of every block and
    sample is an actual order statistic and the witness does not depend on
    how ties between two middle values are broken.

    >>> w = find_median_counterexample(5, [1, 2, 3, 4, 100])
    >>> w.sample, w.k, w.lhs, w.rhs
    ((1.0, 2.0, 3.0, 4.0, 100.0), 3, 3.0, 2.0)
    """
    if max_n < 3:
        raise ValueError(f"max_n must be >= 3, got {max_n}")
    grid = sorted({float(v) for v in value_grid})
    a = aggregator(aggregate, name="median")
    for n in range(2 if include_even else 3, max_n + 1):
        if not include_even and n % 2 == 0:
            continue
        for xs in itertools.permutations(grid, n):
            for k in range(1, n):
                if not include_even and k % 2 == 0:
                    continue
                lhs, rhs, other = _associativity_pair(a, xs, k)
                if _rel_gap(lhs, rhs) > tol:
                    return Witness(xs, lhs, rhs, abs(lhs - rhs), k=k, other=other)
    raise NoWitnessFound(f"no associativity violation with n <= {max_n} over grid {grid}")
