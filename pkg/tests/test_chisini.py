import math

import pytest

from conftest import log_uniform
from quasimean.chisini import (
    AGGREGATE_NAMES,
    AggregateSpec,
    Form,
    Status,
    chisini_solve,
    diagonal,
)
from quasimean.errors import DomainError, EvaluatorFailure, LengthMismatch, NonConvergence, UnknownMeanName
from quasimean.means import named_mean

BUILTIN_TO_MEAN = {
    "sum": "arithmetic",
    "product": "geometric",
    "sum-squares": "quadratic",
    "sum-inverses": "harmonic",
    "sum-exp": "exponential",
}


def definetti(v):
    a, b = v
    return (a - b) ** 2 + (a + b)


@pytest.mark.parametrize(
    "name, mu, n, expected",
    [("sum", 2.0, 3, 6.0), ("sum-squares", 5.0, 2, 50.0), ("product", 4.0, 2, 16.0), ("sum-inverses", 4.0, 2, 0.5), ("sum-exp", 0.0, 3, 3.0)],
)
def test_diagonal_examples(name, mu, n, expected):
    assert diagonal(AggregateSpec.builtin(name, n), mu, n) == expected


def test_diagonal_domain_and_custom():
    with pytest.raises(DomainError):
        diagonal(AggregateSpec.builtin("product", 2), -1.0)
    with pytest.raises(DomainError):
        diagonal(AggregateSpec.builtin("sum-squares", 2), -1.0)
    assert diagonal(AggregateSpec.custom(definetti, 2), 1.5) == 3.0
    with pytest.raises(EvaluatorFailure):
        diagonal(AggregateSpec.custom(lambda v: math.inf, 2), 1.0)


@pytest.mark.parametrize(
    "name, xs, root",
    [("sum", [1, 2, 3], 2.0), ("product", [2, 8], 4.0), ("sum-inverses", [1, 3], 1.5), ("sum-squares", [1, 7], 5.0)],
)
def test_builtin_examples(name, xs, root):
    sol = chisini_solve(AggregateSpec.builtin(name, len(xs)), xs)
    assert sol.status is Status.UNIQUE
    assert sol.roots == pytest.approx((root,), rel=1e-15)
    assert sol.internal == (True,)


def test_definetti_caveat():
    sol = chisini_solve(AggregateSpec.custom(definetti, 2), [0, 2])
    assert sol.target == 6.0
    assert sol.roots == pytest.approx((3.0,), rel=1e-12)
    assert sol.internal == (False,)
    assert sol.status is Status.UNIQUE
    assert sol.residuals[0] <= 1e-9


def test_product_over_reals_has_no_root():
    sol = chisini_solve(AggregateSpec.custom(lambda v: v[0] * v[1], 2), [-1, 1])
    assert sol.status is Status.NONE
    assert sol.roots == () and sol.internal == ()


def test_multiple_roots():
    # diagonal 2 mu**2 = 18 at both ends of the sample
    sol = chisini_solve(AggregateSpec.custom(lambda v: v[0] ** 2 + v[1] ** 2, 2), [-3, 3])
    assert sol.status is Status.MULTIPLE
    assert sol.roots == (-3.0, 3.0)
    assert sol.internal == (True, True)
    # mu**3 - 3 mu = -1.872 has roots 1.2 and 0.7856.. inside [0.6, 1.8]
    sol = chisini_solve(AggregateSpec.custom(lambda v: v[0] ** 3 - 3 * v[0], 1), [1.2])
    assert sol.status is Status.MULTIPLE
    other = (-1.2 + math.sqrt(1.44 + 6.24)) / 2
    assert sol.roots == pytest.approx((other, 1.2), rel=1e-12)


def test_search_stops_at_first_bracket_with_a_root():
    # +sqrt(5) lies outside [-3, 1]; only -sqrt(5) is reported and uniqueness is not certified
    sol = chisini_solve(AggregateSpec.custom(lambda v: v[0] ** 2 + v[1] ** 2, 2), [-3, 1])
    assert sol.roots == pytest.approx((-math.sqrt(5),), rel=1e-12)
    assert sol.status is Status.UNDETERMINED


def test_single_root_of_non_monotone_map_is_not_unique():
    # mu**2 = 0.09 on [-0.2, 0.8] has only the root 0.3, but the map turns at 0
    sol = chisini_solve(AggregateSpec.custom(lambda v: v[0] ** 2, 1), [0.3])
    assert sol.roots == pytest.approx((0.3,), rel=1e-12)
    assert sol.status is Status.UNDETERMINED


def test_oscillating_evaluator_is_undetermined():
    sol = chisini_solve(AggregateSpec.custom(lambda v: math.sin(200 * v[0]), 1), [0.3])
    assert sol.status is Status.UNDETERMINED
    for r in sol.roots:
        assert abs(math.sin(200 * r) - sol.target) <= 1e-9


def test_plateau_is_undetermined():
    sol = chisini_solve(AggregateSpec.custom(lambda v: 1.0 if v[0] > 0.5 else -1.0, 1), [0.2])
    assert sol.status is Status.UNDETERMINED


def test_sign_change_across_a_jump_is_not_a_root():
    # g jumps from +0.4 to -9.6 at 0.5; the only genuine root in [-0.4, 0.6] is 0.1
    jump = AggregateSpec.custom(lambda v: v[0] if v[0] <= 0.5 else v[0] - 10.0, 1)
    sol = chisini_solve(jump, [0.1])
    assert sol.roots == pytest.approx((0.1,), rel=1e-12)
    assert sol.bracket == pytest.approx((-0.4, 0.6))


def test_custom_sum_reproduces_closed_form(rng):
    for _ in range(50):
        xs = rng.uniform(-100, 100, int(rng.integers(1, 9))).tolist()
        closed = chisini_solve(AggregateSpec.builtin("sum", len(xs)), xs).roots[0]
        scanned = chisini_solve(AggregateSpec.custom(math.fsum, len(xs)), xs)
        assert scanned.status is Status.UNIQUE
        assert scanned.roots[0] == pytest.approx(closed, rel=1e-9, abs=1e-9)


def test_custom_domain_clips_search():
    # mu**2 = 4 has roots +-2; the domain keeps only the positive one
    sol = chisini_solve(AggregateSpec.custom(lambda v: v[0] * v[1], 2, domain=(0.0, math.inf)), [1, 4])
    assert sol.roots == pytest.approx((2.0,), rel=1e-12)


def test_constant_sample_custom():
    sol = chisini_solve(AggregateSpec.custom(math.fsum, 3), [5, 5, 5])
    assert sol.roots == pytest.approx((5.0,), rel=1e-12)


def test_errors():
    with pytest.raises(LengthMismatch):
        chisini_solve(AggregateSpec.builtin("sum", 3), [1, 2])
    with pytest.raises(DomainError):
        chisini_solve(AggregateSpec.builtin("product", 2), [-1, 2])
    with pytest.raises(DomainError):
        chisini_solve(AggregateSpec.builtin("sum-inverses", 2), [0, 2])
    with pytest.raises(EvaluatorFailure):
        chisini_solve(AggregateSpec.custom(lambda v: math.nan, 2), [1, 2])
    with pytest.raises(UnknownMeanName):
        AggregateSpec.builtin("sum-cubes", 2)
    with pytest.raises(ValueError):
        AggregateSpec(Form.CUSTOM, 2)


def test_non_convergence_is_reported(monkeypatch):
    import quasimean.chisini as ch

    monkeypatch.setattr(ch, "MAX_BISECTIONS", 3)
    with pytest.raises(NonConvergence):
        chisini_solve(AggregateSpec.custom(lambda v: v[0] ** 3 + v[1] ** 3, 2), [0.3, 0.9])


@pytest.mark.parametrize("name", AGGREGATE_NAMES)
def test_builtin_matches_named_mean(name, rng):
    for _ in range(500):
        xs = log_uniform(rng, int(rng.integers(2, 9)))
        sol = chisini_solve(AggregateSpec.builtin(name, len(xs)), xs)
        assert sol.status is Status.UNIQUE
        assert sol.roots[0] == pytest.approx(named_mean(xs, BUILTIN_TO_MEAN[name]), rel=1e-12)
        assert sol.residuals[0] <= 1e-9
        lo, hi = min(xs), max(xs)
        tol = 1e-9 * max(1, abs(hi))
        assert sol.internal[0] == (lo - tol <= sol.roots[0] <= hi + tol)


@pytest.mark.parametrize("name", AGGREGATE_NAMES)
def test_builtin_roots_certified_by_diagonal(name, rng):
    for _ in range(100):
        xs = log_uniform(rng, int(rng.integers(2, 9)), 0.1, 10)
        m = AggregateSpec.builtin(name, len(xs))
        sol = chisini_solve(m, xs)
        assert abs(diagonal(m, sol.roots[0]) - sol.target) <= 1e-9 * max(1, abs(sol.target))


def test_overflowing_targets_still_solve():
    sol = chisini_solve(AggregateSpec.builtin("product", 1000), [1e300] * 1000)
    assert sol.target == math.inf
    assert sol.roots[0] == pytest.approx(1e300, rel=1e-12)
    assert sol.residuals[0] <= 1e-9
    sol = chisini_solve(AggregateSpec.builtin("sum-exp", 2), [1000.0, 999.0])
    assert sol.roots[0] == pytest.approx(named_mean([1000.0, 999.0], "exponential"), rel=1e-15)
    assert sol.residuals[0] <= 1e-9
