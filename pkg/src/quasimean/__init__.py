"""Quasi-arithmetic (Kolmogorov-Nagumo) means, Chisini's equation and mean-axiom audits."""

from .axioms import AxiomReport, CheckResult, Witness, find_median_counterexample, full_audit, verify_witness
from .chisini import AggregateSpec, ChisiniSolution, Form, Status, chisini_solve, diagonal
from .errors import (
    DomainError,
    EvaluatorFailure,
    LengthMismatch,
    MixedWeightError,
    NonConvergence,
    NoWitnessFound,
    ParseError,
    QuasiMeanError,
    UnknownAggregator,
    UnknownMeanName,
    WeightError,
)
from .generators import EXP, IDENTITY, LOG, RECIPROCAL, SQUARE, Generator, Kind, forward, inverse, parse_generator, power
from .means import is_internal, median, named_mean, quasi_mean, weighted_quasi_mean

__version__ = "0.1.0"
