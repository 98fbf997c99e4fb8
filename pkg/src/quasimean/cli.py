"""Command-line interface.

::

    quasimean mean --means arithmetic,geometric data.csv
    quasimean chisini --aggregate product data.csv
    quasimean audit --target median --seed 7 --strict

Structured output (the default) is one JSON document on stdout, written with
shortest round-trip float formatting so repeated runs are byte-identical.
Diagnostics go to stderr.  Exit codes: 0 success, 2 domain or parse error,
3 Chisini equation without a root, 4 audit failure under ``--strict``.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import __version__
from .axioms import AXIOMS, DEFAULT_TOLERANCES, aggregator, find_median_counterexample, full_audit
from .chisini import AGGREGATE_NAMES, AggregateSpec, Status, chisini_solve
from .dataset import FORMATS, Dataset, parse_dataset
from .errors import QuasiMeanError
from .means import is_internal, named_mean, renormalize

log = logging.getLogger("quasimean")

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NO_ROOT = 3
EXIT_AUDIT_FAIL = 4

SEED_ENV = "QUASIMEAN_SEED"
MEDIAN_GRID = (1.0, 2.0, 3.0, 4.0, 100.0)


@dataclass
class RunConfig:
    means: tuple[str, ...] = ("arithmetic",)
    aggregate: str | None = None
    trials: int = 500
    seed: int = 0
    tolerances: dict[str, float] = field(default_factory=dict)
    renormalize_weights: bool = False
    output_format: str = "structured"

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        for key, tol in self.tolerances.items():
            if key not in DEFAULT_TOLERANCES:
                raise ValueError(f"unknown tolerance {key!r}; expected one of {', '.join(AXIOMS)}")
            if not tol > 0:
                raise ValueError(f"tolerance {key}={tol!r} must be positive")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["means"] = list(self.means)
        return d


def _clean(obj):
    """Replace non-finite floats by None so the document stays valid JSON."""
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def dumps(doc: dict) -> str:
    return json.dumps(_clean(doc), indent=2, allow_nan=False) + "\n"


def _weights(d: Dataset, cfg: RunConfig):
    w = d.weights
    if w is not None and cfg.renormalize_weights:
        w = renormalize(w)
    return w


def run_means(d: Dataset, cfg: RunConfig) -> dict:
    """One ``{name, value, internal}`` record per requested mean; weighted iff the data has weights."""
    xs, w = d.values, _weights(d, cfg)
    results = []
    for name in cfg.means:
        value = named_mean(xs, name, w)
        results.append({"name": name, "value": value, "internal": is_internal(value, xs)})
    return {"dataset": d.label, "results": results, "config": cfg.to_dict()}


def run_chisini(d: Dataset, cfg: RunConfig) -> dict:
    if cfg.aggregate is None:
        raise ValueError("run_chisini needs cfg.aggregate")
    if d.weighted:
        log.warning("weights are ignored by the chisini subcommand")
    xs = d.values
    sol = chisini_solve(AggregateSpec.builtin(cfg.aggregate, len(xs)), xs)
    result = {"aggregate": cfg.aggregate, **sol.to_dict()}
    return {"dataset": d.label, "results": [result], "config": cfg.to_dict()}


def run_audit(target: str, cfg: RunConfig) -> dict:
    agg = aggregator(target)
    report = full_audit(agg, cfg.trials, cfg.seed, tolerances=cfg.tolerances)
    doc = {"dataset": None, "target": report.target, "results": [c.to_dict() for c in report.checks]}
    if agg.name == "median":
        doc["counterexample"] = find_median_counterexample(5, MEDIAN_GRID).to_dict()
    doc["config"] = cfg.to_dict()
    return doc


def _table(doc: dict) -> str:
    lines = []
    if doc.get("dataset"):
        lines.append(f"dataset: {doc['dataset']}")
    for r in doc["results"]:
        if "axiom" in r:
            extra = f"  witness={r['witness']}" if r["witness"] else ""
            lines.append(f"{r['axiom']:<16} {r['verdict']:<5} trials={r['trials']} skipped={r['skipped']}{extra}")
        elif "roots" in r:
            lines.append(f"{r['aggregate']}: status={r['status']} target={r['target']}")
            for mu, inside, res in zip(r["roots"], r["internal"], r["residuals"]):
                lines.append(f"  root {mu!r:<24} internal={inside} residual={res:.3g}")
        else:
            lines.append(f"{r['name']:<16} {r['value']!r:<24} internal={r['internal']}")
    if "counterexample" in doc:
        lines.append(f"counterexample: {doc['counterexample']}")
    return "\n".join(lines) + "\n"


def _input_format(path: str, explicit: str | None) -> str:
    if explicit:
        return explicit
    return "jsonl" if Path(path).suffix.lower() in (".jsonl", ".ndjson") else "csv"


def _load(args) -> Dataset:
    fmt = _input_format(args.file, args.input_format)
    if args.file == "-":
        raw = sys.stdin.buffer.read()
    else:
        raw = Path(args.file).read_bytes()
    return parse_dataset(raw, fmt, name=args.file, label=args.label or args.file)


def _tolerance(text: str) -> tuple[str, float]:
    key, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected AXIOM=VALUE, got {text!r}")
    try:
        return key.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad tolerance value {value!r}") from None


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"{SEED_ENV}={raw!r} is not an integer") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quasimean", description="Quasi-arithmetic means, Chisini's equation and mean-axiom audits.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    parser.add_argument("--format", choices=("structured", "table"), default="structured", dest="output_format")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_input(p):
        p.add_argument("file", help="input file, or - for stdin")
        p.add_argument("--input-format", choices=FORMATS, help="default: jsonl for .jsonl/.ndjson, else csv")
        p.add_argument("--label", help="dataset label echoed in the output (default: file name)")

    p = sub.add_parser("mean", help="compute one or more quasi-arithmetic means")
    add_input(p)
    p.add_argument("--means", default="arithmetic", help="comma-separated mean names, e.g. arithmetic,power:0.5,median")
    p.add_argument("--weights", action="store_true", help="require a weight column")
    p.add_argument("--renormalize-weights", action="store_true", help="rescale weights to sum to one instead of rejecting them")

    p = sub.add_parser("chisini", help="solve Chisini's equation for a built-in aggregate")
    add_input(p)
    p.add_argument("--aggregate", required=True, choices=AGGREGATE_NAMES)

    p = sub.add_parser("audit", help="audit a mean (or the median) against the mean axioms")
    p.add_argument("--target", required=True, help="mean name or median")
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--seed", type=int, default=None, help=f"default: ${SEED_ENV} or 0")
    p.add_argument("--tol", type=_tolerance, action="append", default=[], metavar="AXIOM=VALUE", help="override one check's tolerance")
    p.add_argument("--strict", action="store_true", help="exit 4 if any axiom fails")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s", stream=sys.stderr)
    code = EXIT_OK
    try:
        if args.command == "mean":
            d = _load(args)
            if args.weights and not d.weighted:
                raise QuasiMeanError("--weights given but the input has no weight column")
            means = tuple(m.strip() for m in args.means.split(",") if m.strip())
            cfg = RunConfig(means=means, renormalize_weights=args.renormalize_weights, output_format=args.output_format)
            doc = run_means(d, cfg)
        elif args.command == "chisini":
            cfg = RunConfig(means=(), aggregate=args.aggregate, output_format=args.output_format)
            doc = run_chisini(_load(args), cfg)
            if doc["results"][0]["status"] == Status.NONE.value:
                code = EXIT_NO_ROOT
        else:
            seed = _default_seed() if args.seed is None else args.seed
            cfg = RunConfig(means=(), trials=args.trials, seed=seed, tolerances=dict(args.tol), output_format=args.output_format)
            doc = run_audit(args.target, cfg)
            if args.strict and any(r["verdict"] != "pass" for r in doc["results"]):
                code = EXIT_AUDIT_FAIL
    except (QuasiMeanError, ValueError, OSError) as exc:
        print(f"quasimean: error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    sys.stdout.write(dumps(doc) if cfg.output_format == "structured" else _table(doc))
    return code


if __name__ == "__main__":
    sys.exit(main())
