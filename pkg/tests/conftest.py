import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from quasimean.generators import EXP, IDENTITY, LOG, RECIPROCAL, SQUARE, power  # noqa: E402

BUILTIN_GENERATORS = [IDENTITY, SQUARE, LOG, RECIPROCAL, EXP, power(-2), power(0.5), power(3)]

# name understood by tests/oracle.py for each built-in generator
ORACLE_NAME = {g: g.name for g in BUILTIN_GENERATORS}


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def log_uniform(rng, n, lo=1e-3, hi=1e3):
    return [float(v) for v in 10.0 ** rng.uniform(np.log10(lo), np.log10(hi), n)]


def pytest_terminal_summary(terminalreporter):
    from _report import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
