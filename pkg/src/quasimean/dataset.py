"""Reading samples (and optional weights) from CSV or JSON-lines input."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import BinaryIO, TextIO, Union

from .errors import MixedWeightError, ParseError

__all__ = ["Dataset", "parse_dataset", "FORMATS"]

FORMATS = ("csv", "jsonl")

Source = Union[bytes, str, BinaryIO, TextIO]


@dataclass(frozen=True)
class Dataset:
    rows: tuple[tuple[float, float | None], ...]
    source: str = "-"
    label: str | None = None

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(v for v, _ in self.rows)

    @property
    def weights(self) -> tuple[float, ...] | None:
        if not self.rows or self.rows[0][1] is None:
            return None
        return tuple(w for _, w in self.rows)

    @property
    def weighted(self) -> bool:
        return self.weights is not None


def _number(text: str, line: int, what: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise ParseError(f"{what} {text!r} is not a number", line) from None
    if not math.isfinite(x):
        raise ParseError(f"{what} {text!r} is not finite", line)
    return x


def _looks_numeric(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def _read_text(source: Source) -> str:
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        try:
            return source.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not valid UTF-8 ({exc.reason} at byte {exc.start})") from None
    return source


def _parse_csv(text: str) -> list[tuple[int, float, float | None]]:
    rows = []
    first = True
    for lineno, record in enumerate(csv.reader(io.StringIO(text)), start=1):
        fields = [f.strip() for f in record]
        if not any(fields):
            continue
        if first:
            first = False
            if not _looks_numeric(fields[0]):
                continue
        if len(fields) > 2:
            raise ParseError(f"expected 1 or 2 columns, got {len(fields)}", lineno)
        value = _number(fields[0], lineno, "value")
        weight = None
        if len(fields) == 2 and fields[1]:
            weight = _number(fields[1], lineno, "weight")
        rows.append((lineno, value, weight))
    return rows


def _parse_jsonl(text: str) -> list[tuple[int, float, float | None]]:
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", lineno) from None
        if not isinstance(obj, dict) or "value" not in obj:
            raise ParseError('expected an object with a "value" field', lineno)
        value = _json_number(obj["value"], lineno, "value")
        weight = obj.get("weight")
        if weight is not None:
            weight = _json_number(weight, lineno, "weight")
        rows.append((lineno, value, weight))
    return rows


def _json_number(x, line: int, what: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ParseError(f"{what} {x!r} is not a number", line)
    x = float(x)
    if not math.isfinite(x):
        raise ParseError(f"{what} is not finite", line)
    return x


def parse_dataset(source: Source, format: str = "csv", *, name: str = "-", label: str | None = None) -> Dataset:
    """Parse CSV (value[,weight], optional header) or JSON lines (``{"value": .., "weight": ..}``).

    Either every row has a weight or none does; a partial weight column raises
    MixedWeightError naming the first offending line.
    """
    text = _read_text(source)
    if format == "csv":
        rows = _parse_csv(text)
    elif format == "jsonl":
        rows = _parse_jsonl(text)
    else:
        raise ValueError(f"unknown input format {format!r}; expected one of {FORMATS}")
    if not rows:
        raise ParseError("no data rows")
    has_weight = rows[0][2] is not None
    for lineno, _, w in rows:
        if (w is not None) != has_weight:
            raise MixedWeightError("weights must be given for every row or for none", lineno)
    return Dataset(tuple((v, w) for _, v, w in rows), source=name, label=label)
