"""Instance generation and file persistence.

Random instances follow a fixed, named generator so that a seed produces
bit-identical matrices on every platform: the SplitMix64 sequence, with
outputs mapped onto {0, ..., max_value} by threshold rejection (no modulo
bias).  Matrix entries consume the stream in row-major order; a rejected
draw is replaced, in position order, by values taken from the
continuation of the stream until accepted.

Instance text format:
    line 1:              n
    lines 2 .. n + 1:    n whitespace-separated nonnegative integers

Solution files are a single canonical JSON document (sorted keys, no
spaces, one trailing newline) holding assignment, prices, revenue and
iterations_used.  Per-phase timings are deliberately not part of the
record so that repeated solves of one instance are byte-identical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import ValuationMatrix, max_entry_for

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)

GENERATOR_NAME = "splitmix64"


class ParseError(ValueError):
    """An instance or solution file does not match its documented format."""


def _mix64(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def _stream(seed: int, start: int, count: int) -> np.ndarray:
    """Outputs start .. start+count-1 of the SplitMix64 sequence for seed."""
    base = np.uint64(seed & _MASK64)
    steps = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return _mix64(base + steps * np.uint64(_GOLDEN))


def generate(n: int, seed: int, max_value: int = 1_000_000) -> ValuationMatrix:
    """Draw an n x n matrix of i.i.d. uniform integers in {0..max_value}.

    Identical (n, seed, max_value) gives identical matrices everywhere;
    the generator algorithm is part of the format contract.
    """
    if n < 1:
        raise ValueError(f"instance size must be >= 1, got {n}")
    if max_value < 0:
        raise ValueError(f"max_value must be >= 0, got {max_value}")
    if max_value > max_entry_for(n):
        raise ValueError(
            f"max_value {max_value} exceeds the overflow-safe entry bound for n={n}"
        )
    span = max_value + 1
    count = n * n
    draws = _stream(seed, 0, count)
    leftover = (1 << 64) % span
    if leftover:
        limit = np.uint64((1 << 64) - leftover)
        pending = np.flatnonzero(draws >= limit)
        cursor = count
        while pending.size:
            fresh = _stream(seed, cursor, pending.size)
            cursor += pending.size
            draws[pending] = fresh
            pending = pending[fresh >= limit]
    values = (draws % np.uint64(span)).astype(np.int64).reshape(n, n)
    return ValuationMatrix(values)


def serialize(v: ValuationMatrix) -> str:
    """Render a matrix in the instance text format."""
    lines = [str(v.n)]
    lines.extend(" ".join(str(int(x)) for x in row) for row in v.values)
    return "\n".join(lines) + "\n"


def parse(text: str) -> ValuationMatrix:
    """Parse the instance text format, rejecting anything malformed."""
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty instance file")
    try:
        n = int(lines[0])
    except ValueError:
        raise ParseError(f"malformed header, expected an integer: {lines[0]!r}") from None
    if n < 1:
        raise ParseError(f"instance size must be >= 1, got {n}")
    body = lines[1:]
    if len(body) != n:
        raise ParseError(f"expected {n} rows, found {len(body)}")
    bound = max_entry_for(n)
    rows = []
    for r, line in enumerate(body):
        tokens = line.split()
        if len(tokens) != n:
            raise ParseError(f"row {r}: expected {n} values, found {len(tokens)}")
        row = []
        for c, tok in enumerate(tokens):
            try:
                value = int(tok)
            except ValueError:
                raise ParseError(f"row {r}, column {c}: non-integer token {tok!r}") from None
            if value < 0:
                raise ParseError(f"row {r}, column {c}: valuations must be nonnegative")
            if value > bound:
                raise ParseError(
                    f"row {r}, column {c}: value {value} exceeds the "
                    f"overflow-safe bound {bound} for n={n}"
                )
            row.append(value)
        rows.append(row)
    return ValuationMatrix(np.array(rows, dtype=np.int64))


def write_instance(v: ValuationMatrix, path) -> None:
    Path(path).write_text(serialize(v))


def read_instance(path) -> ValuationMatrix:
    return parse(Path(path).read_text())


@dataclass(frozen=True)
class SolutionRecord:
    """A solved instance: who gets what, at which prices."""

    n: int
    assignment: list[int]
    prices: list[int]
    revenue: int
    iterations_used: int

    def to_json(self) -> str:
        doc = {
            "assignment": list(self.assignment),
            "iterations_used": self.iterations_used,
            "n": self.n,
            "prices": list(self.prices),
            "revenue": self.revenue,
        }
        return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "SolutionRecord":
        try:
            doc = json.loads(text)
            return cls(
                n=int(doc["n"]),
                assignment=[int(x) for x in doc["assignment"]],
                prices=[int(x) for x in doc["prices"]],
                revenue=int(doc["revenue"]),
                iterations_used=int(doc["iterations_used"]),
            )
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed solution record: {exc}") from None


def write_solution(record: SolutionRecord, path) -> None:
    Path(path).write_text(record.to_json())


def read_solution(path) -> SolutionRecord:
    return SolutionRecord.from_json(Path(path).read_text())
