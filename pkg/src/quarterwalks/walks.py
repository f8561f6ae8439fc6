"""Quarter-plane walk enumeration.

A walk family is given by a set of unit steps.  ``build_table`` runs the
level-by-level dynamic program for the counts f(n; i, j) of n-step walks
from the origin to (i, j) that never leave the first quadrant, with exact
big-integer entries.  ``WalkOracle`` wraps a table with the zero-extension
rule (0 outside the quadrant, 0 beyond the light cone i > n or j > n), and
``trivial_operator`` builds the shift operator that encodes the one-step
transfer recurrence of the family.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass

from .exactmath import MultiPoly
from . import ore

# The eight unit directions, in canonical listing order.
DIRECTIONS = {
    "E": (1, 0),
    "W": (-1, 0),
    "N": (0, 1),
    "S": (0, -1),
    "NE": (1, 1),
    "NW": (-1, 1),
    "SE": (1, -1),
    "SW": (-1, -1),
}
_CANONICAL_ORDER = ("E", "W", "N", "S", "NE", "NW", "SE", "SW")
_NAME_OF = {v: k for k, v in DIRECTIONS.items()}


class StepSetParseError(ValueError):
    """Raised for an unknown, duplicate, or missing step token."""


@dataclass(frozen=True)
class StepSet:
    """A nonempty subset of the eight unit directions."""

    steps: frozenset[tuple[int, int]]

    def __post_init__(self):
        if not self.steps:
            raise StepSetParseError("empty step set")
        for s in self.steps:
            if s not in _NAME_OF:
                raise StepSetParseError(f"not a unit direction: {s}")

    @property
    def canonical(self) -> str:
        names = [name for name in _CANONICAL_ORDER if DIRECTIONS[name] in self.steps]
        return ",".join(names)

    def sorted_steps(self) -> list[tuple[int, int]]:
        return [DIRECTIONS[n] for n in _CANONICAL_ORDER if DIRECTIONS[n] in self.steps]

    def __iter__(self):
        return iter(self.sorted_steps())

    def __len__(self):
        return len(self.steps)

    def __repr__(self):
        return f"StepSet({self.canonical})"


def parse_step_set(text: str) -> StepSet:
    """Parse a comma-separated list of direction names (E, W, N, S, NE, NW, SE, SW)."""
    tokens = [t.strip() for t in text.split(",")]
    seen = []
    for tok in tokens:
        if not tok:
            raise StepSetParseError("empty step token")
        if tok not in DIRECTIONS:
            raise StepSetParseError(f"unknown step token: {tok!r}")
        if tok in seen:
            raise StepSetParseError(f"duplicate step token: {tok!r}")
        seen.append(tok)
    return StepSet(frozenset(DIRECTIONS[t] for t in seen))


GESSEL = parse_step_set("E,W,NE,SW")
KREWERAS = parse_step_set("W,S,NE")


class OracleRangeError(LookupError):
    """A query needs table levels that have not been built."""

    def __init__(self, needed: int, have: int):
        super().__init__(f"oracle covers n <= {have}, query needs n = {needed}")
        self.needed = needed
        self.have = have


class CountTable:
    """Levels 0..n_max of exact counts, level n stored as an (n+1) x (n+1) grid."""

    def __init__(self, step_set: StepSet, n_max: int, levels: list[list[list[int]]]):
        self.step_set = step_set
        self.n_max = n_max
        self.levels = levels

    def value(self, n: int, i: int, j: int) -> int:
        if n < 0 or i < 0 or j < 0:
            return 0
        if i > n or j > n:
            return 0
        if n > self.n_max:
            raise OracleRangeError(n, self.n_max)
        return self.levels[n][i][j]


def build_table(step_set: StepSet, n_max: int) -> CountTable:
    """Dynamic program: level n+1 from level n with zero-extension outside the quadrant."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    steps = step_set.sorted_steps()
    levels = [[[1]]]
    prev = levels[0]
    for n in range(n_max):
        size = n + 2
        cur = [[0] * size for _ in range(size)]
        # walk into (i, j) by step (dx, dy) from (i-dx, j-dy) at level n
        for pi in range(n + 1):
            row = prev[pi]
            for pj in range(n + 1):
                v = row[pj]
                if v:
                    for dx, dy in steps:
                        ti, tj = pi + dx, pj + dy
                        if 0 <= ti and 0 <= tj:
                            cur[ti][tj] += v
        levels.append(cur)
        prev = cur
    return CountTable(step_set, n_max, levels)


def origin_sequence(step_set: StepSet, n_max: int) -> list[int]:
    """The sequence f(n; 0, 0) for n = 0..n_max, streamed level by level.

    Only two levels are held at once, so this scales to n_max in the
    hundreds where retaining a full table would not.
    """
    steps = step_set.sorted_steps()
    prev = [[1]]
    out = [1]
    for n in range(n_max):
        size = n + 2
        cur = [[0] * size for _ in range(size)]
        for pi in range(n + 1):
            row = prev[pi]
            for pj in range(n + 1):
                v = row[pj]
                if v:
                    for dx, dy in steps:
                        ti, tj = pi + dx, pj + dy
                        if 0 <= ti and 0 <= tj:
                            cur[ti][tj] += v
        out.append(cur[0][0])
        prev = cur
    return out


class WalkOracle:
    """Zero-extended view of a count table: 0 for any coordinate < 0."""

    def __init__(self, table: CountTable):
        self.table = table

    @property
    def step_set(self) -> StepSet:
        return self.table.step_set

    @property
    def max_level(self) -> int:
        return self.table.n_max

    def value(self, n: int, i: int, j: int) -> int:
        if n < 0 or i < 0 or j < 0:
            return 0
        return self.table.value(n, i, j)


def oracle_for(step_set: StepSet, n_max: int) -> WalkOracle:
    return WalkOracle(build_table(step_set, n_max))


def trivial_operator(step_set: StepSet) -> "ore.OreOperator":
    """The transfer-recurrence annihilator of the walk counts.

    With a = max(0, max dx) and b = max(0, max dy) over the steps, the
    operator is  S_n S_i^a S_j^b - sum over steps of S_i^(a-dx) S_j^(b-dy);
    all exponents are nonnegative by the choice of a and b.  Applied to the
    zero-extended counts it vanishes on the whole quadrant, because every
    walk into a target cell arrives by one of the steps and contributions
    from outside the quadrant are zero on both sides.
    """
    steps = step_set.sorted_steps()
    a = max(0, max(dx for dx, _ in steps))
    b = max(0, max(dy for _, dy in steps))
    terms = {(1, a, b): MultiPoly.const(1)}
    for dx, dy in steps:
        key = (0, a - dx, b - dy)
        cur = terms.get(key, MultiPoly.zero())
        terms[key] = cur - MultiPoly.const(1)
    return ore.OreOperator(terms)


# ---------------------------------------------------------------------------
# On-disk table cache (JSON with decimal-string entries, exact over 2^53).
# ---------------------------------------------------------------------------


def table_to_json(table: CountTable) -> dict:
    return {
        "steps": table.step_set.canonical,
        "nMax": table.n_max,
        "levels": [
            [[str(v) for v in row] for row in level] for level in table.levels
        ],
    }


def table_from_json(data: dict) -> CountTable:
    step_set = parse_step_set(data["steps"])
    n_max = int(data["nMax"])
    levels = [
        [[int(v) for v in row] for row in level] for level in data["levels"]
    ]
    if len(levels) != n_max + 1:
        raise ValueError("level count does not match nMax")
    for n, level in enumerate(levels):
        if len(level) != n + 1 or any(len(row) != n + 1 for row in level):
            raise ValueError(f"level {n} grid is not ({n + 1})x({n + 1})")
    return CountTable(step_set, n_max, levels)


def _cache_filename(step_set: StepSet, n_max: int) -> str:
    return f"{step_set.canonical.replace(',', '-')}_n{n_max}.json"


def save_table(table: CountTable, cache_dir: str) -> str:
    """Atomically write the table into the cache directory; returns the path."""
    os.makedirs(cache_dir, exist_ok=True)
    path = os.path.join(cache_dir, _cache_filename(table.step_set, table.n_max))
    fd, tmp = tempfile.mkstemp(dir=cache_dir, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(table_to_json(table), fh, sort_keys=True)
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)
    return path


def load_table(step_set: StepSet, n_max: int, cache_dir: str) -> CountTable | None:
    path = os.path.join(cache_dir, _cache_filename(step_set, n_max))
    if not os.path.exists(path):
        return None
    with open(path) as fh:
        return table_from_json(json.load(fh))


def cached_table(step_set: StepSet, n_max: int, cache_dir: str | None) -> CountTable:
    """Load the table from the cache if present, else build and store it."""
    if cache_dir:
        hit = load_table(step_set, n_max, cache_dir)
        if hit is not None:
            return hit
    table = build_table(step_set, n_max)
    if cache_dir:
        save_table(table, cache_dir)
    return table
