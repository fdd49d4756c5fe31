"""Instrumented micro-benchmark over synthetic instance families.

Counts are deterministic for a given seed; wall time is informational.
Each family also has a direct oracle that does not go through any winnow
algorithm, so ``matches_oracle`` is meaningful at every size.
"""

from __future__ import annotations

import csv
import io
import math
import os
import random
import time
from dataclasses import dataclass
from typing import Callable, Sequence

from .dsl import parse
from .engine import Relation, WinnowStats, winnow
from .preference import PreferenceRelation

DEFAULT_SEED = 20031
DEFAULT_SIZES = (100, 1000, 10000)
NAIVE_LIMIT = 3000

_DECLS = """
SCHEMA Scored(Id: D, Score: Q)
SCHEMA Rated(ISBN: D, Price: Q, Rating: Q)
SCHEMA Book(ISBN: D, Vendor: D, Price: Q)
PREFER Higher ON Scored(t1, t2) WHEN t1.Score > t2.Score
PREFER C2 ON Rated(t1, t2) WHEN
    t1.ISBN = t2.ISBN AND t1.Price < t2.Price AND t1.Rating >= t2.Rating
 OR t1.ISBN = t2.ISBN AND t1.Price <= t2.Price AND t1.Rating > t2.Rating
PREFER C1 ON Book(t1, t2) WHEN t1.ISBN = t2.ISBN AND t1.Price < t2.Price
"""


def seed_from_env(default: int = DEFAULT_SEED) -> int:
    raw = os.environ.get("WINNOWOPT_SEED")
    return int(raw) if raw not in (None, "") else default


def _layered(rng: random.Random, n: int, ws) -> Relation:
    layers = max(1, math.isqrt(n))
    return Relation(ws.schemas["Scored"], frozenset((f"r{i:06d}", rng.randrange(layers)) for i in range(n)))


def _top_layer(r: Relation) -> frozenset:
    if not r.tuples:
        return frozenset()
    best = max(t[1] for t in r.tuples)
    return frozenset(t for t in r.tuples if t[1] == best)


def _pareto(rng: random.Random, n: int, ws) -> Relation:
    rows = set()
    groups = max(1, n // 10)
    for i in range(n):
        rows.add((f"isbn{rng.randrange(groups):05d}", rng.randrange(1, 40), rng.randrange(1, 6)))
    return Relation(ws.schemas["Rated"], frozenset(rows))


def _pareto_front(r: Relation) -> frozenset:
    by_isbn: dict[str, list[tuple]] = {}
    for t in r.tuples:
        by_isbn.setdefault(t[0], []).append(t)
    out = set()
    for group in by_isbn.values():
        for t in group:
            if not any(u[1] <= t[1] and u[2] >= t[2] and (u[1], u[2]) != (t[1], t[2]) for u in group):
                out.add(t)
    return frozenset(out)


def _single_isbn(rng: random.Random, n: int, ws) -> Relation:
    return Relation(ws.schemas["Book"], frozenset(
        ("0679726691", f"v{i:06d}", rng.randrange(100, 5000)) for i in range(n)))


def _cheapest(r: Relation) -> frozenset:
    if not r.tuples:
        return frozenset()
    low = min(t[2] for t in r.tuples)
    return frozenset(t for t in r.tuples if t[2] == low)


@dataclass(frozen=True)
class Family:
    name: str
    preference: str
    generate: Callable
    oracle: Callable[[Relation], frozenset]
    algorithms: tuple[str, ...]


FAMILIES = {
    f.name: f
    for f in (
        Family("weak-order", "Higher", _layered, _top_layer, ("naive", "bnl", "wwo", "wwo2")),
        Family("pareto-random", "C2", _pareto, _pareto_front, ("naive", "bnl")),
        Family("fd-constrained", "C1", _single_isbn, _cheapest, ("naive", "bnl", "wwo", "wwo2")),
    )
}


@dataclass(frozen=True)
class BenchRow:
    family: str
    algorithm: str
    n: int
    comparisons: int
    passes: int
    matches_oracle: bool
    wall_ms: float


def instance(family: str, n: int, seed: int) -> tuple[Relation, PreferenceRelation]:
    fam = FAMILIES[family]
    ws = parse(_DECLS)
    rng = random.Random(f"{family}:{n}:{seed}")
    return fam.generate(rng, n, ws), ws.preferences[fam.preference]


def run_bench(family: str, sizes: Sequence[int], *, seed: int | None = None, window_size: int = 64,
              algorithms: Sequence[str] | None = None, naive_limit: int = NAIVE_LIMIT) -> list[BenchRow]:
    """One row per (size, algorithm); naive is skipped above ``naive_limit``."""
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    fam = FAMILIES[family]
    algorithms = tuple(algorithms or fam.algorithms)
    bad = [a for a in algorithms if a not in fam.algorithms]
    if bad:
        raise ValueError(f"algorithm {bad[0]!r} is not applicable to family {family!r}")
    seed = seed_from_env() if seed is None else seed
    rows = []
    for n in sizes:
        if n < 0:
            raise ValueError("sizes must be nonnegative")
        r, C = instance(family, n, seed)
        expected = fam.oracle(r)
        for algo in algorithms:
            if algo == "naive" and n > naive_limit:
                continue
            stats = WinnowStats()
            start = time.perf_counter()
            out = winnow(r, C, algo, window_size, stats)
            elapsed = (time.perf_counter() - start) * 1000
            rows.append(BenchRow(family, algo, n, stats.comparisons, stats.passes, out.tuples == expected, elapsed))
    return rows


COLUMNS = ("family", "algorithm", "n", "comparisons", "passes", "matches_oracle")


def format_table(rows: Sequence[BenchRow], timing: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS + (("wall_ms",) if timing else ()))
    for row in rows:
        cells = [row.family, row.algorithm, row.n, row.comparisons, row.passes, str(row.matches_oracle).lower()]
        if timing:
            cells.append(f"{row.wall_ms:.3f}")
        w.writerow(cells)
    return buf.getvalue()
