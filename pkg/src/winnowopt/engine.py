"""In-memory relations, winnow evaluation and query-plan execution.

All winnow algorithms read their input in the relation's canonical sorted
order, so runs and their instrumented counts are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

from .dependency import FunctionalDependency, satisfies_fd
from .errors import DataError, PlanError, SchemaMismatchError
from .formula import DnfFormula, Schema, check_tuple, coerce_value, compile_formula
from .preference import PreferenceRelation

ALGORITHMS = ("naive", "bnl", "wwo", "wwo2")


@dataclass(frozen=True)
class Relation:
    """A schema and a finite, duplicate-free set of tuples."""

    schema: Schema
    tuples: frozenset[tuple]

    def __post_init__(self):
        object.__setattr__(self, "tuples", frozenset(self.tuples))
        for t in self.tuples:
            check_tuple(self.schema, t)

    @classmethod
    def from_rows(cls, schema: Schema, rows: Iterable[Sequence]) -> Relation:
        """Coerce raw values (decimal strings allowed for Q) and drop duplicates."""
        out = set()
        for row in rows:
            if len(row) != len(schema):
                raise DataError(f"row {list(row)!r} has {len(row)} values, schema has {len(schema)}")
            out.add(tuple(coerce_value(v, s) for v, (_, s) in zip(row, schema.attributes)))
        return cls(schema, frozenset(out))

    def sorted_tuples(self) -> list[tuple]:
        cached = self.__dict__.get("_sorted")
        if cached is None:
            cached = sorted(self.tuples)
            object.__setattr__(self, "_sorted", cached)
        return cached

    def __len__(self):
        return len(self.tuples)

    def __iter__(self):
        return iter(self.sorted_tuples())


@dataclass
class WinnowStats:
    """Instrumentation: preference evaluations and passes over the input."""

    comparisons: int = 0
    passes: int = 0


def _prepare(r: Relation, C: PreferenceRelation, stats: WinnowStats | None):
    if r.schema != C.schema:
        raise SchemaMismatchError(f"preference {C.name!r} is over {C.schema}, relation is over {r.schema}")
    dom = compile_formula(C.formula)
    if stats is not None:
        raw = dom

        def dom(a, b):
            stats.comparisons += 1
            return raw(a, b)

    return r.sorted_tuples(), dom


def winnow_naive(r: Relation, C: PreferenceRelation, stats: WinnowStats | None = None) -> Relation:
    """Tuples not dominated by any tuple of ``r``, by the double loop."""
    rows, dom = _prepare(r, C, stats)
    out = [t for t in rows if not any(dom(u, t) for u in rows)]
    if stats is not None:
        stats.passes += len(rows)
    return Relation(r.schema, frozenset(out))


def winnow_bnl(r: Relation, C: PreferenceRelation, window_size: int = 64, stats: WinnowStats | None = None) -> Relation:
    """Blocked nested loops; correct when the preference is a strict partial order on ``r``.

    Each window entry is ``[tuple, complete]``.  ``complete`` is set when the
    entry went in while the temporary table of the current pass was still
    empty, meaning it has now met every surviving tuple; such entries are
    emitted at the end of the pass.  Entries carried into the next pass meet
    all of that pass's input, so they become complete at its start.
    """
    if window_size < 1:
        raise ValueError("window size must be at least 1")
    rows, dom = _prepare(r, C, stats)
    window: list[list] = []
    out: list[tuple] = []
    source = rows
    while source:
        if stats is not None:
            stats.passes += 1
        temp: list[tuple] = []
        for entry in window:
            entry[1] = True
        for t in source:
            if any(dom(w[0], t) for w in window):
                continue
            kept = [w for w in window if not dom(t, w[0])]
            if len(kept) < len(window):
                window = kept
                window.append([t, not temp])
            elif len(window) < window_size:
                window.append([t, not temp])
            else:
                temp.append(t)
        out.extend(w[0] for w in window if w[1])
        window = [w for w in window if not w[1]]
        source = temp
    return Relation(r.schema, frozenset(out))


def winnow_wwo(r: Relation, C: PreferenceRelation, stats: WinnowStats | None = None) -> Relation:
    """Single-pass winnow for preferences that are weak orders on ``r``.

    The precondition is not checked here; see :mod:`winnowopt.semopt`.
    """
    rows, dom = _prepare(r, C, stats)
    if not rows:
        return Relation(r.schema, frozenset())
    if stats is not None:
        stats.passes += 1
    top = rows[0]
    bucket = [top]
    for t in rows[1:]:
        if dom(top, t):
            continue
        if dom(t, top):
            top = t
            bucket = [t]
        else:
            bucket.append(t)
    return Relation(r.schema, frozenset(bucket))


def winnow_wwo_two_pass(r: Relation, C: PreferenceRelation, stats: WinnowStats | None = None) -> Relation:
    """WWO in constant working memory: find a top tuple, then stream its indifference class."""
    rows, dom = _prepare(r, C, stats)
    if not rows:
        return Relation(r.schema, frozenset())
    if stats is not None:
        stats.passes += 2
    top = rows[0]
    for t in rows[1:]:
        if dom(t, top):
            top = t
    return Relation(r.schema, frozenset(t for t in rows if not dom(top, t) and not dom(t, top)))


def winnow(r: Relation, C: PreferenceRelation, algorithm: str = "naive", window_size: int = 64,
           stats: WinnowStats | None = None) -> Relation:
    if algorithm == "naive":
        return winnow_naive(r, C, stats)
    if algorithm == "bnl":
        return winnow_bnl(r, C, window_size, stats)
    if algorithm == "wwo":
        return winnow_wwo(r, C, stats)
    if algorithm == "wwo2":
        return winnow_wwo_two_pass(r, C, stats)
    raise PlanError(f"unknown winnow algorithm {algorithm!r}; expected one of {ALGORITHMS}")


def select(r: Relation, cond: DnfFormula) -> Relation:
    if cond.nvars != 1 or cond.schema != r.schema:
        raise SchemaMismatchError("selection condition must be a one-variable formula over the relation's schema")
    keep = compile_formula(cond)
    return Relation(r.schema, frozenset(t for t in r.tuples if keep(t)))


def project(r: Relation, attrs: Sequence[str]) -> Relation:
    if not attrs or len(set(attrs)) != len(attrs):
        raise SchemaMismatchError(f"bad projection list {list(attrs)}")
    idx = [r.schema.index(a) for a in attrs]
    return Relation(r.schema.project(attrs), frozenset(tuple(t[i] for i in idx) for t in r.tuples))


@dataclass(frozen=True)
class WinnowAnnotation:
    redundant: bool
    weak_order_relative: bool
    algorithm: str
    generated_fds: frozenset[FunctionalDependency] = frozenset()


@dataclass(frozen=True)
class Scan:
    relation: str
    schema: Schema
    fds: frozenset[FunctionalDependency] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "fds", frozenset(self.fds))
        for f in self.fds:
            try:
                f.check(self.schema)
            except SchemaMismatchError as exc:
                raise PlanError(f"scan of {self.relation}: {exc}") from None


@dataclass(frozen=True)
class Select:
    child: QueryPlan
    condition: DnfFormula

    def __post_init__(self):
        if self.condition.nvars != 1 or self.condition.schema != self.child.schema:
            raise PlanError("selection condition must be a one-variable formula over its input schema")

    @property
    def schema(self) -> Schema:
        return self.child.schema


@dataclass(frozen=True)
class Project:
    child: QueryPlan
    attrs: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "attrs", tuple(self.attrs))
        if not self.attrs or len(set(self.attrs)) != len(self.attrs):
            raise PlanError(f"bad projection list {list(self.attrs)}")
        missing = [a for a in self.attrs if a not in self.child.schema]
        if missing:
            raise PlanError(f"projection on unknown attributes {missing}")

    @property
    def schema(self) -> Schema:
        return self.child.schema.project(self.attrs)


@dataclass(frozen=True)
class Winnow:
    child: QueryPlan
    preference: PreferenceRelation
    algorithm: str = "naive"
    window_size: int = 64
    annotation: WinnowAnnotation | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.preference.schema != self.child.schema:
            raise PlanError(f"preference {self.preference.name!r} does not match its input schema {self.child.schema}")
        if self.algorithm not in ALGORITHMS:
            raise PlanError(f"unknown winnow algorithm {self.algorithm!r}")
        if self.window_size < 1:
            raise PlanError("window size must be at least 1")

    @property
    def schema(self) -> Schema:
        return self.child.schema


QueryPlan = Union[Scan, Select, Project, Winnow]


def execute(plan: QueryPlan, catalog: Mapping[str, Relation], *, check_fds: bool = False,
            verify_wwo: bool = False, stats: WinnowStats | None = None) -> Relation:
    """Evaluate ``plan`` bottom-up over the named relations in ``catalog``.

    ``check_fds`` verifies each scan's declared FDs against its data;
    ``verify_wwo`` compares every WWO result with the naive oracle.
    """
    if isinstance(plan, Scan):
        try:
            r = catalog[plan.relation]
        except KeyError:
            raise PlanError(f"unknown relation {plan.relation!r}") from None
        if r.schema != plan.schema:
            raise SchemaMismatchError(f"relation {plan.relation!r} has schema {r.schema}, plan expects {plan.schema}")
        if check_fds:
            for f in sorted(plan.fds, key=str):
                if not satisfies_fd(r, f):
                    raise DataError(f"relation {plan.relation!r} violates declared FD {f}")
        return r
    if isinstance(plan, Select):
        return select(execute(plan.child, catalog, check_fds=check_fds, verify_wwo=verify_wwo, stats=stats), plan.condition)
    if isinstance(plan, Project):
        return project(execute(plan.child, catalog, check_fds=check_fds, verify_wwo=verify_wwo, stats=stats), plan.attrs)
    if isinstance(plan, Winnow):
        r = execute(plan.child, catalog, check_fds=check_fds, verify_wwo=verify_wwo, stats=stats)
        out = winnow(r, plan.preference, plan.algorithm, plan.window_size, stats)
        if verify_wwo and plan.algorithm in ("wwo", "wwo2"):
            expected = winnow_naive(r, plan.preference)
            if out != expected:
                raise DataError(f"WWO disagrees with the naive winnow for {plan.preference.name!r}; "
                                "the preference is not a weak order on this input")
        return out
    raise PlanError(f"not a plan node: {plan!r}")


def walk(plan: QueryPlan):
    """Nodes top-down, preorder."""
    yield plan
    if not isinstance(plan, Scan):
        yield from walk(plan.child)
