"""Functional dependencies and constraint-generating dependencies (CGDs).

A CGD over ``n`` tuple variables reads: for all tuples ``t1..tn`` of the
relation, ``body(t1..tn)`` implies ``head(t1..tn)``.  An FD ``X -> Y`` is
the two-variable CGD with body ``t1[X] = t2[X]`` and head ``t1[Y] = t2[Y]``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

from .errors import SchemaMismatchError
from .formula import (
    Atom,
    DnfFormula,
    Schema,
    Var,
    compile_formula,
    conjoin_all,
    disjoin,
    instantiate,
    negate,
)
from .solver import SatResult, sat_all


@dataclass(frozen=True)
class FunctionalDependency:
    lhs: frozenset[str]
    rhs: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "lhs", frozenset(self.lhs))
        object.__setattr__(self, "rhs", frozenset(self.rhs))
        if not self.rhs:
            raise SchemaMismatchError("an FD needs a nonempty right-hand side")

    @classmethod
    def parse(cls, text: str) -> FunctionalDependency:
        """``"ISBN -> Price"``, ``"A, B -> C"`` or ``"{} -> ISBN"``."""
        left, arrow, right = text.partition("->")
        if not arrow:
            raise ValueError(f"not an FD: {text!r}")

        def names(side: str) -> frozenset[str]:
            side = side.strip()
            if side in ("", "{}"):
                return frozenset()
            return frozenset(a.strip() for a in side.split(","))

        return cls(names(left), names(right))

    @property
    def arity(self) -> int:
        return len(self.lhs | self.rhs)

    @property
    def is_trivial(self) -> bool:
        return self.rhs <= self.lhs

    def check(self, schema: Schema) -> None:
        for a in self.lhs | self.rhs:
            schema.index(a)

    def __str__(self):
        lhs = ", ".join(sorted(self.lhs)) or "{}"
        return f"{lhs} -> {', '.join(sorted(self.rhs))}"


def _ordered(attrs: Iterable[str], schema: Schema) -> list[str]:
    return sorted(attrs, key=schema.index)


def _eq(schema: Schema, attr: str, i: int = 0, j: int = 1) -> Atom:
    return Atom(Var(i, attr), "=", Var(j, attr), schema.sort_of(attr))


def fd_formula(f: FunctionalDependency, schema: Schema) -> DnfFormula:
    """``t1[X] = t2[X] => t1[Y] = t2[Y]`` over two tuple variables."""
    f.check(schema)
    disjuncts = [(Atom(Var(0, a), "!=", Var(1, a), schema.sort_of(a)),) for a in _ordered(f.lhs, schema)]
    disjuncts.append(tuple(_eq(schema, a) for a in _ordered(f.rhs, schema)))
    return DnfFormula(schema, 2, tuple(disjuncts))


def _fd_key(f: FunctionalDependency):
    return (len(f.lhs), sorted(f.lhs), sorted(f.rhs))


def fd_set_formula(F: Iterable[FunctionalDependency], schema: Schema) -> DnfFormula:
    return conjoin_all([fd_formula(f, schema) for f in sorted(F, key=_fd_key)], schema, 2)


def fd_arity(f: FunctionalDependency) -> int:
    return f.arity


def set_arity(F: Iterable[FunctionalDependency]) -> int:
    return max((f.arity for f in F), default=0)


def satisfies_fd(r, f: FunctionalDependency) -> bool:
    """Direct check by grouping on the left-hand side."""
    f.check(r.schema)
    xs = [r.schema.index(a) for a in _ordered(f.lhs, r.schema)]
    ys = [r.schema.index(a) for a in _ordered(f.rhs, r.schema)]
    seen: dict[tuple, tuple] = {}
    for t in r.tuples:
        key = tuple(t[i] for i in xs)
        val = tuple(t[i] for i in ys)
        if seen.setdefault(key, val) != val:
            return False
    return True


@lru_cache(maxsize=1024)
def _negated(f: DnfFormula) -> DnfFormula:
    return negate(f)


@dataclass(frozen=True)
class Cgd:
    """``body => head`` over ``body.nvars`` tuple variables.

    A CGD may instead be given in denial form, ``body => not (f1 and f2 ...)``,
    by passing ``forbidden=(f1, f2, ...)``.  Entailment checks then use the
    factors directly and never negate them; ``head`` is materialised only
    when asked for, which can be exponentially large.
    """

    body: DnfFormula
    head: DnfFormula | None = None
    forbidden: tuple[DnfFormula, ...] = ()
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "forbidden", tuple(self.forbidden))
        if (self.head is None) == (not self.forbidden):
            raise ValueError("give exactly one of head or forbidden")
        for g in (self.head,) if self.head is not None else self.forbidden:
            if g.schema != self.body.schema or g.nvars != self.body.nvars:
                raise SchemaMismatchError("CGD body and head range over different frames")

    @property
    def nvars(self) -> int:
        return self.body.nvars

    @property
    def schema(self) -> Schema:
        return self.body.schema

    def head_formula(self) -> DnfFormula:
        if self.head is not None:
            return self.head
        return _negated(conjoin_all(self.forbidden))

    def violation_factors(self) -> tuple[DnfFormula, ...]:
        """Factors whose conjunction describes a violating tuple assignment."""
        if self.head is not None:
            return (self.body, _negated(self.head))
        return (self.body,) + self.forbidden

    def implication(self) -> DnfFormula:
        """``not body or head`` as one DNF formula."""
        return _implication(self)

    def holds_for(self, tuples: Sequence[tuple]) -> bool:
        if not compile_formula(self.body)(*tuples):
            return True
        if self.head is not None:
            return compile_formula(self.head)(*tuples)
        return not all(compile_formula(g)(*tuples) for g in self.forbidden)


@lru_cache(maxsize=1024)
def _implication(d: Cgd) -> DnfFormula:
    return disjoin(_negated(d.body), d.head_formula())


def fd_to_cgd(f: FunctionalDependency, schema: Schema) -> Cgd:
    f.check(schema)
    body = DnfFormula(schema, 2, (tuple(_eq(schema, a) for a in _ordered(f.lhs, schema)),))
    head = DnfFormula(schema, 2, (tuple(_eq(schema, a) for a in _ordered(f.rhs, schema)),))
    return Cgd(body, head, name=str(f))


def satisfies(r, d: Cgd) -> bool:
    """Brute force over all ``n``-tuples of rows, repetition allowed."""
    if r.schema != d.schema:
        raise SchemaMismatchError("relation and dependency have different schemas")
    rows = list(r.tuples)
    return all(d.holds_for(ts) for ts in product(rows, repeat=d.nvars))


def _same_schema(F: Sequence[Cgd], d: Cgd) -> None:
    for g in F:
        if g.schema != d.schema:
            raise SchemaMismatchError("all dependencies must be over one schema")


def entailment_factors(F: Iterable[Cgd], d: Cgd) -> list[DnfFormula]:
    """Every member of ``F`` instantiated on every map into ``d``'s variables,
    plus the description of a violation of ``d``."""
    F = list(F)
    _same_schema(F, d)
    n = d.nvars
    factors = []
    for g in F:
        imp = g.implication()
        for sigma in product(range(n), repeat=g.nvars):
            factors.append(instantiate(imp, sigma, n))
    factors.extend(d.violation_factors())
    return factors


def cgd_counterexample(F: Iterable[Cgd], d: Cgd) -> SatResult:
    """A witness here is an ``n``-tuple instance satisfying ``F`` but not ``d``."""
    return sat_all(entailment_factors(F, d))


def cgd_entails(F: Iterable[Cgd], d: Cgd) -> bool:
    """Whether every instance satisfying all of ``F`` satisfies ``d``.

    A violation of ``d`` involves at most ``n`` tuples, and the set of those
    tuples is itself an instance, so checking the ``n``-tuple instances is
    complete.  Consequently entailment and finite entailment coincide here.
    """
    return not cgd_counterexample(F, d).satisfiable


def repair_to_fds(rows: Iterable[tuple], schema: Schema, F: Iterable[FunctionalDependency]) -> set[tuple]:
    """Chase ``rows`` until every FD in ``F`` holds.

    Whenever rows agree on an FD's left-hand side but not on a right-hand
    attribute, every occurrence of the larger value in that column is renamed
    to the smaller one.  Each rename removes a distinct value, so this ends.
    """
    F = sorted(F, key=_fd_key)
    rows = set(rows)
    changed = True
    while changed:
        changed = False
        for f in F:
            xs = [schema.index(a) for a in _ordered(f.lhs, schema)]
            for y in (schema.index(a) for a in _ordered(f.rhs, schema)):
                groups: dict = defaultdict(set)
                for t in rows:
                    groups[tuple(t[i] for i in xs)].add(t[y])
                rename = {}
                for values in groups.values():
                    if len(values) > 1:
                        low = min(values)
                        for v in values:
                            if v != low:
                                rename.setdefault(v, low)
                if rename:
                    changed = True
                    # chains v -> w -> u resolve over later iterations
                    rows = {t[:y] + (rename.get(t[y], t[y]),) + t[y + 1 :] for t in rows}
    return rows
