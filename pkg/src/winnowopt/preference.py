"""Preference relations defined by intrinsic formulas over two tuples."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import SchemaMismatchError
from .formula import Atom, DnfFormula, Schema, Var, conjoin, evaluate, instantiate, negate, swap
from .solver import SatResult, sat_all

PROPERTIES = ("irreflexive", "asymmetric", "transitive", "negatively_transitive", "connected")


@dataclass(frozen=True)
class PreferenceRelation:
    """``t1 > t2`` iff ``formula(t1, t2)``; variable 0 is the preferred tuple."""

    name: str
    formula: DnfFormula

    def __post_init__(self):
        if self.formula.nvars != 2:
            raise SchemaMismatchError(f"a preference formula ranges over 2 tuples, not {self.formula.nvars}")

    @property
    def schema(self) -> Schema:
        return self.formula.schema

    def dominates(self, t1, t2) -> bool:
        return evaluate(self.formula, (t1, t2))


def indifference(C: PreferenceRelation) -> DnfFormula:
    """``not C(t1,t2) and not C(t2,t1)`` as a binary DNF formula."""
    return conjoin(negate(C.formula), negate(swap(C.formula)))


def tuples_differ(schema: Schema, i: int, j: int, nvars: int) -> DnfFormula:
    """``t_i != t_j``: one disjunct per attribute disequality."""
    return DnfFormula(schema, nvars, tuple((Atom(Var(i, a), "!=", Var(j, a), s),) for a, s in schema.attributes))


def _on(f: DnfFormula, *mapping: int) -> DnfFormula:
    return instantiate(f, mapping, 3)


def property_factors(C: PreferenceRelation, prop: str) -> list[DnfFormula]:
    """Factors whose conjunction is satisfiable iff ``prop`` fails somewhere."""
    f = C.formula
    if prop == "irreflexive":
        return [instantiate(f, (0, 0), 1)]
    if prop == "asymmetric":
        return [f, swap(f)]
    if prop == "transitive":
        return [_on(f, 0, 1), _on(f, 1, 2), _on(negate(f), 0, 2)]
    if prop == "negatively_transitive":
        nf = negate(f)
        return [_on(nf, 0, 1), _on(nf, 1, 2), _on(f, 0, 2)]
    if prop == "connected":
        return [negate(f), negate(swap(f)), tuples_differ(C.schema, 0, 1, 2)]
    raise ValueError(f"unknown property {prop!r}; expected one of {PROPERTIES}")


@lru_cache(maxsize=1024)
def _property_counterexample(f: DnfFormula, prop: str) -> SatResult:
    return sat_all(property_factors(PreferenceRelation("", f), prop))


def property_counterexample(C: PreferenceRelation, prop: str) -> SatResult:
    """Solver result for the negated property; a witness is a counterexample."""
    return _property_counterexample(C.formula, prop)


def check_property(C: PreferenceRelation, prop: str) -> bool:
    """Decide ``prop`` over all type-correct tuples (not a particular instance)."""
    return not property_counterexample(C, prop).satisfiable


def is_strict_partial_order(C: PreferenceRelation) -> bool:
    return check_property(C, "irreflexive") and check_property(C, "transitive")


def is_weak_order(C: PreferenceRelation) -> bool:
    return is_strict_partial_order(C) and check_property(C, "negatively_transitive")


def is_total_order(C: PreferenceRelation) -> bool:
    return is_strict_partial_order(C) and check_property(C, "connected")
