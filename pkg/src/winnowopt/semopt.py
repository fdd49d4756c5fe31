"""Semantic optimization of winnow: redundancy, relative weak orders, FD propagation.

Each decision reduces to the unsatisfiability of a small constraint formula.
The FD versions build those formulas directly over two or three tuple
variables; the CGD versions go through generic CGD entailment and serve both
as the general case and as an independent cross-check of the FD versions.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache
from itertools import combinations
from typing import Iterable

from .dependency import Cgd, FunctionalDependency, cgd_entails, fd_formula, fd_to_cgd
from .engine import Project, QueryPlan, Scan, Select, Winnow, WinnowAnnotation
from .errors import PlanError, PreconditionError
from .formula import Const, DnfFormula, Var, instantiate, negate, swap
from .preference import PreferenceRelation, check_property, indifference, is_strict_partial_order
from .solver import SatResult, sat_all

__all__ = [
    "Check",
    "WinnowAnnotation",
    "build_d2",
    "build_d3",
    "cgd_holds_after_winnow",
    "fd_holds_after_winnow",
    "generated_fds",
    "is_redundant_winnow",
    "is_redundant_winnow_cgd",
    "is_weak_order_relative",
    "is_weak_order_relative_cgd",
    "optimize_plan",
    "analyze_plan",
]


@dataclass(frozen=True)
class Check:
    """A decision with its evidence: the factors whose conjunction was tested,
    and the solver result.  ``holds`` is true iff that conjunction is unsatisfiable."""

    holds: bool
    factors: tuple[DnfFormula, ...]
    result: SatResult

    def __bool__(self):
        return self.holds


def _decide(factors: list[DnfFormula]) -> Check:
    res = sat_all(factors)
    return Check(not res.satisfiable, tuple(factors), res)


def _require_irreflexive(C: PreferenceRelation) -> None:
    if not check_property(C, "irreflexive"):
        raise PreconditionError(f"preference {C.name!r} is not irreflexive")


def _frozen(F: Iterable[FunctionalDependency]) -> frozenset[FunctionalDependency]:
    return frozenset(F)


@lru_cache(maxsize=4096)
def _redundancy(C: PreferenceRelation, F: frozenset[FunctionalDependency]) -> Check:
    factors = [fd_formula(f, C.schema) for f in sorted(F, key=str)]
    return _decide(factors + [C.formula])


def redundancy_check(C: PreferenceRelation, F: Iterable[FunctionalDependency]) -> Check:
    """``phi_F(t1,t2) and t1 > t2``; unsatisfiable iff winnow by C never removes
    a tuple from an instance satisfying F."""
    return _redundancy(C, _frozen(F))


def is_redundant_winnow(C: PreferenceRelation, F: Iterable[FunctionalDependency]) -> bool:
    return redundancy_check(C, F).holds


def _three(f: DnfFormula, i: int, j: int) -> DnfFormula:
    return instantiate(f, (i, j), 3)


@lru_cache(maxsize=4096)
def _weak_order(C: PreferenceRelation, F: frozenset[FunctionalDependency]) -> Check:
    factors = []
    for f in sorted(F, key=str):
        phi = fd_formula(f, C.schema)
        factors += [_three(phi, 0, 1), _three(phi, 1, 2), _three(phi, 0, 2)]
    nc = negate(C.formula)
    factors.append(_three(C.formula, 0, 1))
    # t1 ~ t3 and t2 ~ t3, kept as four separate factors
    factors += [_three(nc, 0, 2), _three(nc, 2, 0), _three(nc, 1, 2), _three(nc, 2, 1)]
    return _decide(factors)


def weak_order_check(C: PreferenceRelation, F: Iterable[FunctionalDependency]) -> Check:
    """Satisfiable iff some F-respecting triple has ``t1 > t2`` with ``t3``
    indifferent to both; a witness is that triple."""
    _require_irreflexive(C)
    return _weak_order(C, _frozen(F))


def is_weak_order_relative(C: PreferenceRelation, F: Iterable[FunctionalDependency]) -> bool:
    return weak_order_check(C, F).holds


@lru_cache(maxsize=4096)
def _propagation(C: PreferenceRelation, f: FunctionalDependency) -> Check:
    nc = negate(C.formula)
    return _decide([nc, swap(nc), negate(fd_formula(f, C.schema))])


def propagation_check(C: PreferenceRelation, f: FunctionalDependency) -> Check:
    """``t1 ~ t2 and not phi_f(t1,t2)``; unsatisfiable iff ``f`` holds in every winnow output."""
    _require_irreflexive(C)
    return _propagation(C, f)


def fd_holds_after_winnow(C: PreferenceRelation, f: FunctionalDependency) -> bool:
    return propagation_check(C, f).holds


def candidate_fds(attrs: Iterable[str], max_arity: int) -> list[FunctionalDependency]:
    """Nontrivial single-attribute FDs ``X -> A`` with ``|X| + 1 <= max_arity``,
    smallest left-hand sides first."""
    attrs = list(attrs)
    out = []
    for k in range(max_arity):
        for lhs in combinations(attrs, k):
            for a in attrs:
                if a not in lhs:
                    out.append(FunctionalDependency(frozenset(lhs), frozenset([a])))
    return out


def fd_cover(F: Iterable[FunctionalDependency], schema) -> list[FunctionalDependency]:
    """Drop members entailed by the rest; entailment decided on the CGD forms."""
    kept: list[FunctionalDependency] = []
    for f in F:
        if not cgd_entails([fd_to_cgd(g, schema) for g in kept], fd_to_cgd(f, schema)):
            kept.append(f)
    for f in list(kept):
        rest = [g for g in kept if g != f]
        if cgd_entails([fd_to_cgd(g, schema) for g in rest], fd_to_cgd(f, schema)):
            kept = rest
    return kept


@lru_cache(maxsize=1024)
def _generated(C: PreferenceRelation, max_arity: int) -> frozenset[FunctionalDependency]:
    found = [f for f in candidate_fds(C.schema.names, max_arity) if _propagation(C, f).holds]
    return frozenset(fd_cover(found, C.schema))


def generated_fds(C: PreferenceRelation, max_arity: int = 2) -> frozenset[FunctionalDependency]:
    """A nonredundant cover of the FDs of arity at most ``max_arity`` that hold
    in the winnow output of every instance."""
    _require_irreflexive(C)
    return _generated(C, max_arity)


def build_d2(C: PreferenceRelation) -> Cgd:
    """All pairs of tuples are indifferent."""
    s = C.schema
    return Cgd(DnfFormula.true(s, 2), indifference(C), name=f"d2[{C.name}]")


def build_d3(C: PreferenceRelation) -> Cgd:
    """No triple with ``t1 > t2`` and ``t3`` indifferent to both, in denial form."""
    s = C.schema
    nc = negate(C.formula)
    forbidden = (
        _three(C.formula, 0, 1),
        _three(nc, 0, 2), _three(nc, 2, 0),
        _three(nc, 1, 2), _three(nc, 2, 1),
    )
    return Cgd(DnfFormula.true(s, 3), forbidden=forbidden, name=f"d3[{C.name}]")


def _d2_with_denial(C: PreferenceRelation) -> Cgd:
    # same CGD as build_d2, stated as "not (t1 > t2 or t2 > t1)"
    s = C.schema
    return Cgd(DnfFormula.true(s, 2), forbidden=(DnfFormula(s, 2, C.formula.disjuncts + swap(C.formula).disjuncts),))


def is_redundant_winnow_cgd(C: PreferenceRelation, F: Iterable[Cgd]) -> bool:
    return cgd_entails(F, _d2_with_denial(C))


def is_weak_order_relative_cgd(C: PreferenceRelation, F: Iterable[Cgd]) -> bool:
    _require_irreflexive(C)
    return cgd_entails(F, build_d3(C))


def cgd_holds_after_winnow(C: PreferenceRelation, f: Cgd) -> bool:
    _require_irreflexive(C)
    return cgd_entails([build_d2(C)], f)


# -- plan rewriting -----------------------------------------------------------


@dataclass(frozen=True)
class NodeReport:
    """What the optimizer learned about one node of the original plan."""

    depth: int
    node: QueryPlan
    fds_in: frozenset[FunctionalDependency]
    fds_out: frozenset[FunctionalDependency]
    annotation: WinnowAnnotation | None = None
    reason: str = ""


@dataclass(frozen=True)
class PlanAnalysis:
    original: QueryPlan
    optimized: QueryPlan
    nodes: tuple[NodeReport, ...]  # preorder over the original plan


def constant_attributes(cond: DnfFormula) -> set[str]:
    """Attributes pinned to a constant by a conjunctive ``A = c`` atom."""
    if len(cond.disjuncts) != 1:
        return set()
    out = set()
    for a in cond.disjuncts[0]:
        if a.op != "=":
            continue
        if isinstance(a.lhs, Var) and isinstance(a.rhs, Const):
            out.add(a.lhs.attr)
        elif isinstance(a.rhs, Var) and isinstance(a.lhs, Const):
            out.add(a.rhs.attr)
    return out


def choose_algorithm(C: PreferenceRelation, F: Iterable[FunctionalDependency]) -> tuple[bool, str]:
    """(weak order relative to F, algorithm) for a non-redundant winnow."""
    if not is_strict_partial_order(C):
        # BNL and WWO both rely on transitivity
        return False, "naive"
    if is_weak_order_relative(C, F):
        return True, "wwo"
    return False, "bnl"


def analyze_plan(plan: QueryPlan, max_arity: int = 2) -> PlanAnalysis:
    """One bottom-up pass: FD sets per node, winnow decisions, rewritten plan."""
    reports: list[tuple[int, NodeReport]] = []
    counter = [0]

    def visit(node: QueryPlan, depth: int) -> tuple[QueryPlan, frozenset[FunctionalDependency]]:
        slot = counter[0]
        counter[0] += 1
        if isinstance(node, Scan):
            reports.append((slot, NodeReport(depth, node, frozenset(), node.fds)))
            return node, node.fds
        child, fds = visit(node.child, depth + 1)
        if isinstance(node, Select):
            out = fds | {FunctionalDependency(frozenset(), frozenset([a])) for a in constant_attributes(node.condition)}
            reports.append((slot, NodeReport(depth, node, fds, out)))
            return replace(node, child=child), out
        if isinstance(node, Project):
            keep = set(node.attrs)
            out = frozenset(f for f in fds if f.lhs | f.rhs <= keep)
            reports.append((slot, NodeReport(depth, node, fds, out)))
            return replace(node, child=child), out
        if isinstance(node, Winnow):
            C = node.preference
            if is_redundant_winnow(C, fds):
                ann = WinnowAnnotation(True, False, "removed")
                reports.append((slot, NodeReport(depth, node, fds, fds, ann, "no two tuples allowed by the input FDs are comparable")))
                return child, fds
            irreflexive = check_property(C, "irreflexive")
            weak, algo = choose_algorithm(C, fds)
            generated = _generated(C, max_arity) if irreflexive else frozenset()
            ann = WinnowAnnotation(False, weak, algo, generated)
            out = fds | generated
            reports.append((slot, NodeReport(depth, node, fds, out, ann)))
            return replace(node, child=child, algorithm=algo, annotation=ann), out
        raise PlanError(f"not a plan node: {node!r}")

    optimized, _ = visit(plan, 0)
    reports.sort(key=lambda p: p[0])
    return PlanAnalysis(plan, optimized, tuple(r for _, r in reports))


def optimize_plan(plan: QueryPlan, max_arity: int = 2) -> QueryPlan:
    """Remove redundant winnows and pick an evaluation algorithm for the rest."""
    return analyze_plan(plan, max_arity).optimized
