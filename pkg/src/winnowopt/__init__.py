"""Preference queries with the winnow operator: constraint checks, semantic
optimization of winnow under functional and constraint-generating
dependencies, and the naive, BNL and WWO evaluation algorithms."""

from .dependency import (
    Cgd,
    FunctionalDependency,
    cgd_entails,
    fd_formula,
    fd_to_cgd,
    satisfies,
    satisfies_fd,
)
from .dsl import ParseError, ResolveError, Workspace, parse, parse_file, to_text
from .engine import (
    Project,
    Relation,
    Scan,
    Select,
    Winnow,
    WinnowStats,
    execute,
    project,
    select,
    winnow,
    winnow_bnl,
    winnow_naive,
    winnow_wwo,
    winnow_wwo_two_pass,
)
from .errors import (
    DataError,
    PlanError,
    PreconditionError,
    SchemaMismatchError,
    SortError,
    WinnowOptError,
)
from .formula import Atom, Const, DnfFormula, Schema, Sort, Var, conjoin, disjoin, evaluate, negate
from .preference import PreferenceRelation, check_property, indifference, is_strict_partial_order, is_weak_order
from .semopt import (
    analyze_plan,
    build_d2,
    build_d3,
    cgd_holds_after_winnow,
    fd_holds_after_winnow,
    generated_fds,
    is_redundant_winnow,
    is_redundant_winnow_cgd,
    is_weak_order_relative,
    is_weak_order_relative_cgd,
    optimize_plan,
)
from .solver import SatResult, is_unsat, sat, sat_all, sat_conjunction

__version__ = "0.1.0"

__all__ = [
    "Atom",
    "Cgd",
    "Const",
    "DataError",
    "DnfFormula",
    "FunctionalDependency",
    "ParseError",
    "PlanError",
    "PreconditionError",
    "PreferenceRelation",
    "Project",
    "Relation",
    "ResolveError",
    "SatResult",
    "Scan",
    "Schema",
    "SchemaMismatchError",
    "Select",
    "Sort",
    "SortError",
    "Var",
    "Winnow",
    "WinnowOptError",
    "WinnowStats",
    "Workspace",
    "analyze_plan",
    "build_d2",
    "build_d3",
    "cgd_entails",
    "cgd_holds_after_winnow",
    "check_property",
    "conjoin",
    "disjoin",
    "evaluate",
    "execute",
    "fd_formula",
    "fd_holds_after_winnow",
    "fd_to_cgd",
    "generated_fds",
    "indifference",
    "is_redundant_winnow",
    "is_redundant_winnow_cgd",
    "is_strict_partial_order",
    "is_unsat",
    "is_weak_order",
    "is_weak_order_relative",
    "is_weak_order_relative_cgd",
    "negate",
    "optimize_plan",
    "parse",
    "parse_file",
    "project",
    "sat",
    "sat_all",
    "sat_conjunction",
    "satisfies",
    "satisfies_fd",
    "select",
    "to_text",
    "winnow",
    "winnow_bnl",
    "winnow_naive",
    "winnow_wwo",
    "winnow_wwo_two_pass",
]
