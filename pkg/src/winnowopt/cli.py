"""Command-line front end.

Exit status: 0 success or check true, 1 check false, 2 usage or parse
error, 3 data or precondition error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from typing import Sequence, TextIO

from . import bench as benchmod
from .csvio import write_relation
from .dependency import FunctionalDependency, cgd_counterexample, entailment_factors, fd_to_cgd
from .dsl import ParseError, ResolveError, Workspace, format_preference, parse_file, to_text
from .engine import ALGORITHMS, Project, QueryPlan, Scan, Select, Winnow, execute, walk
from .errors import DataError, PlanError, PreconditionError, SchemaMismatchError, SortError, WinnowOptError
from .formula import DnfFormula, format_formula, format_rational
from .preference import PROPERTIES, PreferenceRelation, check_property, property_counterexample, property_factors
from .semopt import (
    NodeReport,
    analyze_plan,
    build_d2,
    build_d3,
    is_weak_order_relative,
    propagation_check,
    redundancy_check,
    weak_order_check,
)

EXIT_TRUE, EXIT_FALSE, EXIT_USAGE, EXIT_DATA = 0, 1, 2, 3

ALGO_LABELS = {
    "naive": "NAIVE (nested loops)",
    "bnl": "BNL",
    "wwo": "WWO (single pass)",
    "wwo2": "WWO (two passes, constant memory)",
    "removed": "none (winnow removed)",
}
COMPOSITE = {
    "strict-partial-order": ("irreflexive", "transitive"),
    "weak-order": ("irreflexive", "transitive", "negatively_transitive"),
    "total-order": ("irreflexive", "transitive", "connected"),
}


class UsageError(WinnowOptError):
    pass


def _names(values: Sequence[str] | None) -> list[str]:
    out = []
    for v in values or ():
        out.extend(x.strip() for x in v.split(",") if x.strip())
    return out


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def _fd_list(F) -> str:
    return ", ".join(sorted(str(f) for f in F)) or "(none)"


def _load_workspace(path: str | None) -> Workspace:
    if path is None:
        raise UsageError("a workspace file is required (-w FILE)")
    try:
        return parse_file(path)
    except OSError as exc:
        raise UsageError(f"cannot read workspace {path}: {exc.strerror}") from None


def _preference(ws: Workspace, name: str | None) -> PreferenceRelation:
    if not name:
        raise UsageError("--pref is required")
    if name not in ws.preferences:
        raise UsageError(f"unknown preference {name!r}")
    return ws.preferences[name]


def _fd(ws: Workspace, ref: str, C: PreferenceRelation) -> FunctionalDependency:
    """A declared FD name, or an inline FD such as ``"ISBN -> Price"``."""
    if "->" in ref:
        f = FunctionalDependency.parse(ref)
    elif ref in ws.fds:
        f = ws.fds[ref].fd
    else:
        raise UsageError(f"unknown FD {ref!r}")
    try:
        f.check(C.schema)
    except SchemaMismatchError as exc:
        raise UsageError(f"FD {ref!r} does not fit preference {C.name!r}: {exc}") from None
    return f


def _print_factors(out: TextIO, factors: Sequence[DnfFormula], satisfiable: bool) -> None:
    out.write(f"tested formula ({'satisfiable' if satisfiable else 'unsatisfiable'}):\n")
    for k, f in enumerate(factors):
        text = format_formula(f)
        if len(f.disjuncts) > 1:
            text = f"({text})"
        out.write(f"  {'AND ' if k else '    '}{text}\n")


def _print_witness(out: TextIO, result, schema, nvars: int) -> None:
    out.write("witness:\n")
    for i, t in enumerate(result.tuples(schema, nvars)):
        cells = ", ".join(f"{a}={v if isinstance(v, str) else format_rational(v)}" for a, v in zip(schema.names, t))
        out.write(f"  t{i + 1}: {cells}\n")


def _report(out: TextIO, verdict: str, holds: bool, factors, result, schema, nvars: int) -> int:
    out.write(f"{verdict}: {_yes(holds)}\n")
    _print_factors(out, factors, result.satisfiable)
    if result.satisfiable:
        _print_witness(out, result, schema, factors[0].nvars if factors else nvars)
    return EXIT_TRUE if holds else EXIT_FALSE


def cmd_check(args, out: TextIO) -> int:
    ws = _load_workspace(args.workspace)
    C = _preference(ws, args.pref)
    F = [_fd(ws, r, C) for r in _names(args.fds)]
    cgds = []
    for name in _names(args.cgds):
        if name not in ws.cgds:
            raise UsageError(f"unknown CGD {name!r}")
        cgds.append(ws.cgds[name])
    out.write(f"preference: {format_preference(C)}\n")
    if args.kind in ("redundant", "weak-order"):
        out.write(f"FDs: {_fd_list(F)}\n")
        if cgds or args.via_cgd:
            out.write(f"CGDs: {', '.join(d.name for d in cgds) or '(none)'}\n")
            if args.kind == "weak-order" and not check_property(C, "irreflexive"):
                raise PreconditionError(f"preference {C.name!r} is not irreflexive")
            target = build_d2(C) if args.kind == "redundant" else build_d3(C)
            deps = [fd_to_cgd(f, C.schema) for f in F] + cgds
            res = cgd_counterexample(deps, target)
            verdict = "REDUNDANT" if args.kind == "redundant" else "WEAK ORDER RELATIVE"
            return _report(out, verdict, not res.satisfiable, entailment_factors(deps, target), res,
                           C.schema, target.nvars)
        if args.kind == "redundant":
            chk = redundancy_check(C, F)
            return _report(out, "REDUNDANT", chk.holds, chk.factors, chk.result, C.schema, 2)
        chk = weak_order_check(C, F)
        return _report(out, "WEAK ORDER RELATIVE", chk.holds, chk.factors, chk.result, C.schema, 3)
    if args.kind == "propagate":
        if not args.fd:
            raise UsageError("check propagate needs --fd")
        f = _fd(ws, args.fd, C)
        out.write(f"FD: {f}\n")
        chk = propagation_check(C, f)
        return _report(out, "FD HOLDS AFTER WINNOW", chk.holds, chk.factors, chk.result, C.schema, 2)
    # property
    if not args.property:
        raise UsageError("check property needs --property")
    parts = COMPOSITE.get(args.property, (args.property.replace("-", "_"),))
    if any(p not in PROPERTIES for p in parts):
        raise UsageError(f"unknown property {args.property!r}")
    failed = None
    for p in parts:
        res = property_counterexample(C, p)
        if len(parts) > 1:
            out.write(f"  {p.replace('_', '-')}: {_yes(not res.satisfiable)}\n")
        if res.satisfiable and failed is None:
            failed = (p, res)
    label = args.property.replace("_", "-").upper()
    if failed is None:
        p = parts[-1]
        return _report(out, label, True, property_factors(C, p), property_counterexample(C, p), C.schema, 3)
    p, res = failed
    return _report(out, label, False, property_factors(C, p), res, C.schema, 3)


def _plan(ws: Workspace, name: str) -> QueryPlan:
    if name not in ws.plans:
        raise UsageError(f"unknown plan {name!r}")
    return ws.plans[name]


def _retarget(plan: QueryPlan, algorithm: str | None, window: int | None) -> QueryPlan:
    if isinstance(plan, Scan):
        return plan
    child = _retarget(plan.child, algorithm, window)
    if isinstance(plan, Winnow):
        changes = {"child": child}
        if algorithm:
            changes["algorithm"] = algorithm
        if window:
            changes["window_size"] = window
        return replace(plan, **changes)
    return replace(plan, child=child)


def _catalog(ws: Workspace, plan: QueryPlan, err: TextIO):
    names = sorted({n.relation for n in walk(plan) if isinstance(n, Scan)})
    for n in names:
        if n not in ws.relations:
            raise UsageError(f"unknown relation {n!r}")
        _, dropped = ws.load(n)
        if dropped:
            err.write(f"warning: relation {n}: {dropped} duplicate row(s) dropped\n")
    return ws.catalog(names)


def cmd_run(args, out: TextIO, err: TextIO) -> int:
    ws = _load_workspace(args.workspace)
    plan = _plan(ws, args.plan)
    if args.window is not None and args.window < 1:
        raise UsageError("--window must be at least 1")
    if args.optimize == "on":
        plan = analyze_plan(plan).optimized
    elif not args.algorithm:
        plan = _retarget(plan, "naive", None)
    plan = _retarget(plan, args.algorithm, args.window)
    if args.algorithm in ("wwo", "wwo2") and not args.force:
        reports = analyze_plan(plan).nodes
        for rep in reports:
            node = rep.node
            if isinstance(node, Winnow) and not is_weak_order_relative(node.preference, rep.fds_in):
                raise PreconditionError(
                    f"preference {node.preference.name!r} is not known to be a weak order on its input; "
                    "WWO could return wrong results (use --force to run anyway)")
    catalog = _catalog(ws, plan, err)
    result = execute(plan, catalog, check_fds=args.check_fds, verify_wwo=args.verify_wwo)
    write_relation(result, out)
    return EXIT_TRUE


def _node_label(node: QueryPlan) -> str:
    if isinstance(node, Scan):
        return f"SCAN {node.relation}"
    if isinstance(node, Select):
        return f"SELECT[{format_formula(node.condition, [''])}]"
    if isinstance(node, Project):
        return f"PROJECT[{', '.join(node.attrs)}]"
    return f"WINNOW[{node.preference.name}]"


def _tree(node: QueryPlan, depth: int = 0) -> list[str]:
    label = _node_label(node)
    if isinstance(node, Winnow) and node.annotation is not None:
        label += f"  using {ALGO_LABELS[node.annotation.algorithm]}"
    lines = ["  " * (depth + 1) + label]
    if not isinstance(node, Scan):
        lines += _tree(node.child, depth + 1)
    return lines


def _explain_node(rep: NodeReport) -> list[str]:
    pad = "  " * (rep.depth + 1)
    node, ann = rep.node, rep.annotation
    label = _node_label(node)
    if ann is not None and ann.redundant:
        label = f"~~{label}~~  (removed)"
    lines = [pad + label]
    pad += "    "
    if isinstance(node, Scan):
        lines.append(f"{pad}declared FDs: {_fd_list(node.fds)}")
    else:
        lines.append(f"{pad}FDs in: {_fd_list(rep.fds_in)}")
    if ann is not None:
        lines.append(f"{pad}redundant: {_yes(ann.redundant)}" + (f" ({rep.reason})" if rep.reason else ""))
        if not ann.redundant:
            lines.append(f"{pad}weak order relative: {_yes(ann.weak_order_relative)}")
            lines.append(f"{pad}algorithm: {ALGO_LABELS[ann.algorithm]}")
            lines.append(f"{pad}generated FDs: {_fd_list(ann.generated_fds)}")
    if not isinstance(node, Scan):
        lines.append(f"{pad}FDs out: {_fd_list(rep.fds_out)}")
    return lines


def explain_text(ws: Workspace, name: str, max_arity: int = 2) -> str:
    plan = _plan(ws, name)
    analysis = analyze_plan(plan, max_arity)
    lines = [f"plan {name}", "original plan:"]
    lines += _tree(plan)
    lines.append("analysis:")
    for rep in analysis.nodes:
        lines += _explain_node(rep)
    lines.append("optimized plan:")
    lines += _tree(analysis.optimized)
    try:
        lines.append(f"as text: {to_text(analysis.optimized, ws)}")
    except ValueError:
        pass
    return "\n".join(lines) + "\n"


def cmd_explain(args, out: TextIO) -> int:
    ws = _load_workspace(args.workspace)
    out.write(explain_text(ws, args.plan, args.max_arity))
    return EXIT_TRUE


def _sizes(text: str) -> list[int]:
    try:
        sizes = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise UsageError(f"bad --sizes value {text!r}") from None
    if any(n < 0 for n in sizes):
        raise UsageError("sizes must be nonnegative")
    return sizes


def cmd_bench(args, out: TextIO) -> int:
    sizes = _sizes(args.sizes)
    try:
        rows = benchmod.run_bench(args.family, sizes, seed=args.seed, window_size=args.window,
                                  algorithms=_names(args.algorithms) or None, naive_limit=args.naive_limit)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out.write(benchmod.format_table(rows, timing=args.timing))
    if args.plot:
        from .plotting import plot_comparisons

        plot_comparisons(rows, args.plot, title=args.family)
    return EXIT_TRUE if all(r.matches_oracle for r in rows) else EXIT_DATA


def cmd_parse(args, out: TextIO) -> int:
    path = args.file or args.workspace
    if path is None:
        raise UsageError("give a workspace file")
    ws = _load_workspace(path)
    if args.print:
        out.write(to_text(ws))
    else:
        counts = [(len(ws.schemas), "schemas"), (len(ws.relations), "relations"), (len(ws.preferences), "preferences"),
                  (len(ws.fds), "FDs"), (len(ws.cgds), "CGDs"), (len(ws.plans), "plans")]
        out.write(f"OK: {path}: " + ", ".join(f"{n} {what}" for n, what in counts) + "\n")
    return EXIT_TRUE


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-w", "--workspace", help="workspace file (.pql)")

    p = argparse.ArgumentParser(prog="winnowopt", description="Preference queries with winnow: checks, plans, benchmarks.")
    sub = p.add_subparsers(dest="verb", required=True)

    c = sub.add_parser("check", parents=[common], help="decide a property of a preference")
    c.add_argument("kind", choices=("redundant", "weak-order", "propagate", "property"))
    c.add_argument("--pref", help="preference name")
    c.add_argument("--fds", action="append", help="FD names or inline FDs, comma separated (repeatable)")
    c.add_argument("--cgds", action="append", help="CGD names (redundant, weak-order); switches to CGD entailment")
    c.add_argument("--via-cgd", action="store_true", help="decide through CGD entailment even with FDs only")
    c.add_argument("--fd", help="the FD for 'propagate'")
    c.add_argument("--property", help=f"one of {', '.join(p.replace('_', '-') for p in PROPERTIES)}, "
                                      f"{', '.join(COMPOSITE)}")

    r = sub.add_parser("run", parents=[common], help="execute a plan and write CSV")
    r.add_argument("plan")
    r.add_argument("--optimize", choices=("on", "off"), default="off")
    r.add_argument("--algorithm", choices=ALGORITHMS, help="evaluate every winnow with this algorithm")
    r.add_argument("--window", type=int, help="BNL window size")
    r.add_argument("--force", action="store_true", help="allow WWO without an established weak order")
    r.add_argument("--check-fds", action="store_true", help="verify declared FDs against the data")
    r.add_argument("--verify-wwo", action="store_true", help="compare WWO results with the naive winnow")

    e = sub.add_parser("explain", parents=[common], help="show how a plan is optimized")
    e.add_argument("plan")
    e.add_argument("--max-arity", type=int, default=2, help="arity bound for generated FDs")

    b = sub.add_parser("bench", help="instrumented winnow benchmark")
    b.add_argument("family", choices=tuple(benchmod.FAMILIES))
    b.add_argument("--sizes", default=",".join(map(str, benchmod.DEFAULT_SIZES)))
    b.add_argument("--seed", type=int, help="overrides WINNOWOPT_SEED")
    b.add_argument("--window", type=int, default=64)
    b.add_argument("--algorithms", action="append")
    b.add_argument("--naive-limit", type=int, default=benchmod.NAIVE_LIMIT)
    b.add_argument("--timing", action="store_true", help="add a wall_ms column")
    b.add_argument("--plot", help="write a PNG of comparisons against n")

    s = sub.add_parser("parse", parents=[common], help="syntax and reference check of a workspace")
    s.add_argument("file", nargs="?")
    s.add_argument("--print", action="store_true", help="print the workspace in normal form")
    return p


def main(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.verb == "check":
            return cmd_check(args, out)
        if args.verb == "run":
            return cmd_run(args, out, err)
        if args.verb == "explain":
            return cmd_explain(args, out)
        if args.verb == "bench":
            return cmd_bench(args, out)
        return cmd_parse(args, out)
    except ParseError as exc:
        err.write(f"parse error: {exc}\n")
        return EXIT_USAGE
    except ResolveError as exc:
        for e in exc.errors:
            err.write(f"error: {e}\n")
        return EXIT_USAGE
    except UsageError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (DataError, PreconditionError, SchemaMismatchError, SortError, PlanError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
