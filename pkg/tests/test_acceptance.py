"""End-to-end acceptance checks, one test per numbered criterion.

Each test records a PASS/FAIL line; conftest prints them in the terminal
summary, and running this file directly prints them as they finish.
"""

import io
import itertools
import random
import time
from contextlib import contextmanager

import pytest

from winnowopt import (
    FunctionalDependency,
    Project,
    PreferenceRelation,
    Relation,
    Scan,
    Schema,
    Select,
    Sort,
    Winnow,
    WinnowStats,
    execute,
    parse,
    winnow_bnl,
    winnow_naive,
    winnow_wwo,
)
from winnowopt.bench import instance
from winnowopt.cli import main
from winnowopt.dependency import fd_to_cgd, satisfies_fd
from winnowopt.preference import check_property
from winnowopt.semopt import (
    cgd_holds_after_winnow,
    fd_holds_after_winnow,
    is_redundant_winnow,
    is_redundant_winnow_cgd,
    is_weak_order_relative,
    is_weak_order_relative_cgd,
    optimize_plan,
)
from winnowopt.solver import sat_conjunction

from conftest import BOOK_CSV, WORKSPACE
from oracles import (
    assert_winnow_invariants,
    brute_sat,
    conj_formula,
    naive_winnow_set,
    pareto_front,
    random_conjunction,
    random_fd_instance,
    random_formula,
    satisfies_fd_pairs,
    witness_satisfies,
)

FD = FunctionalDependency.parse
RESULTS: dict[int, str] = {}

# every winnow output produced below is checked for the subset and
# mutual-indifference invariants before it is compared with anything else
checked_outputs = {"count": 0}


def checked(r, out, C, spo=True):
    assert_winnow_invariants(r, out, C, spo=spo)
    checked_outputs["count"] += 1
    return out


@contextmanager
def criterion(number: int, title: str):
    start = time.perf_counter()
    detail = {}
    try:
        yield detail
    except BaseException as exc:
        RESULTS[number] = f"[{number}] {title}: FAIL ({type(exc).__name__}: {str(exc)[:120]})"
        print(RESULTS[number])
        raise
    extra = f"; {detail['note']}" if "note" in detail else ""
    RESULTS[number] = f"[{number}] {title}: PASS ({time.perf_counter() - start:.2f} s{extra})"
    print(RESULTS[number])


def _cli(*argv):
    out = io.StringIO()
    return main(list(argv), out, io.StringIO()), out.getvalue()


def test_1_book_fixture_exact(ws, book, book_result, C1):
    with criterion(1, "Book fixture exactness") as d:
        start = time.perf_counter()
        assert checked(book, winnow_naive(book, C1), C1) == book_result
        for w in (1, 2, 10):
            assert checked(book, winnow_bnl(book, C1, w), C1) == book_result
        elapsed = time.perf_counter() - start
        assert elapsed < 1.0, elapsed
        d["note"] = f"4 runs in {elapsed * 1000:.1f} ms"


def test_2_redundancy(tmp_path):
    with criterion(2, "redundancy check"):
        (tmp_path / "book.csv").write_text(BOOK_CSV, encoding="utf-8")
        (tmp_path / "book.pql").write_text(WORKSPACE, encoding="utf-8")
        pql = str(tmp_path / "book.pql")
        code, out = _cli("check", "redundant", "-w", pql, "--pref", "C1", "--fds", "f_isbn_price")
        assert code == 0 and "REDUNDANT: yes" in out
        code, out = _cli("check", "redundant", "-w", pql, "--pref", "C1")
        assert code == 1 and "REDUNDANT: no" in out


def test_3_relative_weak_order(C1, book_schema):
    with criterion(3, "relative weak order") as d:
        assert is_weak_order_relative(C1, [FD("{} -> ISBN")])
        assert not check_property(C1, "negatively_transitive")
        assert not is_weak_order_relative(C1, [])
        rng = random.Random(301)
        isbns = ["0679726691", "0062059041", "0374164770"]
        for _ in range(1000):
            isbn = rng.choice(isbns)
            rows = {(isbn, f"v{rng.randrange(40)}", rng.randrange(60)) for _ in range(rng.randint(0, 200))}
            r = Relation(book_schema, frozenset(rows))
            stats = WinnowStats()
            out = checked(r, winnow_wwo(r, C1, stats), C1)
            assert out.tuples == naive_winnow_set(rows, lambda u, t: u[2] < t[2])
            assert stats.passes <= 1
        d["note"] = "1000 instances"


def test_4_propagation(C1, book_schema):
    with criterion(4, "FD propagation") as d:
        f = FD("ISBN -> Price")
        assert fd_holds_after_winnow(C1, f)
        rng = random.Random(401)
        for k in range(1000):
            rows = {(f"i{rng.randrange(6)}", f"v{rng.randrange(5)}", rng.randrange(8))
                    for _ in range(rng.randint(0, 40))}
            r = Relation(book_schema, frozenset(rows))
            out = checked(r, winnow_bnl(r, C1, rng.randint(1, 8)) if k % 2 else winnow_naive(r, C1), C1)
            assert satisfies_fd_pairs(out.tuples, book_schema, f)
        d["note"] = "1000 instances"


def _fds_up_to_arity_two(schema):
    return [FunctionalDependency(frozenset(lhs), frozenset({a}))
            for k in range(2) for lhs in itertools.combinations(schema.names, k) for a in schema.names if a not in lhs]


def _agree(C, F, f):
    cg = [fd_to_cgd(g, C.schema) for g in F]
    assert is_redundant_winnow(C, F) == is_redundant_winnow_cgd(C, cg), F
    assert is_weak_order_relative(C, F) == is_weak_order_relative_cgd(C, cg), F
    assert fd_holds_after_winnow(C, f) == cgd_holds_after_winnow(C, fd_to_cgd(f, C.schema)), f


def test_5_cgd_cross_checks(C1, C2):
    with criterion(5, "CGD cross-checks") as d:
        for F in ([], [FD("ISBN -> Price")], [FD("{} -> ISBN")]):
            _agree(C1, F, FD("ISBN -> Price"))
        rng = random.Random(501)
        for C in (C1, C2):
            pool = _fds_up_to_arity_two(C.schema)
            for _ in range(100):
                _agree(C, rng.sample(pool, rng.randint(0, 3)), rng.choice(pool))
        ws = parse("""
            SCHEMA R(A: D, X: Q)
            PREFER Ca ON R(t1, t2) WHEN t1.X > 5 AND t2.X <= 5
            CGD all_or_none ON R(t1, t2): TRUE => t1.X > 5 AND t2.X > 5 OR t1.X <= 5 AND t2.X <= 5
        """)
        assert is_redundant_winnow_cgd(ws.preferences["Ca"], [ws.cgds["all_or_none"]])
        d["note"] = "3 fixtures + 200 random FD sets"


def test_6_skyline(C2, ws):
    with criterion(6, "two-criteria skyline") as d:
        assert len(C2.formula.disjuncts) == 2
        schema = ws.schemas["RatedBook"]
        rng = random.Random(601)
        for k in range(1000):
            rows = set()
            for g in range(rng.randint(0, 4)):
                for _ in range(rng.randint(1, 20)):
                    rows.add((f"isbn{g}", f"v{rng.randrange(10)}", rng.randrange(12), rng.randrange(6)))
            r = Relation(schema, frozenset(rows))
            out = winnow_bnl(r, C2, rng.randint(1, 10)) if k % 2 else winnow_naive(r, C2)
            assert checked(r, out, C2).tuples == pareto_front(rows)
        d["note"] = "1000 instances"


def test_7_solver_against_enumeration():
    with criterion(7, "solver vs enumeration") as d:
        start = time.perf_counter()
        for sort, attr, seed in ((Sort.Q, "X", 701), (Sort.D, "A", 702)):
            schema = Schema.of(f"{attr}:{sort.name}")
            rng = random.Random(seed)
            for _ in range(10_000):
                nvars = rng.randint(1, 4)
                atoms = random_conjunction(rng, attr, sort, nvars, rng.randint(0, 2))
                res = sat_conjunction(atoms, schema, nvars)
                assert res.satisfiable == brute_sat([conj_formula(atoms, schema, nvars)], schema, nvars), atoms
                if res.satisfiable:
                    assert witness_satisfies(atoms, res.witness)
        elapsed = time.perf_counter() - start
        assert elapsed < 60, elapsed
        d["note"] = "2 x 10000 conjunctions"


def test_8_algorithm_properties():
    with criterion(8, "winnow invariants and WWO cost") as d:
        n = 100_000
        r, C = instance("weak-order", n, 801)
        stats = WinnowStats()
        out = winnow_wwo(r, C, stats)
        assert stats.passes == 1 and stats.comparisons <= 2 * n, stats
        top = max(t[1] for t in r.tuples)
        assert out.tuples == {t for t in r.tuples if t[1] == top}
        checked(r, out, C)
        d["note"] = f"{stats.comparisons} comparisons at n={n}; {checked_outputs['count']} outputs checked"


S9 = Schema.of("A:D, B:D, X:Q, Y:Q")
FDS9 = _fds_up_to_arity_two(S9)
CONSTS9 = {Sort.D: ["v0", "v1"], Sort.Q: [2, 4]}


def _preference(rng, schema):
    # lean towards irreflexive formulas so the optimizer has work to do
    f = random_formula(rng, schema, 2, CONSTS9, width=2, span=3, var_only=rng.random() < 0.5)
    for _ in range(20):
        if check_property(PreferenceRelation("p", f), "irreflexive") or rng.random() < 0.2:
            break
        f = random_formula(rng, schema, 2, CONSTS9, width=2, span=3, var_only=rng.random() < 0.5)
    return PreferenceRelation("p", f)


def _plan(rng, depth, F):
    if depth == 0 or rng.random() < 0.2:
        return Scan("R", S9, frozenset(F))
    child = _plan(rng, depth - 1, F)
    schema = child.schema
    op = rng.choice(("select", "project", "winnow", "winnow"))
    if op == "select":
        return Select(child, random_formula(rng, schema, 1, CONSTS9, width=2, span=2))
    if op == "project" and len(schema.names) > 1:
        keep = [a for a in schema.names if rng.random() < 0.7] or [schema.names[0]]
        return Project(child, tuple(keep))
    return Winnow(child, _preference(rng, schema), algorithm="naive")


def test_9_plan_preservation():
    with criterion(9, "plan preservation") as d:
        rng = random.Random(901)
        changed = 0
        for _ in range(1000):
            F = rng.sample(FDS9, rng.randint(0, 3))
            p = _plan(rng, rng.randint(1, 4), F)
            rows = random_fd_instance(rng, S9, F, rng.randint(0, 25), dvals=3, qvals=6)
            catalog = {"R": Relation(S9, frozenset(rows))}
            assert all(satisfies_fd(catalog["R"], f) for f in F)
            opt = optimize_plan(p)
            changed += opt != p
            assert execute(opt, catalog) == execute(p, catalog), p
        d["note"] = f"1000 plans, {changed} rewritten"


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
