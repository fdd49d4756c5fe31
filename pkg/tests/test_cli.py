import io
import subprocess
import sys

import pytest

from winnowopt.cli import EXIT_DATA, EXIT_FALSE, EXIT_TRUE, EXIT_USAGE, explain_text, main
from winnowopt.dsl import parse_file

from conftest import RESULT_ROWS


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def pql(ws_dir):
    return str(ws_dir / "book.pql")


def test_check_redundant(pql):
    code, out, _ = run("check", "redundant", "-w", pql, "--pref", "C1", "--fds", "f_isbn_price")
    assert code == EXIT_TRUE and "REDUNDANT: yes" in out
    assert "tested formula (unsatisfiable):" in out and "witness" not in out
    code, out, _ = run("check", "redundant", "-w", pql, "--pref", "C1")
    assert code == EXIT_FALSE and "REDUNDANT: no" in out
    assert "witness:" in out and "  t1: " in out and "  t2: " in out


def test_check_inline_fd(pql):
    code, out, _ = run("check", "redundant", "-w", pql, "--pref", "C1", "--fds", "ISBN -> Price")
    assert code == EXIT_TRUE


def test_check_weak_order(pql):
    code, out, _ = run("check", "weak-order", "-w", pql, "--pref", "C1", "--fds", "f_empty_isbn")
    assert code == EXIT_TRUE and "WEAK ORDER RELATIVE: yes" in out
    code, out, _ = run("check", "weak-order", "-w", pql, "--pref", "C1")
    assert code == EXIT_FALSE and "WEAK ORDER RELATIVE: no" in out
    assert all(f"  t{i}: " in out for i in (1, 2, 3))


def test_check_weak_order_via_cgd(pql):
    code, out, _ = run("check", "weak-order", "-w", pql, "--pref", "C1", "--fds", "f_empty_isbn", "--via-cgd")
    assert code == EXIT_TRUE and "CGDs: (none)" in out


def test_check_propagate_and_property(pql):
    code, out, _ = run("check", "propagate", "-w", pql, "--pref", "C1", "--fd", "f_isbn_price")
    assert code == EXIT_TRUE and "FD HOLDS AFTER WINNOW: yes" in out
    code, out, _ = run("check", "property", "-w", pql, "--pref", "C1", "--property", "strict-partial-order")
    assert code == EXIT_TRUE
    code, out, _ = run("check", "property", "-w", pql, "--pref", "C1", "--property", "weak-order")
    assert code == EXIT_FALSE and "WEAK-ORDER: no" in out and "negatively-transitive: no" in out
    code, out, _ = run("check", "property", "-w", pql, "--pref", "C1", "--property", "irreflexive")
    assert code == EXIT_TRUE


def test_usage_errors(pql, ws_dir):
    assert run("check", "redundant", "-w", pql, "--pref", "Nope")[0] == EXIT_USAGE
    assert run("check", "propagate", "-w", pql, "--pref", "C1")[0] == EXIT_USAGE
    assert run("check", "property", "-w", pql, "--pref", "C1", "--property", "shiny")[0] == EXIT_USAGE
    assert run("run", "-w", pql, "missing")[0] == EXIT_USAGE
    assert run("run", "-w", pql, "plain", "--window", "0")[0] == EXIT_USAGE
    assert run("frobnicate")[0] == EXIT_USAGE
    bad = ws_dir / "bad.pql"
    bad.write_text("SCHEMA Book(ISBN: D\n", encoding="utf-8")
    code, _, err = run("parse", str(bad))
    assert code == EXIT_USAGE and "parse error" in err


def test_run_book(pql):
    code, out, _ = run("run", "-w", pql, "plain")
    assert code == EXIT_TRUE
    lines = out.splitlines()
    assert lines[0] == "ISBN:D,Vendor:D,Price:Q"
    assert sorted(lines[1:]) == sorted(",".join(r).replace("13.50", "13.5").replace("7.30", "7.3") for r in RESULT_ROWS)
    for algo in ("naive", "bnl"):
        assert run("run", "-w", pql, "plain", "--algorithm", algo, "--window", "1")[1] == out


def test_run_optimized_declared_plan(ws_dir, pql):
    # the declared FD holds once the data is the winnow result itself
    code, full, _ = run("run", "-w", pql, "plain")
    (ws_dir / "book.csv").write_text(full, encoding="utf-8")
    off = run("run", "-w", pql, "declared")
    on = run("run", "-w", pql, "declared", "--optimize", "on")
    assert off[0] == on[0] == EXIT_TRUE and off[1] == on[1] == full
    assert "~~WINNOW[C1]~~" in run("explain", "-w", pql, "declared")[1]


def test_run_check_fds_rejects_violations(pql):
    assert run("run", "-w", pql, "declared", "--check-fds")[0] == EXIT_DATA


def test_run_empty_csv(ws_dir, pql):
    (ws_dir / "book.csv").write_text("ISBN:D,Vendor:D,Price:Q\n", encoding="utf-8")
    code, out, _ = run("run", "-w", pql, "plain")
    assert code == EXIT_TRUE and out.splitlines()[1:] == []


def test_run_duplicates_warn(ws_dir, pql):
    text = (ws_dir / "book.csv").read_text(encoding="utf-8")
    (ws_dir / "book.csv").write_text(text + "0062059041,BooksForLess,7.3\n", encoding="utf-8")
    code, _, err = run("run", "-w", pql, "plain")
    assert code == EXIT_TRUE and "1 duplicate" in err


def test_wwo_needs_force(pql):
    code, _, err = run("run", "-w", pql, "plain", "--algorithm", "wwo")
    assert code == EXIT_DATA and "--force" in err
    assert run("run", "-w", pql, "one_isbn", "--algorithm", "wwo")[0] == EXIT_TRUE
    # forcing runs it anyway; the verifier then catches the wrong answer
    assert run("run", "-w", pql, "plain", "--algorithm", "wwo", "--force")[0] == EXIT_TRUE
    assert run("run", "-w", pql, "plain", "--algorithm", "wwo", "--force", "--verify-wwo")[0] == EXIT_DATA


def test_explain(pql):
    ws = parse_file(pql)
    declared = explain_text(ws, "declared")
    assert "~~WINNOW[C1]~~  (removed)" in declared
    one = explain_text(ws, "one_isbn")
    assert "algorithm: WWO (single pass)" in one
    plain = explain_text(ws, "plain")
    assert "algorithm: BNL" in plain
    gen = next(line for line in plain.splitlines() if "generated FDs:" in line)
    assert "ISBN -> Price" in gen
    code, out, _ = run("explain", "-w", pql, "plain")
    assert code == EXIT_TRUE and out == plain


def test_parse_verb(pql):
    code, out, _ = run("parse", pql)
    assert code == EXIT_TRUE and out.startswith("OK:") and "3 plans" in out
    code, out, _ = run("parse", pql, "--print")
    assert code == EXIT_TRUE and "PLAN plain = WINNOW[C1](SCAN Book)" in out


def test_bench_is_deterministic(monkeypatch):
    monkeypatch.delenv("WINNOWOPT_SEED", raising=False)
    a = run("bench", "weak-order", "--sizes", "0,50,200")
    b = run("bench", "weak-order", "--sizes", "0,50,200")
    assert a[0] == EXIT_TRUE and a == b
    assert a[1].splitlines()[0] == "family,algorithm,n,comparisons,passes,matches_oracle"
    assert run("bench", "weak-order", "--sizes", "ten")[0] == EXIT_USAGE
    assert run("bench", "pareto-random", "--algorithms", "wwo")[0] == EXIT_USAGE


def test_module_entry_point(pql):
    proc = subprocess.run([sys.executable, "-m", "winnowopt", "check", "redundant", "-w", pql,
                           "--pref", "C1", "--fds", "f_isbn_price"], capture_output=True, text=True)
    assert proc.returncode == 0 and "REDUNDANT: yes" in proc.stdout
