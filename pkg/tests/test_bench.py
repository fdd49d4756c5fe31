import pytest

from winnowopt.bench import FAMILIES, format_table, instance, run_bench, seed_from_env
from winnowopt import FunctionalDependency, winnow_bnl
from winnowopt.dependency import satisfies_fd

from oracles import pareto_front


def test_zero_size_is_all_zero():
    for family in FAMILIES:
        for row in run_bench(family, [0], seed=1):
            assert (row.comparisons, row.passes, row.matches_oracle) == (0, 0, True)


def test_weak_order_family():
    rows = run_bench("weak-order", [10_000], seed=5)
    by = {r.algorithm: r for r in rows}
    assert "naive" not in by
    assert by["wwo"].passes == 1 and by["wwo"].comparisons <= 2 * 10_000
    assert by["bnl"].passes >= 1
    assert all(r.matches_oracle for r in rows)


def test_pareto_family_against_independent_front():
    for n in (0, 1, 30, 400):
        r, C = instance("pareto-random", n, 9)
        rows = run_bench("pareto-random", [n], seed=9)
        assert all(row.matches_oracle for row in rows)
        # Rated has no Vendor column; pad it for the oracle
        padded = {(t[0], "", t[1], t[2]) for t in r.tuples}
        front = {(i, p, q) for i, _, p, q in pareto_front(padded)}
        assert winnow_bnl(r, C, 8).tuples == front


def test_fd_constrained_family_satisfies_its_fd():
    r, _ = instance("fd-constrained", 300, 2)
    assert satisfies_fd(r, FunctionalDependency.parse("{} -> ISBN"))
    assert all(row.matches_oracle for row in run_bench("fd-constrained", [300], seed=2))


def test_env_seed(monkeypatch):
    monkeypatch.setenv("WINNOWOPT_SEED", "77")
    assert seed_from_env() == 77
    a = [(r.algorithm, r.comparisons) for r in run_bench("weak-order", [300])]
    b = [(r.algorithm, r.comparisons) for r in run_bench("weak-order", [300], seed=77)]
    assert a == b
    monkeypatch.setenv("WINNOWOPT_SEED", "not a number")
    with pytest.raises(ValueError):
        seed_from_env()


def test_bad_arguments():
    with pytest.raises(ValueError):
        run_bench("nope", [1])
    with pytest.raises(ValueError):
        run_bench("weak-order", [-1])
    with pytest.raises(ValueError):
        run_bench("pareto-random", [1], algorithms=["wwo"])


def test_table_and_plot(tmp_path):
    rows = run_bench("weak-order", [10, 100], seed=3)
    text = format_table(rows)
    assert text.count("\n") == len(rows) + 1
    assert "wall_ms" not in text and "wall_ms" in format_table(rows, timing=True)
    from winnowopt.plotting import plot_comparisons

    path = plot_comparisons(rows, tmp_path / "b.png", title="weak-order")
    assert path.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
