"""Satisfiability of equality and rational-order constraints.

The two sorts never interact, so a conjunction is satisfiable exactly when
its D part and its Q part both are.

* D part: union-find over variables and constants.  Unsatisfiable iff two
  distinct constants end up in one class or a ``!=`` joins a single class.
* Q part: a graph with a node per variable and per distinct constant, an
  edge ``u -> v`` for every ``u <= v`` (strict for ``<``), and strict edges
  chaining the constants by value.  Unsatisfiable iff a strongly connected
  component holds a strict edge, or a ``!=`` joins a single component.

Both domains are infinite and Q is dense and unbounded, so a disequality
only fails when equality is forced and no case split is needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import SortError
from .formula import Atom, Const, DnfFormula, Schema, Sort, Var


@dataclass(frozen=True)
class SatResult:
    satisfiable: bool
    witness: Mapping[Var, object] | None = None
    atoms: tuple[Atom, ...] = ()  # the conjunction that produced the witness

    def __bool__(self):
        return self.satisfiable

    def tuples(self, schema: Schema, nvars: int) -> list[tuple]:
        """Materialise the witness as ``nvars`` concrete tuples."""
        if self.witness is None:
            raise ValueError("unsatisfiable results carry no witness")
        return [tuple(self.witness[Var(i, a)] for a in schema.names) for i in range(nvars)]


UNSAT = SatResult(False)


class UnionFind:
    """Disjoint sets with path halving and union by size."""

    def __init__(self):
        self.parent: dict = {}
        self.size: dict = {}

    def add(self, x):
        if x not in self.parent:
            self.parent[x] = x
            self.size[x] = 1

    def find(self, x):
        self.add(x)
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return ra


def _check_sorts(atoms: Sequence[Atom], schema: Schema | None) -> None:
    for a in atoms:
        for t in (a.lhs, a.rhs):
            s = t.sort if isinstance(t, Const) else (schema.sort_of(t.attr) if schema is not None else a.sort)
            if s is not a.sort:
                raise SortError(f"ill-sorted atom {a}")
        if a.sort is Sort.D and a.op not in ("=", "!="):
            raise SortError(f"ill-sorted atom {a}: D only supports = and !=")


def _solve_d(atoms: list[Atom], extra: Iterable[Var]) -> dict | None:
    uf = UnionFind()
    for v in extra:
        uf.add(v)
    diseq = []
    for a in atoms:
        uf.add(a.lhs)
        uf.add(a.rhs)
        if a.op == "=":
            uf.union(a.lhs, a.rhs)
        else:
            diseq.append(a)
    const_of: dict = {}
    for x in uf.parent:
        if isinstance(x, Const):
            root = uf.find(x)
            if const_of.setdefault(root, x.value) != x.value:
                return None
    for a in diseq:
        if uf.find(a.lhs) == uf.find(a.rhs):
            return None
    used = {x.value for x in uf.parent if isinstance(x, Const)}
    fresh = 0
    value_of: dict = {}
    witness = {}
    for x in uf.parent:
        if not isinstance(x, Var):
            continue
        root = uf.find(x)
        if root not in value_of:
            if root in const_of:
                value_of[root] = const_of[root]
            else:
                while f"_d{fresh}" in used:
                    fresh += 1
                value_of[root] = f"_d{fresh}"
                fresh += 1
        witness[x] = value_of[root]
    return witness


def _tarjan(n: int, adj: list[list[int]]) -> tuple[list[int], int]:
    """Iterative Tarjan; components come out numbered in reverse topological order."""
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    comp = [-1] * n
    stack: list[int] = []
    counter = ncomp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        work = [(root, 0)]
        while work:
            v, i = work[-1]
            succ = adj[v]
            if i < len(succ):
                work[-1] = (v, i + 1)
                w = succ[i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
                continue
            work.pop()
            if work:
                u = work[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
    return comp, ncomp


def _normal(q: Fraction):
    return q.numerator if q.denominator == 1 else q


def _solve_q(atoms: list[Atom], extra: Iterable[Var]) -> dict | None:
    node: dict = {}

    def nid(t) -> int:
        key = t if isinstance(t, Var) else ("const", t.value)
        if key not in node:
            node[key] = len(node)
        return node[key]

    for v in extra:
        nid(v)
    edges: list[tuple[int, int, bool]] = []
    diseq: list[tuple[int, int]] = []
    for a in atoms:
        u, v = nid(a.lhs), nid(a.rhs)
        op = a.op
        if op == "=":
            edges.append((u, v, False))
            edges.append((v, u, False))
        elif op == "!=":
            diseq.append((u, v))
        elif op == "<":
            edges.append((u, v, True))
        elif op == "<=":
            edges.append((u, v, False))
        elif op == ">":
            edges.append((v, u, True))
        else:
            edges.append((v, u, False))
    consts = sorted((k[1], i) for k, i in node.items() if isinstance(k, tuple))
    for (_, a), (_, b) in zip(consts, consts[1:]):
        edges.append((a, b, True))

    n = len(node)
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v, _ in edges:
        adj[u].append(v)
    comp, ncomp = _tarjan(n, adj)
    for u, v, strict in edges:
        if strict and comp[u] == comp[v]:
            return None
    for u, v in diseq:
        if comp[u] == comp[v]:
            return None

    # Tarjan numbers sink components first, so rank = ncomp - 1 - comp is a
    # linear extension of the order.  Give each component a distinct value
    # increasing along it, pinned to the constants it contains.
    pinned = {comp[i]: value for value, i in consts}
    order = list(range(ncomp - 1, -1, -1))
    anchors = [(pos, Fraction(pinned[c])) for pos, c in enumerate(order) if c in pinned]
    value = {}
    if not anchors:
        for pos, c in enumerate(order):
            value[c] = Fraction(pos)
    else:
        first_pos, first_val = anchors[0]
        last_pos, last_val = anchors[-1]
        for pos in range(first_pos):
            value[order[pos]] = first_val - (first_pos - pos)
        for (p0, v0), (p1, v1) in zip(anchors, anchors[1:]):
            for pos in range(p0, p1):
                value[order[pos]] = v0 + (v1 - v0) * Fraction(pos - p0, p1 - p0)
        for pos in range(last_pos, ncomp):
            value[order[pos]] = last_val + (pos - last_pos)
    return {k: _normal(value[comp[i]]) for k, i in node.items() if isinstance(k, Var)}


def _all_vars(schema: Schema | None, nvars: int) -> tuple[list[Var], list[Var]]:
    if schema is None:
        return [], []
    d, q = [], []
    for i in range(nvars):
        for attr, sort in schema.attributes:
            (d if sort is Sort.D else q).append(Var(i, attr))
    return d, q


def sat_conjunction(atoms: Sequence[Atom], schema: Schema | None = None, nvars: int = 0) -> SatResult:
    """Decide a conjunction of atoms.

    With ``schema`` and ``nvars`` given, the witness assigns every attribute
    of every tuple variable, not just the ones the atoms mention.
    """
    atoms = tuple(atoms)
    _check_sorts(atoms, schema)
    d_atoms = [a for a in atoms if a.sort is Sort.D]
    q_atoms = [a for a in atoms if a.sort is Sort.Q]
    d_extra, q_extra = _all_vars(schema, nvars)
    d_w = _solve_d(d_atoms, d_extra)
    if d_w is None:
        return UNSAT
    q_w = _solve_q(q_atoms, q_extra)
    if q_w is None:
        return UNSAT
    return SatResult(True, {**d_w, **q_w}, atoms)


def sat(f: DnfFormula) -> SatResult:
    for conj in f.disjuncts:
        res = sat_conjunction(conj, f.schema, f.nvars)
        if res.satisfiable:
            return res
    return UNSAT


def is_unsat(f: DnfFormula) -> bool:
    return not sat(f).satisfiable


def sat_all(factors: Sequence[DnfFormula]) -> SatResult:
    """Satisfiability of the conjunction of several DNF formulas.

    Equivalent to ``sat(conjoin(...))`` without materialising the product.
    The search keeps, for every open factor, only the disjuncts consistent
    with the atoms chosen so far, drops factors already implied by them,
    and branches on the factor with the fewest live disjuncts.  A factor
    with one live disjunct is thereby taken without branching.
    """
    if not factors:
        raise ValueError("sat_all needs at least one factor")
    schema, nvars = factors[0].schema, factors[0].nvars
    for f in factors:
        if f.schema != schema or f.nvars != nvars:
            raise SortError("factors range over different schemas or tuple-variable counts")
    live = [f.disjuncts for f in factors if not f.has_true_disjunct]
    if any(not d for d in live):
        return UNSAT

    def search(atoms: tuple[Atom, ...], open_: list) -> SatResult:
        have = set(atoms)
        narrowed = []
        for disjuncts in open_:
            if any(have.issuperset(c) for c in disjuncts):
                continue
            ok = [c for c in disjuncts if sat_conjunction(atoms + c).satisfiable]
            if not ok:
                return UNSAT
            narrowed.append(ok)
        if not narrowed:
            return sat_conjunction(atoms, schema, nvars)
        narrowed.sort(key=len)
        first, rest = narrowed[0], narrowed[1:]
        for conj in first:
            res = search(atoms + tuple(a for a in conj if a not in have), rest)
            if res.satisfiable:
                return res
        return UNSAT

    return search((), live)
