"""Two-sorted constraint formulas kept in disjunctive normal form.

Attributes are either of sort ``D`` (uninterpreted constants, compared only
with ``=`` and ``!=``) or ``Q`` (rationals, compared with the full set of
order predicates).  A :class:`DnfFormula` ranges over a fixed number of tuple
variables ``t0 .. t{n-1}``, each a tuple of the formula's :class:`Schema`.

Rationals are exact throughout.  Integral rationals are stored as ``int``
and all others as :class:`fractions.Fraction`; the two compare and hash
consistently, and ints keep the hot comparison loops fast.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence, Union

from .errors import SchemaMismatchError, SortError


class Sort(enum.Enum):
    D = "D"
    Q = "Q"


Rational = Union[int, Fraction]
Value = Union[str, int, Fraction]


def to_rational(x) -> Rational:
    """Exact rational from an int, Fraction or decimal/fraction string."""
    if isinstance(x, bool) or isinstance(x, float):
        raise SortError(f"{x!r} is not an exact rational; pass a string or Fraction")
    if isinstance(x, str):
        x = x.strip()
    try:
        q = Fraction(x)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise SortError(f"not a rational literal: {x!r}") from exc
    return q.numerator if q.denominator == 1 else q


def format_rational(q: Rational) -> str:
    """Shortest exact text for ``q``: a decimal when one exists, else ``p/q``."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    den, twos, fives = q.denominator, 0, 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{q.numerator}/{q.denominator}"
    digits = max(twos, fives)
    scaled = abs(q.numerator) * (10**digits // q.denominator)
    text = str(scaled).rjust(digits + 1, "0")
    sign = "-" if q < 0 else ""
    return f"{sign}{text[:-digits]}.{text[-digits:]}"


def coerce_value(value, sort: Sort) -> Value:
    if sort is Sort.Q:
        return to_rational(value)
    if not isinstance(value, str):
        raise SortError(f"D values are strings, got {value!r}")
    return value


@dataclass(frozen=True)
class Schema:
    """Ordered, uniquely named, sorted attributes.

    ``name`` is a label for printing only and takes no part in equality.
    """

    attributes: tuple[tuple[str, Sort], ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        attrs = tuple((str(a), Sort(s)) for a, s in self.attributes)
        if not attrs:
            raise SchemaMismatchError("a schema needs at least one attribute")
        names = [a for a, _ in attrs]
        if len(set(names)) != len(names):
            raise SchemaMismatchError(f"duplicate attribute names in {names}")
        object.__setattr__(self, "attributes", attrs)
        object.__setattr__(self, "_pos", {a: i for i, a in enumerate(names)})

    @classmethod
    def of(cls, spec: str, name: str = "") -> Schema:
        """Build from ``"ISBN:D, Vendor:D, Price:Q"``."""
        attrs = []
        for part in spec.split(","):
            attr, _, sort = part.strip().partition(":")
            attrs.append((attr.strip(), Sort(sort.strip())))
        return cls(tuple(attrs), name)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(a for a, _ in self.attributes)

    def __contains__(self, attr) -> bool:
        return attr in self._pos

    def __len__(self) -> int:
        return len(self.attributes)

    def index(self, attr: str) -> int:
        try:
            return self._pos[attr]
        except KeyError:
            raise SchemaMismatchError(f"unknown attribute {attr!r} in schema {self.names}") from None

    def sort_of(self, attr: str) -> Sort:
        return self.attributes[self.index(attr)][1]

    def project(self, attrs: Sequence[str]) -> Schema:
        return Schema(tuple((a, self.sort_of(a)) for a in attrs))

    def __str__(self):
        body = ", ".join(f"{a}:{s.value}" for a, s in self.attributes)
        return f"{self.name}({body})" if self.name else f"({body})"


@dataclass(frozen=True)
class Var:
    """Attribute ``attr`` of tuple variable number ``index``."""

    index: int
    attr: str


@dataclass(frozen=True)
class Const:
    value: Value
    sort: Sort

    def __post_init__(self):
        object.__setattr__(self, "value", coerce_value(self.value, self.sort))


Term = Union[Var, Const]

OPS = ("=", "!=", "<", ">", "<=", ">=")
D_OPS = ("=", "!=")
_COMPLEMENT = {"=": "!=", "!=": "=", "<": ">=", ">=": "<", ">": "<=", "<=": ">"}
_PYOP = {"=": "==", "!=": "!=", "<": "<", ">": ">", "<=": "<=", ">=": ">="}


@dataclass(frozen=True)
class Atom:
    lhs: Term
    op: str
    rhs: Term
    sort: Sort


def _term_sort(term: Term, schema: Schema) -> Sort:
    if isinstance(term, Var):
        return schema.sort_of(term.attr)
    return term.sort


def _compare(a, op: str, b) -> bool:
    if op == "=":
        return a == b
    if op == "!=":
        return a != b
    if op == "<":
        return a < b
    if op == ">":
        return a > b
    if op == "<=":
        return a <= b
    return a >= b


def make_atom(schema: Schema, lhs: Term, op: str, rhs: Term) -> Atom | bool:
    """Well-sorted atom, or a bool when both sides are constants."""
    if op not in OPS:
        raise SortError(f"unknown comparison {op!r}")
    ls, rs = _term_sort(lhs, schema), _term_sort(rhs, schema)
    if ls is not rs:
        raise SortError(f"cannot compare {ls.value} with {rs.value}")
    if ls is Sort.D and op not in D_OPS:
        raise SortError(f"D attributes only support = and !=, not {op}")
    if isinstance(lhs, Const) and isinstance(rhs, Const):
        return _compare(lhs.value, op, rhs.value)
    return Atom(lhs, op, rhs, ls)


def negate_atom(a: Atom) -> Atom:
    return Atom(a.lhs, _COMPLEMENT[a.op], a.rhs, a.sort)


Conjunction = tuple  # tuple[Atom, ...]; the empty conjunction is true


def _simplify_conj(atoms: Iterable[Atom]) -> tuple[Atom, ...] | None:
    """Deduplicate atoms; None if the conjunction holds an atom and its complement."""
    seen: dict[Atom, None] = {}
    for a in atoms:
        seen.setdefault(a, None)
    for a in seen:
        if negate_atom(a) in seen:
            return None
    return tuple(seen)


@dataclass(frozen=True)
class DnfFormula:
    """Disjunction of conjunctions of atoms over ``nvars`` tuple variables.

    No disjuncts means false; a disjunct with no atoms means true.  The
    constructor validates sorts and applies the cheap simplifications only:
    duplicate atoms and duplicate disjuncts are dropped, as are disjuncts
    containing complementary atoms.
    """

    schema: Schema
    nvars: int
    disjuncts: tuple[tuple[Atom, ...], ...] = ()

    def __post_init__(self):
        if self.nvars < 1:
            raise SchemaMismatchError("a formula needs at least one tuple variable")
        out: dict[tuple[Atom, ...], None] = {}
        for conj in self.disjuncts:
            for a in conj:
                self._check_atom(a)
            simple = _simplify_conj(conj)
            if simple is not None:
                out.setdefault(simple, None)
        object.__setattr__(self, "disjuncts", tuple(out))

    def _check_atom(self, a: Atom) -> None:
        if not isinstance(a, Atom):
            raise SortError(f"not an atom: {a!r}")
        for t in (a.lhs, a.rhs):
            if isinstance(t, Var):
                if not 0 <= t.index < self.nvars:
                    raise SchemaMismatchError(f"tuple variable {t.index} out of range 0..{self.nvars - 1}")
                if self.schema.sort_of(t.attr) is not a.sort:
                    raise SortError(f"atom {a} mixes sorts")
            elif t.sort is not a.sort:
                raise SortError(f"atom {a} mixes sorts")
        if a.sort is Sort.D and a.op not in D_OPS:
            raise SortError(f"D attributes only support = and !=, not {a.op}")

    @classmethod
    def true(cls, schema: Schema, nvars: int) -> DnfFormula:
        return cls(schema, nvars, ((),))

    @classmethod
    def false(cls, schema: Schema, nvars: int) -> DnfFormula:
        return cls(schema, nvars, ())

    @classmethod
    def build(cls, schema: Schema, nvars: int, disjuncts: Iterable[Iterable[Atom | bool]]) -> DnfFormula:
        """Like the constructor but accepts folded ``True``/``False`` entries."""
        out = []
        for conj in disjuncts:
            atoms = []
            for a in conj:
                if a is False:
                    break
                if a is not True:
                    atoms.append(a)
            else:
                out.append(tuple(atoms))
        return cls(schema, nvars, tuple(out))

    @property
    def is_false(self) -> bool:
        return not self.disjuncts

    @property
    def has_true_disjunct(self) -> bool:
        return any(not c for c in self.disjuncts)

    def __str__(self):
        return format_formula(self)


@dataclass(frozen=True)
class FormulaStats:
    width: int
    span: int


def stats(f: DnfFormula) -> FormulaStats:
    return FormulaStats(len(f.disjuncts), max((len(c) for c in f.disjuncts), default=0))


def _same_frame(f: DnfFormula, g: DnfFormula) -> None:
    if f.schema != g.schema or f.nvars != g.nvars:
        raise SchemaMismatchError("formulas range over different schemas or tuple-variable counts")


def _absorb(disjuncts: Sequence[tuple[Atom, ...]]) -> list[tuple[Atom, ...]]:
    # drop any disjunct whose atom set strictly contains another's
    sets = [frozenset(c) for c in disjuncts]
    order = sorted(range(len(sets)), key=lambda i: len(sets[i]))
    kept: list[int] = []
    for i in order:
        if not any(sets[j] <= sets[i] for j in kept):
            kept.append(i)
    kept.sort()
    return [disjuncts[i] for i in kept]


def conjoin(f: DnfFormula, g: DnfFormula) -> DnfFormula:
    _same_frame(f, g)
    return DnfFormula(f.schema, f.nvars, tuple(a + b for a in f.disjuncts for b in g.disjuncts))


def conjoin_all(formulas: Sequence[DnfFormula], schema: Schema | None = None, nvars: int | None = None) -> DnfFormula:
    if not formulas:
        if schema is None or nvars is None:
            raise ValueError("empty conjunction needs an explicit schema and nvars")
        return DnfFormula.true(schema, nvars)
    out = formulas[0]
    for g in formulas[1:]:
        out = conjoin(out, g)
    return out


def disjoin(f: DnfFormula, g: DnfFormula) -> DnfFormula:
    _same_frame(f, g)
    return DnfFormula(f.schema, f.nvars, f.disjuncts + g.disjuncts)


def negate(f: DnfFormula) -> DnfFormula:
    """DNF of the negation, by De Morgan and distribution.

    Intermediate products are absorbed as they grow, which keeps the usual
    preference formulas small; the worst case is still exponential.
    """
    acc: list[tuple[Atom, ...]] = [()]
    for conj in f.disjuncts:
        if not conj:
            return DnfFormula.false(f.schema, f.nvars)
        step = []
        for prefix in acc:
            for a in conj:
                simple = _simplify_conj(prefix + (negate_atom(a),))
                if simple is not None:
                    step.append(simple)
        acc = _absorb(list(dict.fromkeys(step))) if len(step) <= 1024 else step
    return DnfFormula(f.schema, f.nvars, tuple(acc))


def _rename(t: Term, mapping: Sequence[int]) -> Term:
    return Var(mapping[t.index], t.attr) if isinstance(t, Var) else t


def instantiate(f: DnfFormula, mapping: Sequence[int], nvars: int) -> DnfFormula:
    """Rename tuple variable ``i`` to ``mapping[i]`` in a frame of ``nvars`` variables."""
    if len(mapping) != f.nvars:
        raise SchemaMismatchError(f"mapping has {len(mapping)} entries, formula has {f.nvars} tuple variables")
    if any(not 0 <= m < nvars for m in mapping):
        raise SchemaMismatchError(f"mapping {list(mapping)} leaves the range 0..{nvars - 1}")
    mapping = tuple(mapping)
    return DnfFormula(
        f.schema,
        nvars,
        tuple(
            tuple(Atom(_rename(a.lhs, mapping), a.op, _rename(a.rhs, mapping), a.sort) for a in conj)
            for conj in f.disjuncts
        ),
    )


def swap(f: DnfFormula) -> DnfFormula:
    """Exchange the two tuple variables of a binary formula."""
    return instantiate(f, (1, 0), 2)


@lru_cache(maxsize=4096)
def compile_formula(f: DnfFormula) -> Callable[..., bool]:
    """A plain Python predicate taking ``f.nvars`` value tuples.

    The generated lambda indexes tuple positions directly; it does no sort
    or arity checking, which :func:`evaluate` does instead.
    """
    consts: list = []

    def term(t: Term) -> str:
        if isinstance(t, Var):
            return f"t{t.index}[{f.schema.index(t.attr)}]"
        consts.append(t.value)
        return f"K[{len(consts) - 1}]"

    parts = []
    for conj in f.disjuncts:
        if not conj:
            parts.append("True")
            continue
        parts.append("(" + " and ".join(f"{term(a.lhs)} {_PYOP[a.op]} {term(a.rhs)}" for a in conj) + ")")
    args = ", ".join(f"t{i}" for i in range(f.nvars))
    src = f"lambda {args}: bool({' or '.join(parts) or 'False'})"
    return eval(src, {"K": tuple(consts)})  # noqa: S307 - source is generated from validated atoms


def check_tuple(schema: Schema, t: Sequence) -> None:
    if len(t) != len(schema):
        raise SchemaMismatchError(f"tuple {t!r} has arity {len(t)}, schema has {len(schema)}")
    for v, (attr, sort) in zip(t, schema.attributes):
        ok = isinstance(v, str) if sort is Sort.D else isinstance(v, (int, Fraction)) and not isinstance(v, bool)
        if not ok:
            raise SchemaMismatchError(f"value {v!r} does not fit {attr}:{sort.value}")


def evaluate(f: DnfFormula, tuples: Sequence[Sequence]) -> bool:
    if len(tuples) != f.nvars:
        raise SchemaMismatchError(f"formula takes {f.nvars} tuples, got {len(tuples)}")
    for t in tuples:
        check_tuple(f.schema, t)
    return compile_formula(f)(*tuples)


def format_term(t: Term, var_names: Sequence[str] | None = None) -> str:
    if isinstance(t, Var):
        if var_names is None:
            return f"t{t.index + 1}.{t.attr}"
        name = var_names[t.index]
        return f"{name}.{t.attr}" if name else t.attr
    if t.sort is Sort.Q:
        return format_rational(t.value)
    escaped = t.value.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def format_formula(f: DnfFormula, var_names: Sequence[str] | None = None) -> str:
    """Render in the workspace syntax; ``var_names`` default to t1, t2, ..."""
    if f.is_false:
        return "FALSE"
    parts = []
    for conj in f.disjuncts:
        if not conj:
            parts.append("TRUE")
        else:
            parts.append(" AND ".join(f"{format_term(a.lhs, var_names)} {a.op} {format_term(a.rhs, var_names)}" for a in conj))
    return " OR ".join(parts)
