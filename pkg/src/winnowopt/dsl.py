"""Text format for workspaces (``.pql`` files).

A workspace declares schemas, CSV-backed relations, preferences, FDs, CGDs
and query plans, in any order::

    SCHEMA Book(ISBN: D, Vendor: D, Price: Q)
    RELATION Book ON Book FROM "book.csv"
    PREFER C1 ON Book(t1, t2) WHEN t1.ISBN = t2.ISBN AND t1.Price < t2.Price
    FD isbn_price ON Book: ISBN -> Price
    FD one_isbn ON Book: {} -> ISBN
    CGD cap ON Book(t): TRUE => t.Price <= 100
    PLAN p = WINNOW[C1](SCAN Book WITH isbn_price)

Boolean conditions use ``AND``, ``OR``, parentheses, ``TRUE`` and
``FALSE``, and are distributed into DNF when the workspace is built.
Inside ``SELECT[...]`` attributes may be written bare.  D literals are
double-quoted; a bare number compared with a D attribute (an ISBN, say) is
read as the D constant with that exact spelling.  Keywords are
case-insensitive, identifiers are not, and ``#`` starts a comment.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from .csvio import load_relation
from .dependency import Cgd, FunctionalDependency
from .engine import Project, QueryPlan, Relation, Scan, Select, Winnow
from .errors import WinnowOptError
from .formula import Const, DnfFormula, Schema, Sort, Var, format_formula, make_atom, to_rational
from .preference import PreferenceRelation

KEYWORDS = {
    "SCHEMA", "RELATION", "PREFER", "FD", "CGD", "PLAN", "ON", "FROM", "WHEN",
    "AND", "OR", "TRUE", "FALSE", "WINNOW", "SELECT", "PROJECT", "SCAN", "WITH",
}
MAX_DISJUNCTS = 100_000
MAX_DEPTH = 200


@dataclass
class ParseError(WinnowOptError):
    line: int
    column: int
    message: str
    token: str = ""

    def __post_init__(self):
        super().__init__(str(self))

    def __str__(self):
        near = f" near {self.token!r}" if self.token else ""
        return f"{self.line}:{self.column}: {self.message}{near}"


class ResolveError(WinnowOptError):
    """Every unresolved reference or sort error found after parsing."""

    def __init__(self, errors: list[ParseError]):
        self.errors = errors
        super().__init__("; ".join(str(e) for e in errors))


# -- lexing --------------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n\f\v]+)
    |(?P<comment>\#[^\n]*)
    |(?P<string>"(?:[^"\\\n]|\\.)*")
    |(?P<number>-?\d+(?:\.\d+)?(?:/\d+)?)
    |(?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    |(?P<op>->|=>|<=|>=|!=|<>|=|<|>)
    |(?P<punct>[()\[\]{},.:;])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # kw, ident, number, string, op, punct, eof
    text: str
    line: int
    column: int

    @property
    def value(self) -> str:
        return self.text.upper() if self.kind == "kw" else self.text


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(line, col, "unexpected character", text[pos])
        kind, chunk = m.lastgroup, m.group()
        if kind == "ident" and chunk.upper() in KEYWORDS:
            kind = "kw"
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, chunk, line, col))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


def _unquote(s: str) -> str:
    return re.sub(r"\\(.)", r"\1", s[1:-1])


# -- raw syntax tree ---------------------------------------------------------------


@dataclass(frozen=True)
class Ref:
    var: str | None
    attr: str
    tok: Token
    var_tok: Token | None = None


@dataclass(frozen=True)
class Num:
    text: str
    tok: Token


@dataclass(frozen=True)
class Str:
    value: str
    tok: Token


@dataclass(frozen=True)
class Cmp:
    lhs: object
    op: str
    rhs: object
    tok: Token


@dataclass(frozen=True)
class BoolOp:
    op: str  # AND / OR
    items: tuple


@dataclass(frozen=True)
class Lit:
    value: bool


@dataclass(frozen=True)
class RawPlan:
    kind: str
    arg: object
    child: RawPlan | None
    tok: Token


@dataclass(frozen=True)
class Decl:
    kind: str
    name: str
    tok: Token
    fields: dict


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.depth = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(tok.line, tok.column, msg, tok.text)

    def next(self) -> Token:
        t = self.tok
        if t.kind != "eof":
            self.i += 1
        return t

    def at(self, kind: str, value: str | None = None) -> bool:
        t = self.tok
        return t.kind == kind and (value is None or t.value == value)

    def accept(self, kind: str, value: str | None = None) -> Token | None:
        return self.next() if self.at(kind, value) else None

    def expect(self, kind: str, value: str | None = None, what: str | None = None) -> Token:
        if self.at(kind, value):
            return self.next()
        raise self.error(f"expected {what or value or kind}")

    def ident(self, what: str) -> Token:
        return self.expect("ident", what=what)

    def nest(self):
        self.depth += 1
        if self.depth > MAX_DEPTH:
            raise self.error("nesting too deep")

    # declarations

    def workspace(self) -> list[Decl]:
        decls = []
        while not self.at("eof"):
            if self.accept("punct", ";"):
                continue
            decls.append(self.decl())
        return decls

    def decl(self) -> Decl:
        t = self.tok
        if t.kind != "kw" or t.value not in ("SCHEMA", "RELATION", "PREFER", "FD", "CGD", "PLAN"):
            raise self.error("expected a declaration (SCHEMA, RELATION, PREFER, FD, CGD or PLAN)")
        self.next()
        return getattr(self, "decl_" + t.value.lower())(t)

    def decl_schema(self, kw: Token) -> Decl:
        name = self.ident("schema name")
        self.expect("punct", "(")
        attrs = []
        while True:
            a = self.ident("attribute name")
            self.expect("punct", ":")
            s = self.expect("ident", what="sort D or Q")
            if s.text not in ("D", "Q"):
                raise self.error("expected sort D or Q", s)
            attrs.append((a, s.text))
            if not self.accept("punct", ","):
                break
        self.expect("punct", ")")
        return Decl("schema", name.text, name, {"attrs": attrs})

    def decl_relation(self, kw: Token) -> Decl:
        name = self.ident("relation name")
        self.expect("kw", "ON")
        schema = self.ident("schema name")
        self.expect("kw", "FROM")
        path = self.expect("string", what="quoted CSV path")
        return Decl("relation", name.text, name, {"schema": schema, "path": _unquote(path.text)})

    def vars(self) -> list[Token]:
        self.expect("punct", "(")
        out = [self.ident("tuple variable")]
        while self.accept("punct", ","):
            out.append(self.ident("tuple variable"))
        self.expect("punct", ")")
        return out

    def decl_prefer(self, kw: Token) -> Decl:
        name = self.ident("preference name")
        self.expect("kw", "ON")
        schema = self.ident("schema name")
        vs = self.vars()
        if len(vs) != 2:
            raise self.error("a preference takes exactly two tuple variables", vs[0])
        self.expect("kw", "WHEN")
        return Decl("prefer", name.text, name, {"schema": schema, "vars": vs, "cond": self.or_expr()})

    def attr_list(self, allow_empty: bool) -> list[Token]:
        if self.at("punct", "{"):
            open_tok = self.next()
            out = []
            if not self.at("punct", "}"):
                out.append(self.ident("attribute name"))
                while self.accept("punct", ","):
                    out.append(self.ident("attribute name"))
            self.expect("punct", "}")
            if not out and not allow_empty:
                raise self.error("attribute list may not be empty", open_tok)
            return out
        out = [self.ident("attribute name")]
        while self.accept("punct", ","):
            out.append(self.ident("attribute name"))
        return out

    def decl_fd(self, kw: Token) -> Decl:
        name = self.ident("FD name")
        self.expect("kw", "ON")
        schema = self.ident("schema name")
        self.expect("punct", ":")
        lhs = self.attr_list(allow_empty=True)
        self.expect("op", "->")
        rhs = self.attr_list(allow_empty=False)
        return Decl("fd", name.text, name, {"schema": schema, "lhs": lhs, "rhs": rhs})

    def decl_cgd(self, kw: Token) -> Decl:
        name = self.ident("CGD name")
        self.expect("kw", "ON")
        schema = self.ident("schema name")
        vs = self.vars()
        self.expect("punct", ":")
        body = self.or_expr()
        self.expect("op", "=>")
        head = self.or_expr()
        return Decl("cgd", name.text, name, {"schema": schema, "vars": vs, "body": body, "head": head})

    def decl_plan(self, kw: Token) -> Decl:
        name = self.ident("plan name")
        self.expect("op", "=")
        return Decl("plan", name.text, name, {"plan": self.plan_expr()})

    def plan_expr(self) -> RawPlan:
        self.nest()
        t = self.tok
        if self.accept("kw", "SCAN"):
            rel = self.ident("relation name")
            fds = []
            if self.accept("kw", "WITH"):
                fds.append(self.ident("FD name"))
                while self.accept("punct", ","):
                    fds.append(self.ident("FD name"))
            self.depth -= 1
            return RawPlan("scan", (rel, fds), None, rel)
        if t.kind == "kw" and t.value in ("WINNOW", "SELECT", "PROJECT"):
            self.next()
            self.expect("punct", "[")
            if t.value == "WINNOW":
                arg = self.ident("preference name")
            elif t.value == "SELECT":
                arg = self.or_expr()
            else:
                arg = self.attr_list(allow_empty=False)
            self.expect("punct", "]")
            self.expect("punct", "(")
            child = self.plan_expr()
            self.expect("punct", ")")
            self.depth -= 1
            return RawPlan(t.value.lower(), arg, child, t)
        raise self.error("expected WINNOW, SELECT, PROJECT or SCAN")

    # conditions

    def or_expr(self):
        items = [self.and_expr()]
        while self.accept("kw", "OR"):
            items.append(self.and_expr())
        return items[0] if len(items) == 1 else BoolOp("OR", tuple(items))

    def and_expr(self):
        items = [self.primary()]
        while self.accept("kw", "AND"):
            items.append(self.primary())
        return items[0] if len(items) == 1 else BoolOp("AND", tuple(items))

    def primary(self):
        if self.accept("kw", "TRUE"):
            return Lit(True)
        if self.accept("kw", "FALSE"):
            return Lit(False)
        if self.at("punct", "("):
            self.next()
            self.nest()
            inner = self.or_expr()
            self.expect("punct", ")")
            self.depth -= 1
            return inner
        lhs = self.term()
        op = self.tok
        if op.kind != "op" or op.text in ("->", "=>"):
            raise self.error("expected a comparison (=, !=, <, >, <=, >=)")
        self.next()
        rhs = self.term()
        return Cmp(lhs, "!=" if op.text == "<>" else op.text, rhs, op)

    def term(self):
        t = self.tok
        if t.kind == "number":
            return Num(self.next().text, t)
        if t.kind == "string":
            return Str(_unquote(self.next().text), t)
        if t.kind == "ident":
            self.next()
            if self.accept("punct", "."):
                attr = self.ident("attribute name")
                return Ref(t.text, attr.text, attr, t)
            return Ref(None, t.text, t)
        raise self.error("expected an attribute reference or a literal")


# -- resolution --------------------------------------------------------------------


def _dnf(expr) -> list[list]:
    """Distribute AND over OR; leaves are Cmp nodes or bools."""
    if isinstance(expr, Lit):
        return [[]] if expr.value else []
    if isinstance(expr, Cmp):
        return [[expr]]
    parts = [_dnf(e) for e in expr.items]
    if expr.op == "OR":
        return [c for p in parts for c in p]
    acc: list[list] = [[]]
    for p in parts:
        if len(acc) * len(p) > MAX_DISJUNCTS:
            raise ValueError(f"condition expands to more than {MAX_DISJUNCTS} disjuncts")
        acc = [a + b for a in acc for b in p]
    return acc


class _Scope:
    """How to read attribute references inside one condition."""

    def __init__(self, schema: Schema, var_names: list[str] | None):
        self.schema = schema
        self.var_index = {v: i for i, v in enumerate(var_names)} if var_names is not None else None
        self.nvars = len(var_names) if var_names is not None else 1

    def ref(self, r: Ref) -> Var:
        if self.var_index is None:
            var = Var(0, r.attr)
        else:
            if r.var is None:
                raise ParseError(r.tok.line, r.tok.column, "attribute needs a tuple variable here, e.g. t1." + r.attr, r.tok.text)
            if r.var not in self.var_index:
                vt = r.var_tok
                raise ParseError(vt.line, vt.column, f"unknown tuple variable {r.var!r}", vt.text)
            var = Var(self.var_index[r.var], r.attr)
        if r.attr not in self.schema:
            raise ParseError(r.tok.line, r.tok.column, f"schema {self.schema.name or ''} has no attribute {r.attr!r}", r.tok.text)
        return var

    def atom(self, c: Cmp):
        sides = [c.lhs, c.rhs]
        vars_ = [self.ref(s) if isinstance(s, Ref) else None for s in sides]
        sort = next((self.schema.sort_of(v.attr) for v in vars_ if v is not None), None)
        if sort is None:
            sort = Sort.D if any(isinstance(s, Str) for s in sides) else Sort.Q
        terms = []
        for s, v in zip(sides, vars_):
            if v is not None:
                terms.append(v)
            elif isinstance(s, Str):
                if sort is Sort.Q:
                    raise ParseError(s.tok.line, s.tok.column, "string literal compared with a Q attribute", s.tok.text)
                terms.append(Const(s.value, Sort.D))
            else:
                terms.append(Const(s.text if sort is Sort.D else to_rational(s.text), sort))
        try:
            return make_atom(self.schema, terms[0], c.op, terms[1])
        except WinnowOptError as exc:
            raise ParseError(c.tok.line, c.tok.column, str(exc), c.tok.text) from None

    def formula(self, expr, threshold: int) -> DnfFormula:
        try:
            raw = _dnf(expr)
        except ValueError as exc:
            tok = _first_token(expr)
            raise ParseError(tok.line, tok.column, str(exc), tok.text) from None
        if len(raw) > threshold:
            warnings.warn(f"condition expanded to {len(raw)} disjuncts", stacklevel=4)
        return DnfFormula.build(self.schema, self.nvars, [[self.atom(c) for c in conj] for conj in raw])


def _first_token(expr) -> Token:
    while isinstance(expr, BoolOp):
        expr = expr.items[0]
    if isinstance(expr, Cmp):
        return expr.tok
    return Token("eof", "", 1, 1)


@dataclass
class RelationDecl:
    schema: str
    path: str


@dataclass
class FdDecl:
    schema: str
    fd: FunctionalDependency


@dataclass
class Workspace:
    schemas: dict[str, Schema] = field(default_factory=dict)
    relations: dict[str, RelationDecl] = field(default_factory=dict)
    fds: dict[str, FdDecl] = field(default_factory=dict)
    cgds: dict[str, Cgd] = field(default_factory=dict)
    preferences: dict[str, PreferenceRelation] = field(default_factory=dict)
    plans: dict[str, QueryPlan] = field(default_factory=dict)
    base_dir: Path = field(default=Path("."), compare=False)
    _loaded: dict = field(default_factory=dict, compare=False, repr=False)

    def load(self, name: str) -> tuple[Relation, int]:
        """The relation's data and how many duplicate CSV rows were dropped."""
        if name not in self._loaded:
            decl = self.relations[name]
            path = Path(decl.path)
            if not path.is_absolute():
                path = self.base_dir / path
            self._loaded[name] = load_relation(path, self.schemas[decl.schema])
        return self._loaded[name]

    def catalog(self, names=None) -> dict[str, Relation]:
        return {n: self.load(n)[0] for n in (names if names is not None else self.relations)}

    def fd_set(self, names) -> frozenset[FunctionalDependency]:
        return frozenset(self.fds[n].fd for n in names)

    def fd_name(self, schema: Schema, fd: FunctionalDependency) -> str | None:
        for name, decl in self.fds.items():
            if decl.fd == fd and self.schemas.get(decl.schema) == schema:
                return name
        return None


def _build(decls: list[Decl], base_dir: Path, threshold: int) -> Workspace:
    ws = Workspace(base_dir=base_dir)
    errors: list[ParseError] = []

    def err(tok: Token, msg: str):
        errors.append(ParseError(tok.line, tok.column, msg, tok.text))

    seen: dict[tuple[str, str], Token] = {}
    for d in decls:
        key = ("relation" if d.kind == "relation" else d.kind, d.name)
        if key in seen:
            err(d.tok, f"duplicate {d.kind} name {d.name!r}")
        seen[key] = d.tok

    for d in decls:
        if d.kind == "schema":
            names = [a.text for a, _ in d.fields["attrs"]]
            if len(set(names)) != len(names):
                err(d.tok, f"duplicate attribute in schema {d.name!r}")
                continue
            ws.schemas.setdefault(d.name, Schema(tuple((a.text, Sort(s)) for a, s in d.fields["attrs"]), d.name))

    def schema_of(tok: Token) -> Schema | None:
        if tok.text not in ws.schemas:
            err(tok, f"unknown schema {tok.text!r}")
            return None
        return ws.schemas[tok.text]

    def guarded(fn):
        try:
            return fn()
        except ParseError as exc:
            errors.append(exc)
        return None

    for d in decls:
        f = d.fields
        if d.kind == "relation":
            if schema_of(f["schema"]) is not None:
                ws.relations.setdefault(d.name, RelationDecl(f["schema"].text, f["path"]))
        elif d.kind == "fd":
            s = schema_of(f["schema"])
            if s is None:
                continue
            bad = [a for a in f["lhs"] + f["rhs"] if a.text not in s]
            for a in bad:
                err(a, f"schema {s.name} has no attribute {a.text!r}")
            if not bad:
                fd = FunctionalDependency(frozenset(a.text for a in f["lhs"]), frozenset(a.text for a in f["rhs"]))
                ws.fds.setdefault(d.name, FdDecl(s.name, fd))
        elif d.kind == "prefer":
            s = schema_of(f["schema"])
            if s is None:
                continue
            vs = [v.text for v in f["vars"]]
            if vs[0] == vs[1]:
                err(f["vars"][1], "tuple variables must be distinct")
                continue
            formula = guarded(lambda: _Scope(s, vs).formula(f["cond"], threshold))
            if formula is not None:
                ws.preferences.setdefault(d.name, PreferenceRelation(d.name, formula))
        elif d.kind == "cgd":
            s = schema_of(f["schema"])
            if s is None:
                continue
            vs = [v.text for v in f["vars"]]
            if len(set(vs)) != len(vs):
                err(f["vars"][0], "tuple variables must be distinct")
                continue
            scope = _Scope(s, vs)
            body = guarded(lambda: scope.formula(f["body"], threshold))
            head = guarded(lambda: scope.formula(f["head"], threshold))
            if body is not None and head is not None:
                ws.cgds.setdefault(d.name, Cgd(body, head, name=d.name))

    def plan(raw: RawPlan) -> QueryPlan | None:
        if raw.kind == "scan":
            rel, fd_toks = raw.arg
            if rel.text not in ws.relations:
                err(rel, f"unknown relation {rel.text!r}")
                return None
            schema = ws.schemas[ws.relations[rel.text].schema]
            fds = []
            for t in fd_toks:
                decl = ws.fds.get(t.text)
                if decl is None:
                    err(t, f"unknown FD {t.text!r}")
                elif ws.schemas[decl.schema] != schema:
                    err(t, f"FD {t.text!r} is over schema {decl.schema}, not {schema.name}")
                else:
                    fds.append(decl.fd)
            return Scan(rel.text, schema, frozenset(fds))
        child = plan(raw.child)
        if child is None:
            return None
        if raw.kind == "select":
            cond = guarded(lambda: _Scope(child.schema, None).formula(raw.arg, threshold))
            return None if cond is None else Select(child, cond)
        if raw.kind == "project":
            attrs = [a.text for a in raw.arg]
            missing = [a for a in raw.arg if a.text not in child.schema]
            for a in missing:
                err(a, f"input has no attribute {a.text!r}")
            if len(set(attrs)) != len(attrs):
                err(raw.tok, "duplicate attribute in projection")
                return None
            return None if missing else Project(child, tuple(attrs))
        pref = ws.preferences.get(raw.arg.text)
        if pref is None:
            err(raw.arg, f"unknown preference {raw.arg.text!r}")
            return None
        if pref.schema != child.schema:
            err(raw.arg, f"preference {pref.name!r} does not match the schema of its input")
            return None
        return Winnow(child, pref)

    for d in decls:
        if d.kind == "plan":
            p = plan(d.fields["plan"])
            if p is not None:
                ws.plans.setdefault(d.name, p)

    if errors:
        raise ResolveError(errors)
    return ws


def parse(text: str, base_dir: str | Path = ".", width_warning: int = 256) -> Workspace:
    """Parse and resolve a workspace.

    Raises :class:`ParseError` on the first syntax error and
    :class:`ResolveError` listing every bad reference.
    """
    decls = _Parser(text).workspace()
    return _build(decls, Path(base_dir), width_warning)


def parse_file(path: str | Path, width_warning: int = 256) -> Workspace:
    path = Path(path)
    return parse(path.read_text(encoding="utf-8"), path.parent, width_warning)


# -- printing --------------------------------------------------------------------


def _var_names(n: int) -> list[str]:
    return [f"t{i + 1}" for i in range(n)]


def format_preference(C: PreferenceRelation) -> str:
    return f"PREFER {C.name} ON {C.schema.name}(t1, t2) WHEN {format_formula(C.formula)}"


def format_fd(name: str, decl: FdDecl) -> str:
    fd = decl.fd
    lhs = ", ".join(sorted(fd.lhs)) if fd.lhs else "{}"
    return f"FD {name} ON {decl.schema}: {lhs} -> {', '.join(sorted(fd.rhs))}"


def format_cgd(d: Cgd, name: str | None = None) -> str:
    names = _var_names(d.nvars)
    return (f"CGD {name or d.name} ON {d.schema.name}({', '.join(names)}): "
            f"{format_formula(d.body, names)} => {format_formula(d.head_formula(), names)}")


def format_plan(p: QueryPlan, fd_names: Mapping[FunctionalDependency, str] | None = None) -> str:
    if isinstance(p, Scan):
        if not p.fds:
            return f"SCAN {p.relation}"
        if fd_names is None or any(f not in fd_names for f in p.fds):
            raise ValueError("scan FDs need declared names to be printed")
        return f"SCAN {p.relation} WITH {', '.join(sorted(fd_names[f] for f in p.fds))}"
    inner = format_plan(p.child, fd_names)
    if isinstance(p, Select):
        return f"SELECT[{format_formula(p.condition, [''])}]({inner})"
    if isinstance(p, Project):
        return f"PROJECT[{', '.join(p.attrs)}]({inner})"
    return f"WINNOW[{p.preference.name}]({inner})"


def format_workspace(ws: Workspace) -> str:
    lines = []
    for name, s in ws.schemas.items():
        lines.append(f"SCHEMA {name}({', '.join(f'{a}: {t.value}' for a, t in s.attributes)})")
    for name, decl in ws.fds.items():
        lines.append(format_fd(name, decl))
    for name, d in ws.cgds.items():
        lines.append(format_cgd(d, name))
    for name, r in ws.relations.items():
        path = r.path.replace("\\", "\\\\").replace('"', '\\"')
        lines.append(f'RELATION {name} ON {r.schema} FROM "{path}"')
    for C in ws.preferences.values():
        lines.append(format_preference(C))
    for name, p in ws.plans.items():
        lines.append(f"PLAN {name} = {format_plan(p, _scoped_names(ws, p))}")
    return "\n".join(lines) + "\n"


def _scoped_names(ws: Workspace, p: QueryPlan) -> dict[FunctionalDependency, str]:
    names: dict[FunctionalDependency, str] = {}
    node = p
    while not isinstance(node, Scan):
        node = node.child
    for f in node.fds:
        n = ws.fd_name(node.schema, f)
        if n is not None:
            names[f] = n
    return names


def to_text(obj, workspace: Workspace | None = None) -> str:
    """Render any workspace object back into the text format."""
    if isinstance(obj, Workspace):
        return format_workspace(obj)
    if isinstance(obj, PreferenceRelation):
        return format_preference(obj)
    if isinstance(obj, Cgd):
        return format_cgd(obj)
    if isinstance(obj, DnfFormula):
        return format_formula(obj)
    if isinstance(obj, (Scan, Select, Project, Winnow)):
        return format_plan(obj, _scoped_names(workspace, obj) if workspace else None)
    if isinstance(obj, FunctionalDependency):
        return str(obj)
    raise TypeError(f"cannot print {type(obj).__name__}")
