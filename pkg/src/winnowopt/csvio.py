"""CSV files with a typed header line, e.g. ``ISBN:D,Vendor:D,Price:Q``."""

from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import TextIO

from .engine import Relation
from .errors import DataError, SortError
from .formula import Schema, Sort, coerce_value, format_rational


def parse_header(fields: list[str]) -> Schema:
    attrs = []
    for cell in fields:
        name, sep, sort = cell.strip().rpartition(":")
        if not sep or sort.strip() not in ("D", "Q") or not name.strip():
            raise DataError(f"header cell {cell!r} is not of the form name:D or name:Q")
        attrs.append((name.strip(), Sort(sort.strip())))
    try:
        return Schema(tuple(attrs))
    except Exception as exc:
        raise DataError(str(exc)) from None


def read_relation(stream: TextIO, schema: Schema | None = None) -> tuple[Relation, int]:
    """Load a relation; returns it with the number of duplicate rows dropped.

    With ``schema`` given the header must describe the same attributes.
    """
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        if schema is None:
            raise DataError("empty CSV file without a header") from None
        return Relation(schema, frozenset()), 0
    found = parse_header(header)
    if schema is not None and found != schema:
        raise DataError(f"CSV header {found} does not match the declared schema {schema}")
    schema = schema or found
    rows = set()
    count = 0
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(schema):
            raise DataError(f"line {lineno}: expected {len(schema)} values, found {len(row)}")
        try:
            rows.add(tuple(coerce_value(v.strip() if s is Sort.Q else v, s) for v, (_, s) in zip(row, schema.attributes)))
        except SortError as exc:
            raise DataError(f"line {lineno}: {exc}") from None
        count += 1
    return Relation(schema, frozenset(rows)), count - len(rows)


def load_relation(path: str | Path, schema: Schema | None = None) -> tuple[Relation, int]:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            return read_relation(fh, schema)
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from None


def format_value(v) -> str:
    return v if isinstance(v, str) else format_rational(v)


def write_relation(r: Relation, stream: TextIO) -> None:
    """Header plus rows in canonical order."""
    w = csv.writer(stream, lineterminator="\n")
    w.writerow([f"{a}:{s.value}" for a, s in r.schema.attributes])
    for t in r.sorted_tuples():
        w.writerow([format_value(v) for v in t])


def relation_to_csv(r: Relation) -> str:
    buf = io.StringIO()
    write_relation(r, buf)
    return buf.getvalue()
