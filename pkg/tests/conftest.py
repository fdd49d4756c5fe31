from pathlib import Path

import pytest

from winnowopt import FunctionalDependency, Relation, parse

BOOK_ROWS = [
    ("0679726691", "BooksForLess", "14.75"),
    ("0679726691", "LowestPrices", "13.50"),
    ("0679726691", "QualityBooks", "18.80"),
    ("0062059041", "BooksForLess", "7.30"),
    ("0374164770", "LowestPrices", "21.88"),
]
RESULT_ROWS = [
    ("0679726691", "LowestPrices", "13.50"),
    ("0062059041", "BooksForLess", "7.30"),
    ("0374164770", "LowestPrices", "21.88"),
]

WORKSPACE = """\
SCHEMA Book(ISBN: D, Vendor: D, Price: Q)
SCHEMA RatedBook(ISBN: D, Vendor: D, Price: Q, Rating: Q)
RELATION Book ON Book FROM "book.csv"
PREFER C1 ON Book(t1, t2) WHEN t1.ISBN = t2.ISBN AND t1.Price < t2.Price
PREFER C2 ON RatedBook(t1, t2) WHEN
    t1.ISBN = t2.ISBN AND t1.Price < t2.Price AND t1.Rating >= t2.Rating
 OR t1.ISBN = t2.ISBN AND t1.Price <= t2.Price AND t1.Rating > t2.Rating
FD f_isbn_price ON Book: ISBN -> Price
FD f_empty_isbn ON Book: {} -> ISBN
PLAN declared = WINNOW[C1](SCAN Book WITH f_isbn_price)
PLAN one_isbn = WINNOW[C1](SELECT[ISBN = 0679726691](SCAN Book))
PLAN plain = WINNOW[C1](SCAN Book)
"""

BOOK_CSV = "ISBN:D,Vendor:D,Price:Q\n" + "".join(",".join(r) + "\n" for r in BOOK_ROWS)


@pytest.fixture(scope="session")
def ws():
    return parse(WORKSPACE)


@pytest.fixture(scope="session")
def book_schema(ws):
    return ws.schemas["Book"]


@pytest.fixture(scope="session")
def C1(ws):
    return ws.preferences["C1"]


@pytest.fixture(scope="session")
def C2(ws):
    return ws.preferences["C2"]


@pytest.fixture(scope="session")
def book(book_schema):
    return Relation.from_rows(book_schema, BOOK_ROWS)


@pytest.fixture(scope="session")
def book_result(book_schema):
    return Relation.from_rows(book_schema, RESULT_ROWS)


@pytest.fixture(scope="session")
def isbn_price():
    return FunctionalDependency.parse("ISBN -> Price")


@pytest.fixture(scope="session")
def empty_isbn():
    return FunctionalDependency.parse("{} -> ISBN")


@pytest.fixture
def ws_dir(tmp_path: Path) -> Path:
    (tmp_path / "book.csv").write_text(BOOK_CSV, encoding="utf-8")
    (tmp_path / "book.pql").write_text(WORKSPACE, encoding="utf-8")
    return tmp_path


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
