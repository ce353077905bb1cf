from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import C6, Q3
from topecube.io import TopesParseError, format_topes, parse_topes, read_topes, write_topes
from topecube.pcube import ToGraph, even_cycle

DATA = Path(__file__).resolve().parent.parent / "data"


def test_shipped_files():
    assert read_topes(DATA / "c6.topes") == C6
    assert read_topes(DATA / "q3.topes") == Q3
    assert read_topes(DATA / "c8.topes") == even_cycle(4)


def test_comments_and_blank_lines():
    g = parse_topes("# hexagon\n\nn=2\n++  # both plus\n--\n")
    assert g.words == (0b00, 0b11)


@pytest.mark.parametrize("text,line", [
    ("", 1),
    ("+-\n", 1),
    ("n=x\n", 1),
    ("n=40\n", 1),
    ("n=2\n++\n+0\n", 3),
    ("n=2\n+++\n", 2),
    ("# c\nn=2\n--\n\n-\n", 5),
])
def test_parse_errors_report_line(text, line):
    with pytest.raises(TopesParseError) as info:
        parse_topes(text)
    assert info.value.line == line
    assert str(info.value).startswith(f"line {line}:")


def test_write_read_round_trip(tmp_path):
    p = tmp_path / "g.topes"
    write_topes(p, Q3, comment="cube\nthree")
    text = p.read_text()
    assert text.startswith("# cube\n# three\nn=3\n")
    assert read_topes(p) == Q3


@given(st.integers(1, 6).flatmap(lambda n: st.tuples(st.just(n), st.sets(st.integers(0, (1 << n) - 1), min_size=1))))
def test_format_parse_round_trip(data):
    n, ws = data
    g = ToGraph(ws, n)
    assert parse_topes(format_topes(g)) == g
