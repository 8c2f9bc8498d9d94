import pytest
from hypothesis import given

from dichroma.digraph import Digraph
from dichroma.errors import ParseError
from dichroma.formats import parse_colouring, parse_digraph, serialize_colouring, serialize_digraph
from dichroma.kernels import Colouring

from helpers import cycle, digraphs

C3_TEXT = "p dgr 3 3\na 1 2\na 2 3\na 3 1\n"


def test_parse_c3():
    D = parse_digraph(C3_TEXT)
    assert D == Digraph(3, cycle(3))


def test_comments_and_order_are_canonicalised():
    text = "c a triangle\np dgr 3 3\na 3 1\n\na 1 2\nc mid comment\na 2 3\n"
    assert serialize_digraph(parse_digraph(text)) == C3_TEXT


@given(digraphs(max_n=9, oriented=False))
def test_digraph_round_trip(D):
    text = serialize_digraph(D)
    assert parse_digraph(text) == D
    assert serialize_digraph(parse_digraph(text)) == text


@pytest.mark.parametrize("text, line", [
    ("p dgr 3 1\na 4 1\n", 2),
    ("p dgr 3 1\na 2 2\n", 2),
    ("c x\np dgr 3 1\na 1 x\n", 3),
    ("a 1 2\n", 1),
    ("p dgr 3 1\np dgr 3 1\n", 2),
    ("p graph 3 1\n", 1),
    ("p dgr 3 1\ne 1 2\n", 2),
    ("p dgr 3 1\na 1 2 3\n", 2),
])
def test_parse_errors_carry_line(text, line):
    with pytest.raises(ParseError) as exc:
        parse_digraph(text)
    assert exc.value.line == line
    assert f"line {line}" in str(exc.value)


def test_range_error_message():
    with pytest.raises(ParseError) as exc:
        parse_digraph("p dgr 3 1\na 4 1\n")
    assert "out of range" in str(exc.value)


def test_arc_count_mismatch():
    with pytest.raises(ParseError):
        parse_digraph("p dgr 3 2\na 1 2\n")
    with pytest.raises(ParseError):
        parse_digraph("c nothing here\n")


def test_colouring_round_trip():
    col = Colouring({0: 4, 1: 1, 2: 4})
    text = serialize_colouring(col, 3)
    assert text == "s dicol 3 2\nv 1 1\nv 2 0\nv 3 1\n"
    assert parse_colouring(text, 3).assignment == {0: 1, 1: 0, 2: 1}


@pytest.mark.parametrize("text", [
    "s dicol 2 1\nv 1 0\n",  # missing vertex
    "s dicol 2 1\nv 1 0\nv 2 1\n",  # colour >= k
    "s dicol 2 2\nv 1 0\nv 1 1\n",  # coloured twice
    "v 1 0\n",  # no header
    "s dicol 2 2\nv 3 0\nv 1 0\n",  # vertex out of range
])
def test_colouring_errors(text):
    with pytest.raises(ParseError):
        parse_colouring(text)


def test_colouring_size_must_match_digraph():
    with pytest.raises(ParseError):
        parse_colouring("s dicol 1 1\nv 1 0\n", 3)
