from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from metricity.generators import fano, random_f0_sparse
from metricity.hypergraph import Hypergraph
from metricity.io import (
    FormatError,
    format_fm,
    format_hg,
    hypergraph_to_json,
    parse_fm,
    parse_hg,
    parse_value,
)
from metricity.metric import line_metric
from metricity.realizer import realize_f0


def test_hg_roundtrip_fano():
    h = fano()
    text = format_hg(h)
    assert text.splitlines()[0] == "7 7"
    assert parse_hg(text) == h


def test_hg_comments_and_json():
    text = "# fano line\n4 1\n\n2 0 1  # unsorted\n"
    assert parse_hg(text) == Hypergraph(4, ((0, 1, 2),))
    import json
    assert parse_hg(json.dumps(hypergraph_to_json(fano()))) == fano()


@pytest.mark.parametrize("text, needle", [
    ("", "empty"),
    ("4\n", "header"),
    ("4 2\n0 1 2\n", "announces 2"),
    ("4 1\n0 1 9\n", "out of range"),
    ("4 1\n0 1 1\n", "repeated"),
    ("4 2\n0 1 2\n2 1 0\n", "duplicate"),
    ("4 1\n0 x 2\n", "integer"),
    ("4 1\n0 1\n", "3 vertices"),
    ('{"n": 3}', "JSON hypergraph"),
    ('{"n": 3, "edges": [[0, 1, 5]]}', "out of range"),
    ("{oops", "invalid JSON"),
])
def test_hg_errors(text, needle):
    with pytest.raises(FormatError, match=needle):
        parse_hg(text)


def test_error_line_numbers():
    with pytest.raises(FormatError) as err:
        parse_hg("4 2\n0 1 2\n# c\n0 1 7\n")
    assert err.value.line == 4


@settings(max_examples=30, deadline=None)
@given(st.integers(4, 9), st.integers(0, 1000))
def test_fm_roundtrip(n, seed):
    m = realize_f0(random_f0_sparse(n, seed=seed))
    assert parse_fm(format_fm(m)) == m


def test_fm_values():
    assert parse_value("3/2") == Fraction(3, 2)
    assert parse_value("1.25") == Fraction(5, 4)
    with pytest.raises(ValueError):
        parse_value("abc")
    m = parse_fm("3\n0 1 1.5\n0 2 3/2\n1 2 3\n")
    assert m.d[1][2] == 3 and format_fm(m).splitlines()[1] == "0 1 3/2"


@pytest.mark.parametrize("text, needle", [
    ("3\n0 1 1\n0 2 1\n", "missing"),
    ("3\n0 1 1\n0 2 1\n1 2 5\n", "not a metric"),
    ("3\n0 1 1\n0 1 1\n", "duplicate"),
    ("3\n1 0 1\n", "must satisfy"),
    ("3\n0 1 x\n", "exact number"),
    ("3 1\n", "header"),
])
def test_fm_errors(text, needle):
    with pytest.raises(FormatError, match=needle):
        parse_fm(text)


def test_line_metric_text():
    assert format_fm(line_metric([0, 1])) == "2\n0 1 1\n"
