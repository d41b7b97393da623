from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _brute import collinear_triples, is_metric_matrix
from metricity.hypergraph import Hypergraph, disjoint_union
from metricity.metric import (
    FiniteMetric,
    betweenness_hypergraph,
    disjoint_union_metric,
    embed,
    equilateral,
    is_between,
    line_metric,
    max_distance,
    middle,
    realizes,
    validate_metric,
)

values = st.sampled_from([Fraction(1), Fraction(3, 2), Fraction(2), Fraction(5, 2), Fraction(3)])


@st.composite
def matrices(draw, max_n=7):
    n = draw(st.integers(1, max_n))
    dist = {p: draw(values) for p in combinations(range(n), 2)}
    return FiniteMetric.from_pairs(n, dist)


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_validate_agrees_with_brute_force(m):
    assert (validate_metric(m) is None) == is_metric_matrix(m.n, m.d)


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_betweenness_matches_brute_force(m):
    if validate_metric(m) is not None:
        with pytest.raises(ValueError):
            betweenness_hypergraph(m)
        return
    h = betweenness_hypergraph(m)
    assert list(h.edges) == collinear_triples(m.n, m.d)
    assert realizes(m, h)


def test_validate_reports_each_failure():
    assert "self-distance" in validate_metric(FiniteMetric(2, ((1, 1), (1, 0))))
    assert "asymmetric" in validate_metric(FiniteMetric(2, ((0, 1), (2, 0))))
    assert "nonpositive" in validate_metric(FiniteMetric(2, ((0, 0), (0, 0))))
    bad = FiniteMetric.from_pairs(3, {(0, 1): 1, (0, 2): 1, (1, 2): 3})
    assert "triangle" in validate_metric(bad)


def test_line_metric_is_fully_collinear():
    m = line_metric([0, 1, Fraction(5, 2), 4])
    h = betweenness_hypergraph(m)
    assert h.m == 4
    assert is_between(m, 0, 1, 3) and middle(m, 3, 0, 2) == 2


def test_equilateral_has_no_collinear_triples():
    assert betweenness_hypergraph(equilateral(6, 2)).m == 0


def test_from_pairs_needs_every_pair():
    with pytest.raises(ValueError):
        FiniteMetric.from_pairs(3, {(0, 1): 1, (0, 2): 1})


def test_is_between_rejects_repeats():
    with pytest.raises(ValueError):
        is_between(equilateral(3), 0, 0, 1)


@settings(max_examples=100, deadline=None)
@given(matrices(max_n=5), matrices(max_n=5))
def test_disjoint_union_metric(m1, m2):
    if validate_metric(m1) or validate_metric(m2):
        return
    u = disjoint_union_metric(m1, m2)
    assert validate_metric(u) is None
    assert u.d[0][m1.n] == max(max_distance(m1), max_distance(m2)) + Fraction(1, 2)
    expected = disjoint_union(betweenness_hypergraph(m1), betweenness_hypergraph(m2))
    assert betweenness_hypergraph(u) == expected


def test_embed_places_parts():
    a = line_metric([0, 1, 2])
    b = equilateral(2)
    m = embed([([4, 0, 2], a), ([1, 3], b)], 5)
    assert m.d[4][2] == 2 and m.d[1][3] == 1
    assert betweenness_hypergraph(m) == Hypergraph(5, ((0, 2, 4),))
    with pytest.raises(ValueError):
        embed([([0, 1], a)], 3)


@settings(max_examples=100, deadline=None)
@given(matrices(), st.sampled_from([Fraction(2), Fraction(1, 3), Fraction(7, 5)]))
def test_scaling_keeps_betweenness(m, c):
    if validate_metric(m) is not None:
        return
    s = m.scaled(c)
    assert validate_metric(s) is None
    assert betweenness_hypergraph(s) == betweenness_hypergraph(m)


def test_restrict():
    m = line_metric([0, 1, 3, 7])
    assert m.restrict([1, 3]).d[0][1] == 6
