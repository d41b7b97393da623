from fractions import Fraction
from itertools import combinations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _brute import collinear_triples, is_metric_matrix, metric_exists
from metricity.generators import complete, enumerate_hypergraphs, fano
from metricity.hypergraph import Hypergraph
from metricity.metric import FiniteMetric, middle, realizes
from metricity.oracle import (
    HALF_STEP_ALPHABET,
    OracleLimitError,
    alphabet_search,
    decide_metric,
    iter_alphabet_metrics,
    verdict_to_json,
)

# a 7-edge hypergraph on 6 vertices that no metric realises
SMALL_NONMETRIC = Hypergraph(6, ((0, 1, 3), (0, 2, 4), (0, 3, 4), (1, 2, 5), (1, 3, 5),
                                 (2, 4, 5), (3, 4, 5)))


def _check_verdict(v, h):
    assert v.kind in ("metric", "nonmetric")
    if v.is_metric:
        assert realizes(v.witness, h)
        for e, mid in v.assignment.items():
            assert middle(v.witness, *e) == mid
    else:
        assert v.stats.branches_covered == v.stats.branch_space == 3 ** h.m


@pytest.mark.parametrize("n", [3, 4, 5])
def test_all_small_classes_agree_with_fourier_motzkin(n):
    for h in enumerate_hypergraphs(n, lambda g: True):
        v = decide_metric(h)
        _check_verdict(v, h)
        assert v.is_metric == metric_exists(n, list(h.edges)), h.edges


def test_small_nonmetric_agrees_with_fourier_motzkin():
    v = decide_metric(SMALL_NONMETRIC)
    _check_verdict(v, SMALL_NONMETRIC)
    assert not v.is_metric
    assert not metric_exists(6, list(SMALL_NONMETRIC.edges))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**20 - 1))
def test_random_six_vertex_verdicts_are_certified(mask):
    triples = list(combinations(range(6), 3))
    h = Hypergraph(6, tuple(t for i, t in enumerate(triples) if mask >> i & 1))
    v = decide_metric(h)
    _check_verdict(v, h)
    assert decide_metric(h, symmetry=False).kind == v.kind


@pytest.mark.parametrize("h", [fano(), SMALL_NONMETRIC, complete(4), complete(5)],
                         ids=["fano", "small", "k4", "k5"])
def test_exact_backend_agrees(h):
    assert decide_metric(h, backend="exact").kind == decide_metric(h).kind


def test_fano_is_nonmetric_with_full_coverage():
    v = decide_metric(fano())
    assert v.kind == "nonmetric"
    assert v.stats.branch_space == 3 ** 7 == 2187
    assert v.stats.branches_covered == 2187


def test_complete_four_is_metric():
    v = decide_metric(complete(4))
    assert v.is_metric and realizes(v.witness, complete(4))


def test_budget_verdict():
    v = decide_metric(fano(), max_nodes=3)
    assert v.kind == "budget"
    assert v.stats.branches_covered < v.stats.branch_space


def test_vertex_cap():
    with pytest.raises(OracleLimitError):
        decide_metric(Hypergraph(11, ((0, 1, 2),)), max_n=10)


def _brute_alphabet(h, alphabet):
    pairs = list(combinations(range(h.n), 2))
    found = []
    for vals in product(alphabet, repeat=len(pairs)):
        d = [[Fraction(0)] * h.n for _ in range(h.n)]
        for (i, j), x in zip(pairs, vals):
            d[i][j] = d[j][i] = x
        if is_metric_matrix(h.n, d) and collinear_triples(h.n, d) == list(h.edges):
            found.append(tuple(vals))
    return found


@pytest.mark.parametrize("n", [3, 4])
def test_alphabet_search_is_exhaustive(n):
    for h in enumerate_hypergraphs(n, lambda g: True):
        brute = _brute_alphabet(h, HALF_STEP_ALPHABET)
        got = [tuple(m.d[i][j] for i, j in combinations(range(n), 2))
               for m in iter_alphabet_metrics(h, HALF_STEP_ALPHABET)]
        assert sorted(got) == sorted(brute)
        m = alphabet_search(h, HALF_STEP_ALPHABET)
        assert (m is None) == (not brute)


def test_alphabet_on_nonmetric_finds_nothing():
    assert alphabet_search(fano(), [1, Fraction(3, 2), 2, 3]) is None


def test_certificate_json():
    cert = verdict_to_json(decide_metric(fano()))
    assert cert["verdict"] == "nonmetric"
    assert cert["statistics"]["branches_covered"] == 2187
    assert cert["infeasible_branches"]
    cert = verdict_to_json(decide_metric(complete(4)))
    w = {tuple(map(int, k.split())): Fraction(x) for k, x in cert["witness"].items()}
    assert realizes(FiniteMetric.from_pairs(4, w), complete(4))
