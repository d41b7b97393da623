from collections import Counter
from itertools import combinations

import pytest

from _brute import f0_sparse, kl_sparse
from metricity.generators import (
    complete,
    complete_minus,
    enumerate_hypergraphs,
    fano,
    random_62_sparse,
    random_f0_sparse,
    steiner_triple_system,
)
from metricity.hypergraph import canonical_form, is_f_sparse


@pytest.mark.parametrize("order", [7, 9])
def test_steiner_systems_cover_each_pair_once(order):
    h = steiner_triple_system(order)
    assert h.m == order * (order - 1) // 6
    pairs = Counter(p for e in h.edges for p in combinations(e, 2))
    assert set(pairs.values()) == {1} and len(pairs) == order * (order - 1) // 2


def test_sts_rejects_other_orders():
    with pytest.raises(ValueError):
        steiner_triple_system(13)


def test_complete_and_minus():
    assert complete(6).m == 20
    h = complete_minus(6, [(2, 1, 0)])
    assert h.m == 19 and (0, 1, 2) not in h
    with pytest.raises(ValueError):
        complete_minus(6, [(0, 1, 9)])


@pytest.mark.parametrize("seed", range(10))
def test_random_generators_respect_sparsity(seed):
    h = random_62_sparse(9, 8, seed=seed)
    assert kl_sparse(h.n, h.edges, 6, 2)
    g = random_f0_sparse(8, seed=seed)
    assert f0_sparse(g.n, g.edges)
    assert random_62_sparse(9, 8, seed=seed) == h


def test_random_f0_is_maximal():
    g = random_f0_sparse(8, seed=3)
    for t in combinations(range(8), 3):
        if t not in g:
            assert not f0_sparse(8, list(g.edges) + [t])


def test_enumeration_yields_distinct_classes_in_order():
    out = list(enumerate_hypergraphs(7, is_f_sparse, cover=True))
    forms = [canonical_form(g) for g in out]
    assert len(set(forms)) == len(forms) == 19
    assert [g.m for g in out] == sorted(g.m for g in out)
    assert all(len(g.support()) == 7 for g in out)


def test_fano_is_the_plane():
    assert fano() == steiner_triple_system(7)
