import random
from itertools import combinations, permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _brute import f0_sparse, induced_count, kl_sparse
from metricity.generators import enumerate_hypergraphs, fano
from metricity.hypergraph import (
    Hypergraph,
    automorphism_group,
    canonical_form,
    canonical_labeling,
    components,
    count_induced,
    decode_canonical,
    disjoint_union,
    f0,
    f_sparsity_witness,
    induced,
    intersection_clusters,
    is_connected,
    is_f_sparse,
    is_kl_sparse,
    isomorphism,
    kl_sparsity_witness,
    two_sharing_pair,
)


@st.composite
def hypergraphs(draw, min_n=0, max_n=8):
    n = draw(st.integers(min_n, max_n))
    triples = list(combinations(range(n), 3))
    if not triples:
        return Hypergraph(n, ())
    chosen = draw(st.lists(st.sampled_from(triples), unique=True, max_size=min(len(triples), 12)))
    return Hypergraph(n, tuple(chosen))


def test_of_sorts_triples():
    h = Hypergraph.of(4, [(2, 0, 1), (3, 1, 0)])
    assert h.edges == ((0, 1, 2), (0, 1, 3))
    assert (1, 0, 2) in h and (1, 2, 3) not in h


@pytest.mark.parametrize("n, edges", [
    (3, [(0, 1, 3)]),
    (4, [(0, 0, 1)]),
    (4, [(0, 1, 2), (2, 1, 0)]),
    (4, [(0, 1)]),
])
def test_of_rejects_invalid(n, edges):
    with pytest.raises(ValueError):
        Hypergraph.of(n, edges)


def test_f0_values():
    assert [f0(k) for k in range(4, 11)] == [2, 3, 3, 4, 4, 5, 5]


@settings(max_examples=150, deadline=None)
@given(hypergraphs(), st.sampled_from([(3, 0), (4, 1), (5, 2), (6, 2), (6, 3), (9, 3)]))
def test_kl_sparsity_matches_subset_scan(h, kl):
    k, l = kl
    expected = kl_sparse(h.n, h.edges, k, l)
    assert is_kl_sparse(h, k, l) == expected
    w = kl_sparsity_witness(h, k, l)
    if w is not None:
        assert len(w) == min(k, h.n) and len(set(w)) == len(w)
        assert induced_count(h.edges, w) > l


@settings(max_examples=100, deadline=None)
@given(hypergraphs(max_n=8), st.integers(3, 9), st.integers(0, 4), st.integers(0, 3))
def test_sparsity_is_monotone_in_l(h, k, l, extra):
    if is_kl_sparse(h, k, l):
        assert is_kl_sparse(h, k, l + extra)


@settings(max_examples=60, deadline=None)
@given(hypergraphs(min_n=4, max_n=8), st.sampled_from(["vertices", "edges"]))
def test_kl_methods_agree(h, method):
    assert (kl_sparsity_witness(h, 6, 2, method=method) is None) == is_kl_sparse(h, 6, 2)


@settings(max_examples=150, deadline=None)
@given(hypergraphs(max_n=8))
def test_f0_sparsity_matches_subset_scan(h):
    assert is_f_sparse(h) == (h.n < 4 or f0_sparse(h.n, h.edges))
    w = f_sparsity_witness(h)
    if w is not None:
        assert 4 <= len(w) <= h.n
        assert induced_count(h.edges, w) > f0(len(w))


def test_fano_sparsity_examples():
    h = fano()
    assert is_kl_sparse(h, 5, 2)
    assert kl_sparsity_witness(h, 6, 2) is not None
    assert not is_f_sparse(h)


@settings(max_examples=80, deadline=None)
@given(hypergraphs(max_n=9), st.randoms(use_true_random=False))
def test_canonical_form_is_invariant(h, rnd):
    perm = list(range(h.n))
    rnd.shuffle(perm)
    g = h.relabel(perm)
    form, p = canonical_labeling(h)
    assert canonical_form(g) == form
    assert h.relabel(p) == decode_canonical(form)
    phi = isomorphism(h, g)
    assert phi is not None and h.relabel(phi) == g


def _brute_classes(n: int, accept=lambda n, e: True) -> int:
    triples = list(combinations(range(n), 3))
    perms = list(permutations(range(n)))
    seen = set()
    for mask in range(1 << len(triples)):
        edges = [t for i, t in enumerate(triples) if mask >> i & 1]
        if not accept(n, edges):
            continue
        seen.add(min(tuple(sorted(tuple(sorted(p[v] for v in e)) for e in edges)) for p in perms))
    return len(seen)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_class_counts_match_orbit_brute_force(n):
    assert sum(1 for _ in enumerate_hypergraphs(n, lambda h: True)) == _brute_classes(n)


@pytest.mark.parametrize("n", [4, 5])
def test_f0_covering_counts_match_brute_force(n):
    got = sum(1 for _ in enumerate_hypergraphs(n, is_f_sparse, cover=True))

    def accept(n, edges):
        return f0_sparse(n, edges) and len({v for e in edges for v in e}) == n
    assert got == _brute_classes(n, accept)


def test_non_isomorphic_forms_differ():
    a = Hypergraph(6, ((0, 1, 2), (3, 4, 5)))
    b = Hypergraph(6, ((0, 1, 2), (2, 3, 4)))
    assert canonical_form(a) != canonical_form(b)
    assert isomorphism(a, b) is None


def test_automorphisms_of_fano():
    group = automorphism_group(fano())
    assert len(group) == 168
    for p in random.Random(1).sample(group, 10):
        assert fano().relabel(p) == fano()


def test_components_and_union():
    a = Hypergraph(4, ((0, 1, 2),))
    b = Hypergraph(5, ((0, 1, 2), (2, 3, 4)))
    u = disjoint_union(a, b)
    assert u.n == 9 and u.m == 3
    assert components(u) == [[0, 1, 2], [3], [4, 5, 6, 7, 8]]
    assert not is_connected(u)
    assert is_connected(b)


def test_induced_and_clusters():
    h = Hypergraph(6, ((0, 1, 2), (0, 1, 3), (1, 3, 4), (2, 4, 5)))
    sub, labels = induced(h, [0, 1, 2, 3])
    assert labels == [0, 1, 2, 3] and sub.edges == ((0, 1, 2), (0, 1, 3))
    assert count_induced(h, range(6)) == 4
    assert two_sharing_pair(h) == ((0, 1, 2), (0, 1, 3))
    (cluster,) = intersection_clusters(h)
    assert cluster.support == (0, 1, 2, 3, 4)
