import json
import random
from itertools import combinations

import pytest

from _brute import collinear_triples, is_metric_matrix, kl_sparse
from metricity.catalog import (
    EXPECTED_VERTEX_COUNTS,
    Catalog,
    CatalogError,
    closure_discrepancies,
    default_catalog,
    enumerate_f0_cores,
    shape_discrepancies,
)
from metricity.hypergraph import canonical_form


def _obstructed(n, edges):
    shared = any(len(set(e) & set(f)) >= 2 for e, f in combinations(edges, 2))
    return shared or not kl_sparse(n, edges, 6, 2)


@pytest.mark.parametrize("convention", ["minimal", "decomposition"])
def test_packaged_entries_are_valid(convention):
    cat = default_catalog(convention)
    assert len(cat) > 0
    forms = set()
    for e in cat.entries:
        n, edges, d = e.core.n, list(e.core.edges), e.metric.d
        assert is_metric_matrix(n, d) and collinear_triples(n, d) == edges
        assert _obstructed(n, edges)
        forms.add(canonical_form(e.core))
    assert len(forms) == len(cat)


def test_minimal_entries_are_minimal():
    for e in default_catalog("minimal").entries:
        edges = list(e.core.edges)
        for drop in edges:
            assert not _obstructed(e.core.n, [f for f in edges if f != drop])


def test_minimal_build_is_deterministic_and_matches_package():
    built = Catalog(enumerate_f0_cores(7, "minimal"))
    packaged = default_catalog("minimal")
    assert built.to_json() == [e for e in packaged.to_json() if e["n"] <= 7]


def test_decomposition_catalog_is_closed():
    assert closure_discrepancies(default_catalog("decomposition"), max_n=8) == []


def test_match_core_transports_metric():
    rnd = random.Random(7)
    cat = default_catalog("decomposition")
    for entry in cat.entries:
        perm = list(range(entry.core.n))
        rnd.shuffle(perm)
        g = entry.core.relabel(perm)
        hit = cat.match_core(g)
        assert hit is not None and hit.name == entry.name
        assert collinear_triples(g.n, hit.metric.d) == list(g.edges)


def test_shape_discrepancies():
    assert shape_discrepancies([], EXPECTED_VERTEX_COUNTS)[0] == "expected 8 classes, found 0"
    minimal = default_catalog("minimal").entries
    assert shape_discrepancies(minimal)


def test_loads_rejects_bad_metric():
    data = default_catalog("minimal").to_json()
    data[0]["metric"]["0 1"] = "7"
    with pytest.raises(CatalogError):
        Catalog.loads(json.dumps(data))
    with pytest.raises(CatalogError):
        Catalog.loads("{}")


def test_build_cap():
    with pytest.raises(CatalogError):
        enumerate_f0_cores(11)
    with pytest.raises(ValueError):
        enumerate_f0_cores(5, "other")
