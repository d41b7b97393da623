"""Catalog of dense cores: small f0-sparse hypergraphs that must be carved out
before the rho0 construction applies, each with a metric over ``{1, 3/2, 2}``.

Two conventions are supported. ``"minimal"`` keeps the covering f0-sparse
hypergraphs that contain an obstruction (two edges sharing two vertices, or
three edges inside six vertices) but lose it when any edge is deleted.
``"decomposition"`` keeps every core that :func:`~metricity.realizer.decompose_f0`
carves out of a covering f0-sparse hypergraph. Entries are named by vertex
count, with an index when several classes share a count.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

from metricity.generators import enumerate_hypergraphs
from metricity.hypergraph import (
    Hypergraph,
    canonical_labeling,
    decode_canonical,
    induced,
    is_f_sparse,
    kl_sparsity_witness,
    two_sharing_pair,
)
from metricity.metric import FiniteMetric, betweenness_hypergraph
from metricity.oracle import HALF_STEP_ALPHABET, alphabet_search

CATALOG_MAX_N = 10
CONVENTIONS = ("minimal", "decomposition")
# vertex counts of the eight classes the catalog is expected to contain
EXPECTED_VERTEX_COUNTS = (4, 5, 5, 5, 6, 7, 7, 9)
CATALOG_FILES = {"minimal": "catalog.json", "decomposition": "catalog-decomposition.json"}
BUILD_MAX_N = 9


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    core: Hypergraph
    metric: FiniteMetric

    @property
    def canonical_form(self) -> str:
        return canonical_labeling(self.core)[0].decode()

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "n": self.core.n,
            "edges": [list(e) for e in self.core.edges],
            "metric": {f"{i} {j}": str(d) for (i, j), d in self.metric.pairs().items()},
            "canonical_form": self.canonical_form,
        }

    @classmethod
    def from_json(cls, data: dict) -> "CatalogEntry":
        core = Hypergraph.of(int(data["n"]), [tuple(e) for e in data["edges"]])
        dist = {}
        for key, value in data["metric"].items():
            i, j = (int(t) for t in key.split())
            dist[(i, j)] = Fraction(value)
        entry = cls(str(data["name"]), core, FiniteMetric.from_pairs(core.n, dist))
        problem = entry_problem(entry)
        if problem is not None:
            raise CatalogError(f"catalog entry {entry.name}: {problem}")
        return entry


def is_obstructed(h: Hypergraph) -> bool:
    """True if ``h`` has two edges sharing two vertices or six vertices spanning three edges."""
    return two_sharing_pair(h) is not None or kl_sparsity_witness(h, 6, 2) is not None


def is_minimal_obstruction(h: Hypergraph) -> bool:
    if not is_obstructed(h):
        return False
    return all(not is_obstructed(Hypergraph(h.n, tuple(f for f in h.edges if f != e)))
               for e in h.edges)


def entry_problem(entry: CatalogEntry) -> str | None:
    """``None`` if the entry satisfies every catalog invariant, else the first violation."""
    core, metric = entry.core, entry.metric
    if canonical_labeling(core)[1] != tuple(range(core.n)):
        return "core is not in canonical form"
    if not is_f_sparse(core):
        return "core is not f0-sparse"
    if not is_obstructed(core):
        return "core has no obstruction, so it never needs carving out"
    if not metric.values() <= set(HALF_STEP_ALPHABET):
        return "metric uses distances outside {1, 3/2, 2}"
    try:
        extracted = betweenness_hypergraph(metric)
    except ValueError as err:
        return str(err)
    if extracted != core:
        return "metric does not realise the core"
    return None


def _core_classes(max_n: int, convention: str) -> list[Hypergraph]:
    from metricity.realizer import decompose_f0

    forms: dict[bytes, Hypergraph] = {}
    for n in range(4, max_n + 1):
        for g in enumerate_hypergraphs(n, is_f_sparse, cover=True):
            if convention == "minimal":
                if is_minimal_obstruction(g):
                    forms.setdefault(canonical_labeling(g)[0], g)
                continue
            if not is_obstructed(g):
                continue
            for core in decompose_f0(g).cores:
                sub, _ = induced(g, core.support)
                form, perm = canonical_labeling(sub)
                forms.setdefault(form, sub.relabel(perm))
    ordered = sorted(forms, key=lambda f: (int(f.split(b":")[0]), f))
    return [decode_canonical(f) for f in ordered]


def _names(cores: Sequence[Hypergraph]) -> list[str]:
    counts = Counter(c.n for c in cores)
    seen: Counter[int] = Counter()
    names = []
    for c in cores:
        seen[c.n] += 1
        names.append(f"H{c.n}" if counts[c.n] == 1 else f"H{c.n}_{seen[c.n]}")
    return names


def enumerate_f0_cores(max_n: int, convention: str = "minimal") -> list[CatalogEntry]:
    """Catalog entries on at most ``max_n`` vertices, ordered by vertex count then
    canonical form. Each metric is the first found by alphabet search."""
    if max_n > CATALOG_MAX_N:
        raise CatalogError(f"catalog enumeration is capped at n <= {CATALOG_MAX_N}")
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}; use one of {CONVENTIONS}")
    cores = _core_classes(max_n, convention)
    entries = []
    for name, core in zip(_names(cores), cores):
        metric = alphabet_search(core, HALF_STEP_ALPHABET)
        if metric is None:
            raise CatalogError(f"core {name} {core.edges} has no metric over {{1, 3/2, 2}}")
        entries.append(CatalogEntry(name, core, metric))
    return entries


class Catalog:
    """Lookup of cores by canonical form."""

    def __init__(self, entries: Iterable[CatalogEntry]) -> None:
        self.entries = list(entries)
        self._by_form = {e.canonical_form.encode(): e for e in self.entries}

    def __len__(self) -> int:
        return len(self.entries)

    def match_core(self, g: Hypergraph) -> CatalogEntry | None:
        """The entry isomorphic to ``g``, relabelled onto ``g``'s vertices, or ``None``."""
        if g.n > 12 or not g.edges:
            return None
        form, perm = canonical_labeling(g)
        entry = self._by_form.get(form)
        if entry is None:
            return None
        # g.relabel(perm) is the canonical core, so vertex v of g is perm[v] there
        d = entry.metric.d
        metric = FiniteMetric.from_pairs(
            g.n, {(u, v): d[perm[u]][perm[v]] for u, v in combinations(range(g.n), 2)})
        return CatalogEntry(entry.name, g, metric)

    def match(self, g: Hypergraph) -> FiniteMetric | None:
        hit = self.match_core(g)
        return None if hit is None else hit.metric

    def to_json(self) -> list[dict]:
        return [e.to_json() for e in self.entries]

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=True) + "\n"

    @classmethod
    def loads(cls, text: str) -> "Catalog":
        data = json.loads(text)
        if not isinstance(data, list):
            raise CatalogError("catalog file must hold a list of entries")
        return cls(CatalogEntry.from_json(item) for item in data)

    @classmethod
    def load(cls, path: str | Path) -> "Catalog":
        return cls.loads(Path(path).read_text())


def match_core(g: Hypergraph, catalog: Catalog | None = None) -> CatalogEntry | None:
    return (catalog or default_catalog()).match_core(g)


@lru_cache(maxsize=None)
def default_catalog(convention: str = "decomposition") -> Catalog:
    """A catalog shipped with the package, built up to nine vertices.

    The ``"decomposition"`` one contains every core the decomposition can
    produce there, so it is the one used for lookups while realising.
    """
    if convention not in CATALOG_FILES:
        raise ValueError(f"unknown convention {convention!r}; use one of {CONVENTIONS}")
    text = resources.files("metricity").joinpath("data", CATALOG_FILES[convention]).read_text()
    return Catalog.loads(text)


def shape_discrepancies(entries: Sequence[CatalogEntry],
                        expected: Sequence[int] = EXPECTED_VERTEX_COUNTS) -> list[str]:
    """Differences between the entries' vertex counts and the expected multiset."""
    got = Counter(e.core.n for e in entries)
    want = Counter(expected)
    out = []
    if len(entries) != len(expected):
        out.append(f"expected {len(expected)} classes, found {len(entries)}")
    for n in sorted(set(got) | set(want)):
        if got[n] != want[n]:
            out.append(f"{n} vertices: expected {want[n]} classes, found {got[n]}")
    return out


def closure_discrepancies(catalog: Catalog, max_n: int = 8) -> list[str]:
    """Cores produced by decompose_f0 on covering f0-sparse hypergraphs up to ``max_n``
    vertices that the catalog does not contain, one line per distinct core class."""
    from metricity.realizer import decompose_f0

    missing: dict[bytes, str] = {}
    for n in range(4, max_n + 1):
        for g in enumerate_hypergraphs(n, is_f_sparse, cover=True):
            for core in decompose_f0(g).cores:
                sub, _ = induced(g, core.support)
                if catalog.match_core(sub) is None:
                    form = canonical_labeling(sub)[0]
                    missing.setdefault(form, f"core {form.decode()} (first seen in {g.edges} "
                                              f"on {n} vertices) is not in the catalog")
    return [missing[f] for f in sorted(missing)]


def discrepancy_report(entries: Sequence[CatalogEntry], convention: str) -> dict:
    """Everything needed to inspect a shape mismatch: counts, problems and every entry."""
    return {
        "convention": convention,
        "expected_vertex_counts": list(EXPECTED_VERTEX_COUNTS),
        "found_vertex_counts": [e.core.n for e in entries],
        "problems": shape_discrepancies(entries),
        "entries": [e.to_json() for e in entries],
    }
