"""Constructive metrics for sparse hypergraphs.

``rho0_construct`` gives each edge a label vertex; pairs inside an edge get
distance 1 when they contain the label and 2 otherwise, every other pair gets
3/2. ``realize_62sparse`` applies it per component, handling components of at
most five vertices by a search over the alphabet ``{1, 3/2, 2}`` and gluing
components with :func:`~metricity.metric.disjoint_union_metric`.
``realize_f0`` carves dense cores out of an f0-sparse hypergraph, realises each
core on its own and lays the rho0 metric of the remainder around them.

Every metric returned here has been checked to realise its input exactly.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterator, Mapping, Sequence

from metricity.hypergraph import (
    Hypergraph,
    Triple,
    components,
    f_sparsity_witness,
    induced,
    induced_edges,
    is_kl_sparse,
    kl_sparsity_witness,
    shares_at_most_one,
    two_sharing_pair,
)
from metricity.metric import FiniteMetric, embed, equilateral, realizes
from metricity.oracle import (
    ALPHABET_MAX_N,
    HALF_STEP_ALPHABET,
    decide_metric,
    iter_alphabet_metrics,
)

log = logging.getLogger(__name__)

ONE, THREE_HALVES, TWO = HALF_STEP_ALPHABET
SMALL_CASE_MAX_N = 5

EdgeLabeling = dict[Triple, int]


class PreconditionError(ValueError):
    """Input outside the hypothesis of a construction; ``witness`` shows why."""

    def __init__(self, message: str, witness: object = None) -> None:
        super().__init__(message)
        self.witness = witness


class NotSparseError(PreconditionError):
    pass


class SharedPairError(PreconditionError):
    pass


class VerificationError(RuntimeError):
    """A construction produced a metric that does not realise its input."""


class NoDecompositionError(RuntimeError):
    def __init__(self, message: str, diagnostics: list[str]) -> None:
        super().__init__(message)
        self.diagnostics = diagnostics


def auto_labeling(h: Hypergraph) -> EdgeLabeling:
    """Label each edge with its smallest vertex."""
    return {e: e[0] for e in h.edges}


def _rho0_pairs(h: Hypergraph, labeling: Mapping[Triple, int]) -> dict[tuple[int, int], Fraction]:
    dist: dict[tuple[int, int], Fraction] = {}
    for e in h.edges:
        x = labeling[e]
        if x not in e:
            raise ValueError(f"label {x} is not a vertex of edge {e}")
        for a, b in combinations(e, 2):
            dist[(a, b)] = ONE if x in (a, b) else TWO
    return dist


def _fill(n: int, dist: Mapping[tuple[int, int], Fraction]) -> FiniteMetric:
    return FiniteMetric.from_pairs(
        n, {p: dist.get(p, THREE_HALVES) for p in combinations(range(n), 2)})


def rho0_construct(h: Hypergraph, labeling: Mapping[Triple, int] | None = None) -> FiniteMetric:
    """The three-valued metric for a (6,2)-sparse hypergraph whose edges pairwise share
    at most one vertex. ``labeling`` defaults to :func:`auto_labeling`."""
    pair = two_sharing_pair(h)
    if pair is not None:
        raise SharedPairError(f"edges {pair[0]} and {pair[1]} share two vertices", pair)
    witness = kl_sparsity_witness(h, 6, 2)
    if witness is not None:
        raise NotSparseError(f"vertex set {witness} induces more than 2 edges", witness)
    metric = _fill(h.n, _rho0_pairs(h, labeling or auto_labeling(h)))
    if not realizes(metric, h):
        raise VerificationError("rho0 metric does not realise the hypergraph")
    return metric


def rho0_preference(h: Hypergraph):
    """Per-pair value order echoing rho0: edge pairs try 1, 2, 3/2; other pairs 3/2 first."""
    covered = {p for e in h.edges for p in combinations(e, 2)}

    def order(p: tuple[int, int]) -> tuple[Fraction, ...]:
        return (ONE, TWO, THREE_HALVES) if p in covered else (THREE_HALVES, ONE, TWO)
    return order


def small_case(h: Hypergraph) -> FiniteMetric:
    """Realise a small hypergraph over ``{1, 3/2, 2}``; edgeless ones get the unit equilateral."""
    if not h.edges:
        return equilateral(h.n, 1)
    metric = next(iter_alphabet_metrics(h, HALF_STEP_ALPHABET, value_order=rho0_preference(h)),
                  None)
    if metric is None:
        raise VerificationError(f"no {{1, 3/2, 2}} metric for small hypergraph {h.edges}")
    return metric


def realize_62sparse(h: Hypergraph) -> FiniteMetric:
    """A metric realising a (6,2)-sparse hypergraph.

    Hypergraphs on at most five vertices are searched directly. Otherwise each
    component is handled separately: components of six or more vertices must
    have pairwise edge intersections of at most one vertex and get rho0, smaller
    ones are searched. Components are glued by repeated disjoint unions.
    """
    witness = kl_sparsity_witness(h, 6, 2)
    if witness is not None:
        raise NotSparseError(f"vertex set {witness} induces more than 2 edges", witness)
    if h.n <= SMALL_CASE_MAX_N:
        metric = small_case(h)
    else:
        parts = []
        for comp in components(h):
            sub, labels = induced(h, comp)
            if len(comp) > SMALL_CASE_MAX_N:
                if not shares_at_most_one(sub):
                    raise VerificationError(
                        f"connected (6,2)-sparse component {comp} has edges sharing two vertices")
                parts.append((labels, rho0_construct(sub)))
            else:
                parts.append((labels, small_case(sub)))
        metric = embed(parts, h.n)
    if not realizes(metric, h):
        raise VerificationError("component metric does not realise the hypergraph")
    return metric


# --- f0-sparse hypergraphs -------------------------------------------------


@dataclass(frozen=True)
class Core:
    support: tuple[int, ...]
    edges: tuple[Triple, ...]


@dataclass(frozen=True)
class Decomposition:
    """Cores carved out of a hypergraph and what is left.

    ``stitching`` records whether the two extra conditions of
    :func:`structure_problems` hold; without them only the base claims do and
    the stitched metric is more likely to need a different labeling or core metric.
    """

    cores: tuple[Core, ...]
    remainder: Hypergraph
    stitching: bool = True

    @property
    def removed(self) -> int:
        return sum(len(c.edges) for c in self.cores)


def structure_problems(h: Hypergraph, cores: Sequence[Core], remainder: Hypergraph,
                       *, stitching: bool = True) -> list[str]:
    """Every violated structural claim for a set of cores; empty when all hold.

    The base claims: at most two cores, cores meet in at most one vertex, the
    remainder is (6,2)-sparse with pairwise edge intersections of at most one
    vertex, and with two intersecting cores each remainder edge meets their
    union in at most one vertex. With ``stitching`` two more are checked:
    each remainder edge meets each core in at most one vertex, and no vertex
    outside a core is joined by remainder edges to two different core vertices.
    """
    problems = []
    if len(cores) > 2:
        problems.append(f"{len(cores)} cores, at most 2 allowed")
    for c1, c2 in combinations(cores, 2):
        common = set(c1.support) & set(c2.support)
        if len(common) > 1:
            problems.append(f"cores {c1.support} and {c2.support} share {sorted(common)}")
    witness = kl_sparsity_witness(remainder, 6, 2)
    if witness is not None:
        problems.append(f"remainder not (6,2)-sparse: {witness} induces more than 2 edges")
    pair = two_sharing_pair(remainder)
    if pair is not None:
        problems.append(f"remainder edges {pair[0]} and {pair[1]} share two vertices")
    if len(cores) == 2 and set(cores[0].support) & set(cores[1].support):
        union = set(cores[0].support) | set(cores[1].support)
        for e in remainder.edges:
            if len(union & set(e)) > 1:
                problems.append(f"remainder edge {e} meets the intersecting cores twice")
    if stitching:
        for core in cores:
            xs = set(core.support)
            for e in remainder.edges:
                if len(xs & set(e)) > 1:
                    problems.append(f"remainder edge {e} meets core {core.support} twice")
            reach: dict[int, set[int]] = {}
            for e in remainder.edges:
                inside = xs & set(e)
                for z in set(e) - xs:
                    reach.setdefault(z, set()).update(inside)
            for z, hit in sorted(reach.items()):
                if len(hit) > 1:
                    problems.append(
                        f"vertex {z} is joined by remainder edges to core vertices {sorted(hit)}")
    return problems


def _bad_groups(h: Hypergraph) -> list[frozenset[int]]:
    """Supports of the minimal obstructions: two edges sharing two vertices, or three
    edges on at most six vertices."""
    out = set()
    for e, f in combinations(h.edges, 2):
        if len(set(e) & set(f)) >= 2:
            out.add(frozenset(e) | frozenset(f))
    for group in combinations(h.edges, 3):
        support = frozenset(v for e in group for v in e)
        if len(support) <= 6:
            out.add(support)
    return sorted(out, key=lambda s: (len(s), sorted(s)))


def candidate_supports(h: Hypergraph, max_subsets: int = 1 << 12) -> list[tuple[int, ...]]:
    """Vertex sets worth carving out, smallest first.

    When there are few edges (f0-sparsity allows at most ``ceil(n/2)``) these
    are the supports of all edge subsets containing a minimal obstruction.
    Otherwise they are obstruction supports closed under absorbing edges or
    other candidates that meet them in two or more vertices.
    """
    seeds = _bad_groups(h)
    if not seeds:
        return []
    edges = [frozenset(e) for e in h.edges]
    pool: set[frozenset[int]] = set()
    if 1 << len(edges) <= max_subsets:
        for mask in range(1, 1 << len(edges)):
            support = frozenset().union(*(e for i, e in enumerate(edges) if mask >> i & 1))
            if any(s <= support for s in seeds):
                pool.add(support)
    else:
        pool = set(seeds)
        frontier = list(seeds)
        while frontier and len(pool) < 400:
            nxt = []
            for xs in frontier:
                grown = [xs | e for e in edges if len(xs & e) >= 2 and not e <= xs]
                grown += [xs | ys for ys in seeds if len(xs & ys) >= 2 and not ys <= xs]
                for g in grown:
                    if g not in pool:
                        pool.add(g)
                        nxt.append(g)
            frontier = nxt
    return sorted((tuple(sorted(s)) for s in pool), key=lambda s: (len(s), s))


def iter_decompositions(h: Hypergraph, *, stitching: bool = True) -> Iterator[Decomposition]:
    """Decompositions passing :func:`structure_problems`, fewest removed edges first,
    then smallest total support, then lexicographic."""
    supports = candidate_supports(h)
    cores = {s: Core(s, induced_edges(h, s)) for s in supports}
    options: list[tuple[Core, ...]] = [()]
    options += [(cores[s],) for s in supports]
    for s1, s2 in combinations(supports, 2):
        if len(set(s1) & set(s2)) <= 1:
            options.append((cores[s1], cores[s2]))

    def key(opt: tuple[Core, ...]):
        removed = len({e for c in opt for e in c.edges})
        return (removed, sum(len(c.support) for c in opt), [c.support for c in opt])
    options.sort(key=key)
    for opt in options:
        gone = {e for c in opt for e in c.edges}
        remainder = Hypergraph(h.n, tuple(e for e in h.edges if e not in gone))
        if not structure_problems(h, opt, remainder, stitching=stitching):
            yield Decomposition(opt, remainder, stitching)


def decompose_f0(h: Hypergraph) -> Decomposition:
    """Cores ``X_i`` whose induced edges, once removed, leave a remainder suitable for rho0.

    The first decomposition satisfying every claim including the stitching
    conditions is returned; failing that, the first satisfying the base claims.
    Raises :class:`NotSparseError` for inputs that are not f0-sparse and
    :class:`NoDecompositionError` (with the problems of the smallest candidates)
    when not even the base claims can be met.
    """
    witness = f_sparsity_witness(h)
    if witness is not None:
        raise NotSparseError(f"vertex set {witness} induces too many edges for f0", witness)
    for stitching in (True, False):
        for dec in iter_decompositions(h, stitching=stitching):
            return dec
    diagnostics = []
    for s in candidate_supports(h)[:10]:
        core = Core(s, induced_edges(h, s))
        rest = Hypergraph(h.n, tuple(e for e in h.edges if e not in set(core.edges)))
        diagnostics.append(f"{s}: " + "; ".join(structure_problems(h, [core], rest)))
    raise NoDecompositionError("no decomposition satisfies the structural claims", diagnostics)


def _core_metrics(h: Hypergraph, core: Core, catalog, limit: int) -> Iterator[dict]:
    """Candidate core metrics as ``{(u, v): distance}`` in original labels."""
    sub, labels = induced(h, core.support)
    seen = []
    if catalog is not None:
        hit = catalog.match(sub)
        if hit is not None:
            seen.append(hit)
    count = 0
    for m in seen:
        yield {(labels[i], labels[j]): m.d[i][j] for i, j in combinations(range(sub.n), 2)}
    if sub.n > ALPHABET_MAX_N:
        return
    for m in iter_alphabet_metrics(sub, HALF_STEP_ALPHABET, value_order=rho0_preference(sub)):
        if count >= limit:
            return
        if m in seen:
            continue
        count += 1
        yield {(labels[i], labels[j]): m.d[i][j] for i, j in combinations(range(sub.n), 2)}


def stitch(h: Hypergraph, dec: Decomposition, core_pairs: Sequence[Mapping],
           max_labelings: int = 100_000) -> FiniteMetric | None:
    """Core distances inside each core, rho0 of the remainder elsewhere.

    Labels are searched (smallest vertex first) until every triple is collinear
    exactly when it is an edge; ``None`` if no labeling works.
    """
    n = h.n
    fixed: dict[tuple[int, int], Fraction] = {}
    for pairs in core_pairs:
        fixed.update(pairs)
    rem = list(dec.remainder.edges)
    owner: dict[tuple[int, int], int] = {}
    for j, e in enumerate(rem):
        for p in combinations(e, 2):
            if p not in fixed:
                owner[p] = j
    dist = {p: fixed.get(p, THREE_HALVES) for p in combinations(range(n), 2)}
    is_decided = {p: p not in owner for p in combinations(range(n), 2)}
    edges = h.edge_set
    tried = 0

    def d(a: int, b: int) -> Fraction:
        return dist[(a, b) if a < b else (b, a)]

    def ok_triple(t: tuple[int, int, int]) -> bool:
        a, b, c = t
        x, y, z = d(a, b), d(b, c), d(a, c)
        collinear = z == x + y or x == y + z or y == x + z
        return collinear == (t in edges)

    def settled(t: tuple[int, int, int]) -> bool:
        a, b, c = t
        return is_decided[(a, b)] and is_decided[(b, c)] and is_decided[(a, c)]

    static = [t for t in combinations(range(n), 3) if settled(t)]
    if not all(ok_triple(t) for t in static):
        return None

    def assign(j: int) -> bool:
        nonlocal tried
        if j == len(rem):
            return True
        e = rem[j]
        pairs = [p for p in combinations(e, 2) if owner.get(p) == j]
        for label in e:
            tried += 1
            if tried > max_labelings:
                return False
            for p in pairs:
                dist[p] = ONE if label in p else TWO
                is_decided[p] = True
            touched = {tuple(sorted((p[0], p[1], w))) for p in pairs
                       for w in range(n) if w not in p}
            if all(ok_triple(t) for t in touched if settled(t)) and assign(j + 1):
                return True
            for p in pairs:
                is_decided[p] = False
        return False

    if not assign(0):
        return None
    metric = FiniteMetric.from_pairs(n, dist)
    return metric if realizes(metric, h) else None


@dataclass
class Realization:
    metric: FiniteMetric
    method: str
    decomposition: Decomposition | None = None
    fallback: bool = False
    notes: list[str] = field(default_factory=list)


def realize_f0_report(h: Hypergraph, *, catalog="default", max_decompositions: int = 50,
                      core_alternatives: int = 20, allow_fallback: bool = True,
                      oracle_kwargs: dict | None = None) -> Realization:
    """Realise an f0-sparse hypergraph, recording how.

    With no core needed this is :func:`realize_62sparse`. Otherwise decompositions
    are tried in order, each core realised by catalog lookup or alphabet
    search, and the result verified. ``catalog`` is a
    :class:`~metricity.catalog.Catalog`, ``"default"`` for the packaged one, or
    ``None`` to search every core directly. If nothing verifies, the complete oracle
    decides (``fallback=True``); its failure raises :class:`VerificationError`.
    """
    witness = f_sparsity_witness(h)
    if witness is not None:
        raise NotSparseError(f"vertex set {witness} induces too many edges for f0", witness)
    if catalog == "default":
        from metricity.catalog import default_catalog

        catalog = default_catalog()
    tried = 0
    first: Decomposition | None = None
    seen = set()
    for dec in _all_decompositions(h):
        if not dec.cores:
            return Realization(realize_62sparse(h), "62sparse", dec)
        key = tuple(c.support for c in dec.cores)
        if key in seen:
            continue
        seen.add(key)
        first = first or dec
        tried += 1
        metric = _stitch_any(h, dec, catalog, core_alternatives)
        if metric is not None:
            return Realization(metric, "stitched", dec)
        if tried >= max_decompositions:
            break
    note = ("no decomposition" if not tried else
            f"no stitched metric verified over {tried} decompositions")
    if not allow_fallback:
        raise VerificationError(note)
    log.warning("f0 construction fell back to the oracle for %s: %s", h.edges, note)
    verdict = decide_metric(h, **(oracle_kwargs or {}))
    if verdict.kind == "metric" and verdict.witness is not None:
        return Realization(verdict.witness, "oracle", first, fallback=True, notes=[note])
    if verdict.kind == "budget":
        raise VerificationError(f"{note}; oracle budget exceeded")
    raise VerificationError(f"{note}; oracle reports nonmetric, so this f0-sparse input has no realisation")


def _all_decompositions(h: Hypergraph) -> Iterator[Decomposition]:
    yield from iter_decompositions(h, stitching=True)
    yield from iter_decompositions(h, stitching=False)


class _Lazy:
    """Cached view of an iterator, so nested loops can replay it."""

    def __init__(self, items: Iterator) -> None:
        self._items = items
        self._seen: list = []

    def __iter__(self):
        i = 0
        while True:
            if i < len(self._seen):
                yield self._seen[i]
            else:
                item = next(self._items, None)
                if item is None:
                    return
                self._seen.append(item)
                yield item
            i += 1


def _stitch_any(h: Hypergraph, dec: Decomposition, catalog, alternatives: int
                ) -> FiniteMetric | None:
    options = [_Lazy(_core_metrics(h, core, catalog, alternatives)) for core in dec.cores]

    def walk(i: int, chosen: list) -> FiniteMetric | None:
        if i == len(options):
            return stitch(h, dec, chosen)
        for pairs in options[i]:
            found = walk(i + 1, chosen + [pairs])
            if found is not None:
                return found
        return None
    return walk(0, [])


def realize_f0(h: Hypergraph, **kwargs) -> FiniteMetric:
    """A metric realising an f0-sparse hypergraph (see :func:`realize_f0_report`)."""
    return realize_f0_report(h, **kwargs).metric


def realize(h: Hypergraph, mode: str = "auto", **kwargs) -> Realization:
    """Dispatch for the CLI: ``"62"``, ``"f0"`` or ``"auto"`` (62 if (6,2)-sparse, else f0)."""
    if mode == "62" or (mode == "auto" and is_kl_sparse(h, 6, 2)):
        return Realization(realize_62sparse(h), "62sparse")
    if mode in ("f0", "auto"):
        return realize_f0_report(h, **kwargs)
    raise ValueError(f"unknown mode {mode!r}")
