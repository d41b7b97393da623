"""3-uniform hypergraphs on dense vertex ids ``0 .. n-1``.

Edges are stored as ascending triples. Everything here is a pure function of
its inputs; :class:`Hypergraph` is immutable after construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Callable, Iterable, Sequence

Triple = tuple[int, int, int]

CANONICAL_MAX_N = 12


@dataclass(frozen=True)
class Hypergraph:
    n: int
    edges: tuple[Triple, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", tuple(sorted(tuple(e) for e in self.edges)))

    @classmethod
    def of(cls, n: int, edges: Iterable[Sequence[int]]) -> "Hypergraph":
        """Build a hypergraph, sorting each triple; raise ``ValueError`` if invalid."""
        h = cls(n, tuple(tuple(sorted(e)) for e in edges))
        problem = validate(h)
        if problem is not None:
            raise ValueError(problem)
        return h

    @cached_property
    def edge_set(self) -> frozenset[Triple]:
        return frozenset(self.edges)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        return tuple((1 << a) | (1 << b) | (1 << c) for a, b, c in self.edges)

    @property
    def m(self) -> int:
        return len(self.edges)

    def __contains__(self, triple: object) -> bool:
        if not isinstance(triple, tuple) or len(triple) != 3:
            return False
        return tuple(sorted(triple)) in self.edge_set

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for e in self.edges:
            for v in e:
                deg[v] += 1
        return deg

    def support(self) -> list[int]:
        """Vertices incident to at least one edge, ascending."""
        return sorted({v for e in self.edges for v in e})

    def relabel(self, perm: Sequence[int], n: int | None = None) -> "Hypergraph":
        """Image under the vertex map ``v -> perm[v]``."""
        return Hypergraph(self.n if n is None else n,
                          tuple(tuple(sorted(perm[v] for v in e)) for e in self.edges))


def validate(h: Hypergraph) -> str | None:
    """Return ``None`` if ``h`` is well formed, else a description of the first problem."""
    if h.n < 0:
        return f"negative vertex count {h.n}"
    seen: set[Triple] = set()
    for e in h.edges:
        if len(e) != 3:
            return f"edge {e} is not a triple"
        a, b, c = e
        if not all(isinstance(v, int) and v >= 0 for v in e):
            return f"edge {e} has a non-integer or negative vertex id"
        if not a < b < c:
            return f"edge {e} does not have three distinct ascending vertices"
        if c >= h.n:
            return f"edge {e} uses vertex {c} >= n={h.n}"
        if e in seen:
            return f"duplicate edge {e}"
        seen.add(e)
    return None


def _mask(vertices: Iterable[int]) -> int:
    out = 0
    for v in vertices:
        out |= 1 << v
    return out


def _members(mask: int) -> list[int]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out


def count_induced(h: Hypergraph, vertices: Iterable[int]) -> int:
    x = _mask(vertices)
    return sum(1 for em in h.masks if em & x == em)


def _pad(h: Hypergraph, core: Sequence[int], size: int) -> tuple[int, ...]:
    chosen = set(core)
    for v in range(h.n):
        if len(chosen) >= size:
            break
        chosen.add(v)
    return tuple(sorted(chosen))


def kl_sparsity_witness(h: Hypergraph, k: int, l: int,
                        method: str = "auto") -> tuple[int, ...] | None:
    """A vertex set of size ``min(k, n)`` inducing more than ``l`` edges, or ``None``.

    With ``k > n`` the only candidate is the whole vertex set. ``method`` selects
    between scanning vertex subsets and scanning ``(l+1)``-sets of edges; both
    return a witness iff one exists, and ``"auto"`` picks the cheaper one.
    """
    if k < 3 or l < 0:
        raise ValueError(f"invalid sparsity parameters k={k}, l={l}")
    if k >= h.n:
        return tuple(range(h.n)) if h.m > l else None
    if h.m <= l:
        return None
    support = h.support()
    if method == "auto":
        by_vertices = math.comb(len(support), min(k, len(support)))
        by_edges = math.comb(h.m, l + 1)
        method = "edges" if by_edges < by_vertices else "vertices"
    if method == "vertices":
        if len(support) <= k:
            return _pad(h, support, k)
        for xs in combinations(support, k):
            x = _mask(xs)
            if sum(1 for em in h.masks if em & x == em) > l:
                return xs
        return None
    if method == "edges":
        for group in combinations(h.masks, l + 1):
            union = 0
            for em in group:
                union |= em
            if union.bit_count() <= k:
                return _pad(h, _members(union), k)
        return None
    raise ValueError(f"unknown method {method!r}")


def is_kl_sparse(h: Hypergraph, k: int, l: int) -> bool:
    """Every ``k``-subset of vertices induces at most ``l`` edges."""
    return kl_sparsity_witness(h, k, l) is None


def f0(k: int) -> int:
    """Edge budget ``ceil(k / 2)``."""
    return (k + 1) // 2


def f_sparsity_witness(h: Hypergraph,
                       f: Callable[[int], int] = f0) -> tuple[int, ...] | None:
    """A set ``X`` with ``4 <= |X| <= n`` inducing more than ``f(|X|)`` edges, or ``None``.

    ``f`` must be nondecreasing. Only subsets of edge-incident vertices are
    scanned; a subset smaller than 4 is judged at size 4 and padded.
    """
    if h.n < 4:
        return None
    support = h.support()
    index = {v: i for i, v in enumerate(support)}
    local = [(1 << index[a]) | (1 << index[b]) | (1 << index[c]) for a, b, c in h.edges]
    best: tuple[int, int] | None = None
    for x in range(1, 1 << len(support)):
        induced = 0
        for em in local:
            if em & x == em:
                induced += 1
        if induced == 0:
            continue
        size = max(x.bit_count(), 4)
        if induced > f(size):
            key = (size, x)
            if best is None or key < best:
                best = key
    if best is None:
        return None
    size, x = best
    chosen = [support[i] for i in _members(x)]
    return _pad(h, chosen, size)


def is_f_sparse(h: Hypergraph, f: Callable[[int], int] = f0) -> bool:
    """For every ``k`` in ``4..n`` each ``k``-set induces at most ``f(k)`` edges."""
    return f_sparsity_witness(h, f) is None


def induced(h: Hypergraph, xs: Iterable[int]) -> tuple[Hypergraph, list[int]]:
    """``H[X]`` relabelled onto ``0..|X|-1`` in ascending order, plus the label map.

    ``labels[i]`` is the original id of new vertex ``i``.
    """
    labels = sorted(set(xs))
    for v in labels:
        if not 0 <= v < h.n:
            raise ValueError(f"vertex {v} out of range for n={h.n}")
    pos = {v: i for i, v in enumerate(labels)}
    edges = tuple(tuple(pos[v] for v in e) for e in h.edges if all(v in pos for v in e))
    return Hypergraph(len(labels), edges), labels


def induced_edges(h: Hypergraph, xs: Iterable[int]) -> tuple[Triple, ...]:
    """The edges ``E[X]`` in original labels."""
    x = _mask(xs)
    return tuple(e for e, em in zip(h.edges, h.masks) if em & x == em)


def remove_induced(h: Hypergraph, xs: Iterable[int]) -> Hypergraph:
    """``H`` minus ``E[X]`` on the original vertex set."""
    gone = set(induced_edges(h, xs))
    return Hypergraph(h.n, tuple(e for e in h.edges if e not in gone))


class _DisjointSets:
    def __init__(self, size: int) -> None:
        self.parent = list(range(size))

    def find(self, a: int) -> int:
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def components(h: Hypergraph) -> list[list[int]]:
    """Connected components as ascending vertex lists, ordered by smallest vertex."""
    ds = _DisjointSets(h.n)
    for a, b, c in h.edges:
        ds.union(a, b)
        ds.union(a, c)
    groups: dict[int, list[int]] = {}
    for v in range(h.n):
        groups.setdefault(ds.find(v), []).append(v)
    return sorted(groups.values())


def is_connected(h: Hypergraph) -> bool:
    """True iff all edges lie in a single component (isolated vertices ignored)."""
    return sum(1 for part in components(h) if len(part) > 1) <= 1


def shares_at_most_one(h: Hypergraph) -> bool:
    return all(len(set(e) & set(f)) <= 1 for e, f in combinations(h.edges, 2))


def two_sharing_pair(h: Hypergraph) -> tuple[Triple, Triple] | None:
    for e, f in combinations(h.edges, 2):
        if len(set(e) & set(f)) >= 2:
            return e, f
    return None


@dataclass(frozen=True)
class Cluster:
    edges: tuple[Triple, ...]
    support: tuple[int, ...]


def intersection_clusters(h: Hypergraph) -> list[Cluster]:
    """Classes of edges under the transitive closure of ``|e & f| >= 2``; size >= 2 only."""
    ds = _DisjointSets(h.m)
    for i, j in combinations(range(h.m), 2):
        if len(set(h.edges[i]) & set(h.edges[j])) >= 2:
            ds.union(i, j)
    groups: dict[int, list[Triple]] = {}
    for i, e in enumerate(h.edges):
        groups.setdefault(ds.find(i), []).append(e)
    out = []
    for edges in groups.values():
        if len(edges) >= 2:
            out.append(Cluster(tuple(edges), tuple(sorted({v for e in edges for v in e}))))
    return sorted(out, key=lambda c: c.edges)


def disjoint_union(h1: Hypergraph, h2: Hypergraph) -> Hypergraph:
    """``h2`` shifted past ``h1``'s vertices."""
    shift = h1.n
    return Hypergraph(h1.n + h2.n,
                      h1.edges + tuple(tuple(v + shift for v in e) for e in h2.edges))


# --- canonical labelling ---------------------------------------------------


def _refine(h: Hypergraph, incident: list[list[tuple[int, int]]],
            cells: list[list[int]]) -> list[list[int]]:
    """Equitable refinement: split cells by the multiset of other-vertex cell pairs."""
    while True:
        cell_of = [0] * h.n
        for i, cell in enumerate(cells):
            for v in cell:
                cell_of[v] = i
        new_cells: list[list[int]] = []
        changed = False
        for cell in cells:
            if len(cell) == 1:
                new_cells.append(cell)
                continue
            sig: dict[int, tuple] = {}
            for v in cell:
                sig[v] = tuple(sorted(
                    (min(cell_of[a], cell_of[b]), max(cell_of[a], cell_of[b]))
                    for a, b in incident[v]))
            keys = sorted(set(sig.values()))
            if len(keys) == 1:
                new_cells.append(cell)
                continue
            changed = True
            for key in keys:
                new_cells.append([v for v in cell if sig[v] == key])
        cells = new_cells
        if not changed:
            return cells


def _orbit_reps(candidates: list[int], gens: list[tuple[int, ...]], n: int) -> list[int]:
    ds = _DisjointSets(n)
    for g in gens:
        for v in range(n):
            ds.union(v, g[v])
    seen: set[int] = set()
    reps = []
    for v in candidates:
        r = ds.find(v)
        if r not in seen:
            seen.add(r)
            reps.append(v)
    return reps


class _Search:
    def __init__(self, h: Hypergraph) -> None:
        self.h = h
        self.incident: list[list[tuple[int, int]]] = [[] for _ in range(h.n)]
        for a, b, c in h.edges:
            self.incident[a].append((b, c))
            self.incident[b].append((a, c))
            self.incident[c].append((a, b))
        self.best: tuple | None = None
        self.best_perm: tuple[int, ...] | None = None
        self.leaves: dict[tuple, tuple[int, ...]] = {}
        self.automorphisms: list[tuple[int, ...]] = []

    def run(self) -> None:
        cells = _refine(self.h, self.incident, [list(range(self.h.n))])
        self._descend(cells, ())

    def _leaf(self, cells: list[list[int]]) -> None:
        perm = [0] * self.h.n
        for i, cell in enumerate(cells):
            perm[cell[0]] = i
        perm_t = tuple(perm)
        cert = tuple(sorted(tuple(sorted(perm[v] for v in e)) for e in self.h.edges))
        seen = self.leaves.get(cert)
        if seen is not None:
            # seen^-1 then perm maps the graph to itself
            inv = [0] * self.h.n
            for v, p in enumerate(seen):
                inv[p] = v
            self.automorphisms.append(tuple(inv[perm_t[v]] for v in range(self.h.n)))
            return
        self.leaves[cert] = perm_t
        if self.best is None or cert < self.best:
            self.best = cert
            self.best_perm = perm_t

    def _descend(self, cells: list[list[int]], path: tuple[int, ...]) -> None:
        target = next((i for i, c in enumerate(cells) if len(c) > 1), None)
        if target is None:
            self._leaf(cells)
            return
        explored: list[int] = []
        for v in cells[target]:
            fixing = [g for g in self.automorphisms if all(g[p] == p for p in path)]
            if explored and v not in _orbit_reps(explored + [v], fixing, self.h.n):
                continue
            explored.append(v)
            rest = [u for u in cells[target] if u != v]
            child = cells[:target] + [[v], rest] + cells[target + 1:]
            self._descend(_refine(self.h, self.incident, child), path + (v,))


def canonical_labeling(h: Hypergraph) -> tuple[bytes, tuple[int, ...]]:
    """Canonical form and a map ``perm`` with ``h.relabel(perm)`` equal to the canonical graph.

    Individualisation-refinement with orbit pruning by automorphisms found on
    the way. Limited to ``n <= 12``.
    """
    if h.n > CANONICAL_MAX_N:
        raise ValueError(f"canonical form supports n <= {CANONICAL_MAX_N}, got n={h.n}")
    if h.n == 0:
        return b"0:", ()
    search = _Search(h)
    search.run()
    assert search.best is not None and search.best_perm is not None
    return _encode(h.n, search.best), search.best_perm


def _encode(n: int, edges: Iterable[Triple]) -> bytes:
    return (f"{n}:" + ",".join(f"{a}.{b}.{c}" for a, b, c in edges)).encode()


def canonical_form(h: Hypergraph) -> bytes:
    """Byte string equal for two hypergraphs iff they are isomorphic."""
    return canonical_labeling(h)[0]


def canonical_graph(h: Hypergraph) -> Hypergraph:
    _, perm = canonical_labeling(h)
    return h.relabel(perm)


def decode_canonical(form: bytes) -> Hypergraph:
    head, _, body = form.decode().partition(":")
    edges = [tuple(int(t) for t in item.split(".")) for item in body.split(",") if item]
    return Hypergraph(int(head), tuple(edges))


def isomorphism(g: Hypergraph, h: Hypergraph) -> tuple[int, ...] | None:
    """A vertex map ``phi`` with ``g.relabel(phi) == h``, or ``None``."""
    if g.n != h.n or g.m != h.m:
        return None
    fg, pg = canonical_labeling(g)
    fh, ph = canonical_labeling(h)
    if fg != fh:
        return None
    inv_h = [0] * h.n
    for v, p in enumerate(ph):
        inv_h[p] = v
    return tuple(inv_h[pg[v]] for v in range(g.n))


def automorphism_generators(h: Hypergraph) -> list[tuple[int, ...]]:
    """Generators of the automorphism group (empty list for the trivial group)."""
    if h.n > CANONICAL_MAX_N:
        raise ValueError(f"automorphism search supports n <= {CANONICAL_MAX_N}")
    if h.n == 0:
        return []
    search = _Search(h)
    search.run()
    ident = tuple(range(h.n))
    return [g for g in search.automorphisms if g != ident]


def automorphism_group(h: Hypergraph, limit: int = 100_000) -> list[tuple[int, ...]] | None:
    """All automorphisms by closure of the generators; ``None`` if more than ``limit``."""
    gens = automorphism_generators(h)
    ident = tuple(range(h.n))
    group = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(g[p[v]] for v in range(h.n))
                if q not in group:
                    group.add(q)
                    nxt.append(q)
                    if len(group) > limit:
                        return None
        frontier = nxt
    return sorted(group)
