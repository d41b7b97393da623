"""Named and random test instances, plus exhaustive enumeration up to isomorphism."""

from __future__ import annotations

import random
from itertools import combinations
from typing import Callable, Iterable, Iterator

from metricity.hypergraph import (
    Hypergraph,
    Triple,
    canonical_labeling,
    is_f_sparse,
    is_kl_sparse,
)

FANO_LINES: tuple[Triple, ...] = (
    (0, 1, 2), (0, 3, 4), (0, 5, 6), (1, 3, 5), (1, 4, 6), (2, 3, 6), (2, 4, 5),
)


def fano() -> Hypergraph:
    return Hypergraph(7, FANO_LINES)


def affine_plane_triples() -> Hypergraph:
    """Lines of AG(2,3): point ``3*x + y`` for ``(x, y)`` in ``Z_3^2``."""
    lines = set()
    for p, q in combinations(range(9), 2):
        (x1, y1), (x2, y2) = divmod(p, 3), divmod(q, 3)
        r = 3 * ((-x1 - x2) % 3) + (-y1 - y2) % 3
        lines.add(tuple(sorted((p, q, r))))
    return Hypergraph(9, tuple(lines))


def steiner_triple_system(order: int) -> Hypergraph:
    if order == 7:
        return fano()
    if order == 9:
        return affine_plane_triples()
    raise ValueError(f"unsupported Steiner triple system order {order}; use 7 or 9")


def complete(n: int) -> Hypergraph:
    return Hypergraph(n, tuple(combinations(range(n), 3)))


def complete_minus(n: int, drop: Iterable[Iterable[int]]) -> Hypergraph:
    gone = set()
    for t in drop:
        t = tuple(sorted(t))
        if len(t) != 3 or len(set(t)) != 3 or not all(0 <= v < n for v in t):
            raise ValueError(f"invalid triple to drop: {t}")
        gone.add(t)
    return Hypergraph(n, tuple(e for e in combinations(range(n), 3) if e not in gone))


def _random_sparse(n: int, target_m: int | None, seed: int,
                   accept: Callable[[Hypergraph], bool]) -> Hypergraph:
    if n < 3:
        raise ValueError("need n >= 3")
    rng = random.Random(seed)
    candidates = list(combinations(range(n), 3))
    rng.shuffle(candidates)
    edges: list[Triple] = []
    for t in candidates:
        if target_m is not None and len(edges) >= target_m:
            break
        trial = Hypergraph(n, tuple(edges) + (t,))
        if accept(trial):
            edges.append(t)
    return Hypergraph(n, tuple(edges))


def random_62_sparse(n: int, target_m: int, seed: int = 0) -> Hypergraph:
    """Add shuffled triples while the result stays (6,2)-sparse, up to ``target_m`` edges."""
    return _random_sparse(n, target_m, seed, lambda h: is_kl_sparse(h, 6, 2))


def random_f0_sparse(n: int, seed: int = 0, target_m: int | None = None) -> Hypergraph:
    """Add shuffled triples while the result stays f0-sparse."""
    return _random_sparse(n, target_m, seed, is_f_sparse)


def enumerate_hypergraphs(n: int, accept: Callable[[Hypergraph], bool],
                          max_edges: int | None = None,
                          cover: bool = False) -> Iterator[Hypergraph]:
    """All hypergraphs on ``n`` vertices accepted by a hereditary predicate, one per class.

    ``accept`` must be closed under edge deletion, so growth stops at the
    first rejection. Output is in canonical form, ordered by edge count and
    then canonical string. With ``cover`` only hypergraphs without isolated
    vertices are yielded (the search itself still passes through the rest).
    """
    triples = list(combinations(range(n), 3))
    empty = Hypergraph(n, ())
    if not accept(empty):
        return
    level = {canonical_labeling(empty)[0]: empty}
    m = 0
    while level:
        for form in sorted(level):
            g = level[form]
            if not cover or len(g.support()) == n:
                yield g
        if max_edges is not None and m >= max_edges:
            return
        nxt: dict[bytes, Hypergraph] = {}
        rejected: set[bytes] = set()
        for g in level.values():
            present = g.edge_set
            for t in triples:
                if t in present:
                    continue
                trial = Hypergraph(n, g.edges + (t,))
                form, perm = canonical_labeling(trial)
                if form in nxt or form in rejected:
                    continue
                if accept(trial):
                    nxt[form] = trial.relabel(perm)
                else:
                    rejected.add(form)
        level = nxt
        m += 1
