"""Exact metricity decisions for small hypergraphs.

A hypergraph is metric iff for some choice of middle vertex per edge the
following homogeneous system in the pair distances is feasible:

* ``d(x,z) = d(x,y) + d(y,z)`` for every edge ``{x,y,z}`` with middle ``y``;
* strict triangle inequalities in all three orientations for every non-edge;
* plain triangle inequalities for every edge, and ``d > 0``.

Because every constraint is homogeneous, strict inequalities are replaced by
a slack of at least 1. The search branches over middles edge by edge, prunes
with sign arguments on the reduced equality system, then with linear
feasibility of the partial system, and skips sibling branches that are images
of one another under automorphisms of the hypergraph. Infeasible branches
report the edges their certificate depends on; the search backjumps past
unrelated choices and remembers those sets as nogoods.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Iterator, Sequence

from metricity import lp
from metricity.hypergraph import Hypergraph, Triple, automorphism_group
from metricity.metric import FiniteMetric, betweenness_hypergraph, realizes

log = logging.getLogger(__name__)

DEFAULT_MAX_N = 9
DEFAULT_MAX_NODES = 10**7
ALPHABET_MAX_N = 10
HALF_STEP_ALPHABET = (Fraction(1), Fraction(3, 2), Fraction(2))

MiddleAssignment = dict[Triple, int]


@dataclass
class SearchStats:
    nodes: int = 0
    lp_calls: int = 0
    exact_lp_calls: int = 0
    branches_covered: int = 0
    branch_space: int = 0
    pruned: dict[str, int] = field(default_factory=dict)
    seconds: float = 0.0
    group_order: int = 1

    def to_json(self) -> dict:
        return {
            "nodes": self.nodes,
            "lp_calls": self.lp_calls,
            "exact_lp_calls": self.exact_lp_calls,
            "branches_covered": self.branches_covered,
            "branch_space": self.branch_space,
            "pruned": dict(sorted(self.pruned.items())),
            "seconds": round(self.seconds, 3),
            "automorphism_group_order": self.group_order,
        }


@dataclass
class MetricityVerdict:
    """``kind`` is ``"metric"``, ``"nonmetric"`` or ``"budget"``."""

    kind: str
    hypergraph: Hypergraph
    witness: FiniteMetric | None = None
    assignment: MiddleAssignment | None = None
    stats: SearchStats = field(default_factory=SearchStats)
    infeasible_branches: list[tuple[tuple[tuple[Triple, int], ...], str]] = field(
        default_factory=list)

    @property
    def is_metric(self) -> bool:
        return self.kind == "metric"


class OracleLimitError(ValueError):
    pass


def _pair_index(n: int) -> dict[tuple[int, int], int]:
    return {p: i for i, p in enumerate(combinations(range(n), 2))}


def _var(index: dict[tuple[int, int], int], a: int, b: int) -> int:
    return index[(a, b) if a < b else (b, a)]


def betweenness_row(index: dict[tuple[int, int], int], x: int, y: int, z: int
                    ) -> dict[int, Fraction]:
    """Coefficients of ``d(x,z) - d(x,y) - d(y,z)`` (zero iff ``y`` is between)."""
    return {_var(index, x, z): 1, _var(index, x, y): -1, _var(index, y, z): -1}


def static_system(h: Hypergraph) -> tuple[list[lp.Constraint], dict[tuple[int, int], int]]:
    """Inequalities shared by every branch: triangles, unit slack on non-edges, ``d >= 1``."""
    index = _pair_index(h.n)
    edges = h.edge_set
    rows: list[lp.Constraint] = []
    for t in combinations(range(h.n), 3):
        slack = 0 if t in edges else 1
        for mid in t:
            x, z = (v for v in t if v != mid)
            # d(x,mid) + d(mid,z) - d(x,z) >= slack
            row = {v: -c for v, c in betweenness_row(index, x, mid, z).items()}
            rows.append((row, slack))
    for i in range(len(index)):
        rows.append(({i: 1}, 1))
    return rows, index


def branch_order(h: Hypergraph) -> list[Triple]:
    """Edges by descending total vertex overlap with the other edges, ties ascending."""
    def overlap(e: Triple) -> int:
        return sum(len(set(e) & set(f)) for f in h.edges if f != e)
    return sorted(h.edges, key=lambda e: (-overlap(e), e))


class _Equalities:
    """Reduced row echelon form of the homogeneous betweenness equalities."""

    def __init__(self, pivots: dict[int, dict[int, Fraction]] | None = None) -> None:
        self.pivots = pivots or {}

    def extend(self, row: dict[int, Fraction]) -> "_Equalities | None":
        """Add ``row . d = 0``; ``None`` if it contradicts ``d > 0``."""
        reduced = dict(row)
        for p in [v for v in reduced if v in self.pivots]:
            c = reduced.pop(p)
            for v, e in self.pivots[p].items():
                reduced[v] = reduced.get(v, 0) + c * e
        reduced = {v: c for v, c in reduced.items() if c != 0}
        if not reduced:
            return self
        if all(c > 0 for c in reduced.values()) or all(c < 0 for c in reduced.values()):
            return None
        p = min(reduced)
        cp = reduced.pop(p)
        expr = {v: Fraction(-c) / cp for v, c in reduced.items()}
        pivots = {}
        for q, qexpr in self.pivots.items():
            if p in qexpr:
                c = qexpr[p]
                new = {v: e for v, e in qexpr.items() if v != p}
                for v, e in expr.items():
                    new[v] = new.get(v, 0) + c * e
                new = {v: e for v, e in new.items() if e != 0}
                if not new or all(e <= 0 for e in new.values()):
                    return None
                pivots[q] = new
            else:
                pivots[q] = qexpr
        if not expr or all(e <= 0 for e in expr.values()):
            return None
        pivots[p] = expr
        return _Equalities(pivots)


class _Symmetry:
    def __init__(self, h: Hypergraph, order: list[Triple], limit: int) -> None:
        group = automorphism_group(h, limit=limit) if h.m else None
        self.group: list[tuple[int, ...]] = []
        self.edge_maps: list[list[int]] = []
        if group is None:
            return
        pos = {e: i for i, e in enumerate(order)}
        ident = tuple(range(h.n))
        for g in group:
            if g == ident:
                continue
            self.group.append(g)
            self.edge_maps.append([pos[tuple(sorted(g[v] for v in e))] for e in order])

    def representatives(self, prefix: list[int], k: int, edge: Triple
                        ) -> dict[int, tuple[int, list[int]] | None]:
        """Middles of ``edge`` (position ``k``) up to the stabiliser of the prefix.

        Maps each middle to ``None`` if it is a representative, else to
        ``(rep, emap)`` where an automorphism sends the ``rep`` branch onto this
        one and ``emap`` says where it sends each edge position.
        """
        out: dict[int, tuple[int, list[int]] | None] = {}
        stabiliser = []
        for g, emap in zip(self.group, self.edge_maps):
            if emap[k] != k:
                continue
            if all(emap[i] < k and g[prefix[i]] == prefix[emap[i]] for i in range(k)):
                stabiliser.append((g, emap))
        for mid in edge:
            if mid in out:
                continue
            out[mid] = None
            for g, emap in stabiliser:
                if g[mid] not in out:
                    out[g[mid]] = (mid, emap)
        return out


class _Budget(Exception):
    pass


def decide_metric(h: Hypergraph, *, max_n: int = DEFAULT_MAX_N,
                  max_nodes: int = DEFAULT_MAX_NODES, time_limit: float | None = None,
                  backend: str = "hybrid", symmetry: bool = True,
                  symmetry_limit: int = 20_000, max_nogoods: int = 5_000
                  ) -> MetricityVerdict:
    """Decide whether some finite metric has exactly ``h``'s edges as collinear triples.

    ``backend="hybrid"`` screens each partial system with HiGHS and accepts its
    answer only after exact confirmation (falling back to the exact simplex);
    ``backend="exact"`` uses the exact simplex throughout. Both give the same
    verdicts. Exceeding ``max_nodes`` or ``time_limit`` yields a ``"budget"``
    verdict, never a guess.
    """
    if h.n > max_n:
        raise OracleLimitError(f"oracle is capped at n <= {max_n}, got n={h.n}")
    if backend not in ("hybrid", "exact"):
        raise ValueError(f"unknown backend {backend!r}")
    started = time.perf_counter()
    static, index = static_system(h)
    screen = lp.HighsScreen(static, list(range(len(index)))) if backend == "hybrid" else None
    variables = list(range(len(index)))
    order = branch_order(h)
    rows = [[betweenness_row(index, *_orient(e, mid)) for mid in e] for e in order]
    sym = _Symmetry(h, order, symmetry_limit) if symmetry else None
    stats = SearchStats(branch_space=3 ** len(order))
    stats.group_order = len(sym.group) + 1 if sym else 1
    infeasible: list[tuple[tuple[tuple[Triple, int], ...], str]] = []
    prefix: list[int] = []
    found: list[tuple[dict[int, Fraction], list[int]]] = []

    # learned conflicts, keyed by their deepest (position, middle)
    nogoods: dict[tuple[int, int], list[tuple[tuple[int, int], ...]]] = {}
    learned = [0]

    def prune(reason: str, depth: int) -> None:
        stats.pruned[reason] = stats.pruned.get(reason, 0) + 1
        stats.branches_covered += 3 ** (len(order) - depth)
        infeasible.append((tuple((order[i], prefix[i]) for i in range(depth)), reason))

    def feasible(depth: int, leaf: bool) -> tuple[bool, dict | None, frozenset[int]]:
        """LP check of the prefix; on failure also the prefix positions used by the proof."""
        equalities = [(rows[i][order[i].index(prefix[i])], 0) for i in range(depth)]
        everything = frozenset(range(depth))
        if screen is not None:
            stats.lp_calls += 1
            probe = screen.probe(equalities, want_witness=leaf)
            if probe.status == "feasible":
                return True, probe.witness, everything
            if probe.status == "infeasible":
                return False, None, frozenset(probe.certificate.eq_mult)
        stats.exact_lp_calls += 1
        result = lp.lp_feasible(equalities, static, variables)
        return result.feasible, result.witness, everything

    def visit(depth: int, eqs: _Equalities) -> frozenset[int] | None:
        """``None`` once a realising branch is found, else the conflict: prefix
        positions whose choices alone already make this subtree infeasible."""
        stats.nodes += 1
        if stats.nodes > max_nodes:
            raise _Budget
        if time_limit is not None and time.perf_counter() - started > time_limit:
            raise _Budget
        if depth:
            for good in nogoods.get((depth - 1, prefix[depth - 1]), ()):
                if all(prefix[pos] == mid for pos, mid in good):
                    prune("nogood", depth)
                    return frozenset(pos for pos, _ in good)
        leaf = depth == len(order)
        ok, witness, conflict = feasible(depth, leaf)
        if not ok:
            prune("lp", depth)
            if conflict and len(conflict) < depth and learned[0] < max_nogoods:
                good = tuple((pos, prefix[pos]) for pos in sorted(conflict))
                nogoods.setdefault(good[-1], []).append(good)
                learned[0] += 1
            return conflict
        if leaf:
            stats.branches_covered += 1
            found.append((witness, list(prefix)))
            return None
        edge = order[depth]
        reps = (sym.representatives(prefix, depth, edge) if sym
                else dict.fromkeys(edge))
        seen: dict[int, frozenset[int]] = {}
        conflict: set[int] = set()
        for j, mid in enumerate(edge):
            prefix.append(mid)
            image = reps[mid]
            if image is not None:
                rep, emap = image
                prune("symmetry", depth + 1)
                child_conflict = frozenset(emap[i] for i in seen[rep])
            else:
                child = eqs.extend(rows[depth][j])
                if child is None:
                    prune("equality-sign", depth + 1)
                    child_conflict = frozenset(range(depth + 1))
                else:
                    child_conflict = visit(depth + 1, child)
                    if child_conflict is None:
                        return None
            seen[mid] = child_conflict
            prefix.pop()
            if depth not in child_conflict:
                # the failure never used this edge's middle, so no sibling can succeed
                for rest in edge[j + 1:]:
                    prefix.append(rest)
                    prune("backjump", depth + 1)
                    prefix.pop()
                return child_conflict
            conflict |= child_conflict
        conflict.discard(depth)
        return frozenset(conflict)

    try:
        metric = visit(0, _Equalities()) is None
    except _Budget:
        stats.seconds = time.perf_counter() - started
        return MetricityVerdict("budget", h, stats=stats, infeasible_branches=infeasible)
    stats.seconds = time.perf_counter() - started
    if not metric:
        if stats.branches_covered != stats.branch_space:
            raise AssertionError("branch accounting does not cover the whole space")
        return MetricityVerdict("nonmetric", h, stats=stats, infeasible_branches=infeasible)
    witness, mids = found[0]
    d = FiniteMetric.from_pairs(h.n, {p: witness[i] for p, i in index.items()})
    if not realizes(d, h):
        raise AssertionError("oracle witness does not realise the hypergraph")
    assignment = {order[i]: mids[i] for i in range(len(order))}
    return MetricityVerdict("metric", h, witness=d, assignment=assignment, stats=stats,
                            infeasible_branches=infeasible)


def _orient(edge: Triple, mid: int) -> tuple[int, int, int]:
    x, z = (v for v in edge if v != mid)
    return x, mid, z


def iter_alphabet_metrics(h: Hypergraph, alphabet: Iterable[object] = HALF_STEP_ALPHABET, *,
                          value_order: Callable[[tuple[int, int]], Sequence[Fraction]]
                          | None = None,
                          max_n: int = ALPHABET_MAX_N) -> Iterator[FiniteMetric]:
    """Every metric with values from ``alphabet`` realising ``h``, in search order.

    Pairs are assigned in colexicographic order ``(0,1), (0,2), (1,2), (0,3), ...``.

    By default values are tried in ascending order; ``value_order`` may give a
    per-pair order instead (restricted to the alphabet). Triangle inequalities
    and the collinearity pattern are checked on each triple as its last pair
    is assigned.
    """
    if h.n > max_n:
        raise OracleLimitError(f"alphabet search is capped at n <= {max_n}, got n={h.n}")
    values = sorted({Fraction(a) for a in alphabet})
    if not values or values[0] <= 0:
        raise ValueError("alphabet must contain positive values")
    # search over integers scaled by the common denominator
    scale = math.lcm(*(v.denominator for v in values))
    allowed = set(values)
    n = h.n
    # colexicographic order completes each triple as early as possible
    pairs = sorted(combinations(range(n), 2), key=lambda p: (p[1], p[0]))
    edges = h.edge_set
    d = [[0] * n for _ in range(n)]
    options = []
    for p in pairs:
        order = values if value_order is None else [Fraction(v) for v in value_order(p)]
        options.append([int(v * scale) for v in order if v in allowed])

    def consistent(b: int, c: int) -> bool:
        row_b, row_c = d[b], d[c]
        for a in range(b):
            x, y, z = d[a][b], row_b[c], row_c[a]
            if x > y + z or y > x + z or z > x + y:
                return False
            collinear = z == x + y or x == y + z or y == x + z
            if collinear != ((a, b, c) in edges):
                return False
        return True

    def assign(i: int) -> Iterator[FiniteMetric]:
        if i == len(pairs):
            metric = FiniteMetric(n, tuple(tuple(Fraction(v, scale) for v in row) for row in d))
            if betweenness_hypergraph(metric) != h:
                raise AssertionError("alphabet search produced a non-realising metric")
            yield metric
            return
        a, b = pairs[i]
        for v in options[i]:
            d[a][b] = d[b][a] = v
            if consistent(a, b):
                yield from assign(i + 1)

    yield from assign(0)


def alphabet_search(h: Hypergraph, alphabet: Iterable[object] = HALF_STEP_ALPHABET, *,
                    value_order: Callable[[tuple[int, int]], Sequence[Fraction]] | None = None,
                    max_n: int = ALPHABET_MAX_N) -> FiniteMetric | None:
    """First metric from :func:`iter_alphabet_metrics`. The search is exhaustive, so
    ``None`` means no such metric exists."""
    return next(iter_alphabet_metrics(h, alphabet, value_order=value_order, max_n=max_n), None)


def verdict_to_json(v: MetricityVerdict, *, max_branches: int = 10_000) -> dict:
    """Certificate: verdict, witness (``"p/q"`` strings), middles and branch statistics."""
    out: dict = {
        "verdict": v.kind,
        "n": v.hypergraph.n,
        "edges": [list(e) for e in v.hypergraph.edges],
        "statistics": v.stats.to_json(),
    }
    if v.witness is not None:
        out["witness"] = {f"{i} {j}": str(x) for (i, j), x in sorted(v.witness.pairs().items())}
    if v.assignment is not None:
        out["middle_assignment"] = [{"edge": list(e), "middle": m}
                                    for e, m in sorted(v.assignment.items())]
    if v.kind != "metric":
        shown = v.infeasible_branches[:max_branches]
        out["infeasible_branches"] = [
            {"prefix": [[list(e), m] for e, m in prefix], "reason": reason}
            for prefix, reason in shown]
        out["infeasible_branches_truncated"] = len(v.infeasible_branches) - len(shown)
    return out
