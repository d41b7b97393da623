"""Exact finite metric spaces and their betweenness hypergraphs."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from metricity.hypergraph import Hypergraph

Pair = tuple[int, int]


@dataclass(frozen=True)
class FiniteMetric:
    """Symmetric distance matrix of :class:`~fractions.Fraction` values."""

    n: int
    d: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "d", tuple(tuple(Fraction(x) for x in row) for row in self.d))

    @classmethod
    def from_pairs(cls, n: int, dist: Mapping[Pair, object]) -> "FiniteMetric":
        """Build from ``{(i, j): value}`` with ``i < j``; every pair must be present."""
        rows = [[Fraction(0)] * n for _ in range(n)]
        for i, j in combinations(range(n), 2):
            if (i, j) in dist:
                value = dist[(i, j)]
            elif (j, i) in dist:
                value = dist[(j, i)]
            else:
                raise ValueError(f"missing distance for pair ({i}, {j})")
            rows[i][j] = rows[j][i] = Fraction(value)
        return cls(n, tuple(tuple(r) for r in rows))

    def __call__(self, x: int, y: int) -> Fraction:
        return self.d[x][y]

    def pairs(self) -> dict[Pair, Fraction]:
        return {(i, j): self.d[i][j] for i, j in combinations(range(self.n), 2)}

    def values(self) -> set[Fraction]:
        return {self.d[i][j] for i, j in combinations(range(self.n), 2)}

    def scaled(self, c: object) -> "FiniteMetric":
        c = Fraction(c)
        if c <= 0:
            raise ValueError("scale factor must be positive")
        return FiniteMetric(self.n, tuple(tuple(c * x for x in row) for row in self.d))

    def restrict(self, points: Sequence[int]) -> "FiniteMetric":
        return FiniteMetric(len(points),
                            tuple(tuple(self.d[a][b] for b in points) for a in points))


def equilateral(n: int, side: object = 1) -> FiniteMetric:
    side = Fraction(side)
    return FiniteMetric(n, tuple(tuple(Fraction(0) if i == j else side for j in range(n))
                                 for i in range(n)))


def line_metric(coords: Iterable[object]) -> FiniteMetric:
    """Points on the real line at the given (distinct) coordinates."""
    xs = [Fraction(c) for c in coords]
    return FiniteMetric(len(xs), tuple(tuple(abs(a - b) for b in xs) for a in xs))


def validate_metric(m: FiniteMetric) -> str | None:
    """``None`` if ``m`` is a metric, else a description of the first violation."""
    n = m.n
    if len(m.d) != n or any(len(row) != n for row in m.d):
        return f"distance matrix is not {n}x{n}"
    for i in range(n):
        if m.d[i][i] != 0:
            return f"nonzero self-distance at point {i}"
    for i, j in combinations(range(n), 2):
        if m.d[i][j] != m.d[j][i]:
            return f"asymmetric distance at pair ({i}, {j})"
        if m.d[i][j] <= 0:
            return f"nonpositive distance at pair ({i}, {j})"
    for i, j, k in combinations(range(n), 3):
        a, b, c = m.d[i][j], m.d[j][k], m.d[i][k]
        if a > b + c or b > a + c or c > a + b:
            return f"triangle inequality fails on triple ({i}, {j}, {k})"
    return None


def is_between(m: FiniteMetric, x: int, y: int, z: int) -> bool:
    """True iff ``y`` lies between ``x`` and ``z``: ``d(x,z) = d(x,y) + d(y,z)``."""
    if len({x, y, z}) != 3:
        raise ValueError(f"points must be pairwise distinct, got ({x}, {y}, {z})")
    return m.d[x][z] == m.d[x][y] + m.d[y][z]


def middle(m: FiniteMetric, x: int, y: int, z: int) -> int | None:
    """The point of the triple lying between the other two, if any."""
    for a, b, c in ((x, y, z), (y, x, z), (z, x, y)):
        if m.d[b][c] == m.d[b][a] + m.d[a][c]:
            return a
    return None


def is_collinear(m: FiniteMetric, x: int, y: int, z: int) -> bool:
    return middle(m, x, y, z) is not None


def betweenness_hypergraph(m: FiniteMetric) -> Hypergraph:
    """All collinear triples of ``m``; raises ``ValueError`` if ``m`` is not a metric."""
    problem = validate_metric(m)
    if problem is not None:
        raise ValueError(f"not a metric: {problem}")
    d = m.d
    edges = []
    for x, y, z in combinations(range(m.n), 3):
        a, b, c = d[x][y], d[y][z], d[x][z]
        if c == a + b or a == b + c or b == a + c:
            edges.append((x, y, z))
    return Hypergraph(m.n, tuple(edges))


def realizes(m: FiniteMetric, h: Hypergraph) -> bool:
    """``m`` is a metric on ``h``'s vertices whose collinear triples are exactly ``h``'s edges."""
    return m.n == h.n and validate_metric(m) is None and betweenness_hypergraph(m) == h


def max_distance(m: FiniteMetric) -> Fraction:
    return max((m.d[i][j] for i, j in combinations(range(m.n), 2)), default=Fraction(0))


def disjoint_union_metric(m1: FiniteMetric, m2: FiniteMetric) -> FiniteMetric:
    """Points of ``m2`` follow those of ``m1``; every cross distance is
    ``max(internal distances) + 1/2``."""
    cross = max(max_distance(m1), max_distance(m2)) + Fraction(1, 2)
    n = m1.n + m2.n
    rows = [[cross] * n for _ in range(n)]
    for i in range(m1.n):
        for j in range(m1.n):
            rows[i][j] = m1.d[i][j]
    for i in range(m2.n):
        for j in range(m2.n):
            rows[m1.n + i][m1.n + j] = m2.d[i][j]
    return FiniteMetric(n, tuple(tuple(r) for r in rows))


def embed(parts: Sequence[tuple[Sequence[int], FiniteMetric]], n: int) -> FiniteMetric:
    """Place metrics on disjoint vertex lists of ``0..n-1`` using repeated disjoint unions.

    Parts are folded left to right with :func:`disjoint_union_metric`; the
    result is then relabelled so that ``parts[i][0][k]`` is point ``k`` of
    ``parts[i][1]``.
    """
    order: list[int] = []
    acc: FiniteMetric | None = None
    for labels, metric in parts:
        if len(labels) != metric.n:
            raise ValueError("label list does not match metric size")
        order.extend(labels)
        acc = metric if acc is None else disjoint_union_metric(acc, metric)
    if acc is None or sorted(order) != list(range(n)):
        raise ValueError("parts must partition 0..n-1")
    where = {v: i for i, v in enumerate(order)}
    return FiniteMetric(n, tuple(tuple(acc.d[where[a]][where[b]] for b in range(n))
                                 for a in range(n)))
