"""Text formats.

``.hg``: first line ``n m``, then ``m`` lines ``a b c`` with ``0 <= a < b < c < n``.
A JSON document ``{"n": int, "edges": [[a, b, c], ...]}`` is accepted too.
``.fm``: first line ``n``, then one line ``i j value`` per pair ``i < j``, where
``value`` is an integer, ``p/q`` or a terminating decimal such as ``1.5``.
In both text formats ``#`` starts a comment and blank lines are ignored.
"""

from __future__ import annotations

import json
from fractions import Fraction
from itertools import combinations
from pathlib import Path

from metricity.hypergraph import Hypergraph, Triple
from metricity.metric import FiniteMetric, validate_metric


class FormatError(ValueError):
    """Malformed input; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None) -> None:
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


def _lines(text: str) -> list[tuple[int, list[str]]]:
    out = []
    for number, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            out.append((number, body.split()))
    return out


def _int(token: str, line: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise FormatError(f"expected an integer, got {token!r}", line) from None


def _check_edge(raw: list[int], n: int, seen: set[Triple], where: int | str) -> Triple:
    line = where if isinstance(where, int) else None
    label = "" if line is not None else f"{where}: "
    if len(raw) != 3:
        raise FormatError(f"{label}an edge needs 3 vertices, got {len(raw)}", line)
    if any(not 0 <= v < n for v in raw):
        raise FormatError(f"{label}vertex out of range 0..{n - 1} in {raw}", line)
    if len(set(raw)) != 3:
        raise FormatError(f"{label}repeated vertex in {raw}", line)
    edge = tuple(sorted(raw))
    if edge in seen:
        raise FormatError(f"{label}duplicate edge {list(edge)}", line)
    seen.add(edge)
    return edge


def parse_hg(text: str) -> Hypergraph:
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return parse_hypergraph_json(stripped)
    lines = _lines(text)
    if not lines:
        raise FormatError("empty input")
    number, head = lines[0]
    if len(head) != 2:
        raise FormatError("header must be 'n m'", number)
    n, m = (_int(t, number) for t in head)
    if n < 0 or m < 0:
        raise FormatError("n and m must be non-negative", number)
    body = lines[1:]
    if len(body) != m:
        raise FormatError(f"header announces {m} edges, found {len(body)}",
                          body[-1][0] if body else number)
    seen: set[Triple] = set()
    edges = [_check_edge([_int(t, ln) for t in tokens], n, seen, ln) for ln, tokens in body]
    return Hypergraph(n, tuple(edges))


def parse_hypergraph_json(text: str) -> Hypergraph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise FormatError(f"invalid JSON: {err.msg}", err.lineno) from None
    if not isinstance(data, dict) or "n" not in data or "edges" not in data:
        raise FormatError('JSON hypergraph must be {"n": int, "edges": [[a, b, c], ...]}')
    n = data["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise FormatError("n must be a non-negative integer")
    seen: set[Triple] = set()
    edges = []
    for k, raw in enumerate(data["edges"]):
        if not isinstance(raw, list) or not all(isinstance(v, int) for v in raw):
            raise FormatError(f"edge {k}: must be a list of integers")
        edges.append(_check_edge(raw, n, seen, f"edge {k}"))
    return Hypergraph(n, tuple(edges))


def format_hg(h: Hypergraph) -> str:
    return "".join([f"{h.n} {h.m}\n"] + [f"{a} {b} {c}\n" for a, b, c in h.edges])


def hypergraph_to_json(h: Hypergraph) -> dict:
    return {"n": h.n, "edges": [list(e) for e in h.edges]}


def parse_value(token: str) -> Fraction:
    """Exact value of ``"3"``, ``"3/2"`` or ``"1.5"``."""
    try:
        value = Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not an exact number: {token!r}") from None
    return value


def parse_fm(text: str) -> FiniteMetric:
    """Read a ``.fm`` file; the result is checked to be a metric."""
    lines = _lines(text)
    if not lines:
        raise FormatError("empty input")
    number, head = lines[0]
    if len(head) != 1:
        raise FormatError("header must be the point count n", number)
    n = _int(head[0], number)
    if n < 0:
        raise FormatError("n must be non-negative", number)
    dist: dict[tuple[int, int], Fraction] = {}
    for ln, tokens in lines[1:]:
        if len(tokens) != 3:
            raise FormatError("expected 'i j value'", ln)
        i, j = _int(tokens[0], ln), _int(tokens[1], ln)
        if not (0 <= i < j < n):
            raise FormatError(f"pair ({i}, {j}) must satisfy 0 <= i < j < {n}", ln)
        if (i, j) in dist:
            raise FormatError(f"duplicate pair ({i}, {j})", ln)
        try:
            dist[(i, j)] = parse_value(tokens[2])
        except ValueError as err:
            raise FormatError(str(err), ln) from None
    missing = [p for p in combinations(range(n), 2) if p not in dist]
    if missing:
        raise FormatError(f"{len(missing)} pairs missing, first {missing[0]}")
    metric = FiniteMetric.from_pairs(n, dist)
    problem = validate_metric(metric)
    if problem is not None:
        raise FormatError(f"not a metric: {problem}")
    return metric


def format_value(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_fm(m: FiniteMetric) -> str:
    out = [f"{m.n}\n"]
    out += [f"{i} {j} {format_value(m.d[i][j])}\n" for i, j in combinations(range(m.n), 2)]
    return "".join(out)


def metric_to_json(m: FiniteMetric) -> dict:
    return {"n": m.n, "distances": {f"{i} {j}": format_value(d) for (i, j), d in m.pairs().items()}}


def read_hg(path: str | Path) -> Hypergraph:
    return parse_hg(Path(path).read_text())


def read_fm(path: str | Path) -> FiniteMetric:
    return parse_fm(Path(path).read_text())
