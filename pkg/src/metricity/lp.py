"""Exact rational linear feasibility.

Constraints are pairs ``(coeffs, rhs)`` with ``coeffs`` a mapping from variable
index to coefficient; equalities mean ``coeffs . x == rhs`` and inequalities
``coeffs . x >= rhs``. Variables are free unless bounded by an inequality.

:func:`lp_feasible` is the exact solver: Gaussian elimination of the equalities
followed by a phase-one simplex (Bland's rule) over :class:`~fractions.Fraction`.
:func:`highs_probe` is a floating point screen whose answers are only trusted
after exact confirmation: a feasible point must re-verify exactly, and an
infeasibility claim must come with a Farkas certificate that checks exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

Constraint = tuple[Mapping[int, Fraction], Fraction]


@dataclass
class LPResult:
    feasible: bool
    witness: dict[int, Fraction] | None = None
    reason: str = ""


@dataclass
class FarkasCertificate:
    """Multipliers proving infeasibility.

    Summing ``eq_mult[i] * equality_i + ineq_mult[j] * inequality_j`` (with all
    ``ineq_mult >= 0``) gives ``0 . x >= c`` with ``c > 0``.
    """

    eq_mult: dict[int, Fraction] = field(default_factory=dict)
    ineq_mult: dict[int, Fraction] = field(default_factory=dict)


def _variables(*groups: Sequence[Constraint]) -> list[int]:
    return sorted({v for group in groups for coeffs, _ in group for v in coeffs})


def check_point(equalities: Sequence[Constraint], inequalities: Sequence[Constraint],
                x: Mapping[int, Fraction]) -> bool:
    for coeffs, rhs in equalities:
        if sum(c * x.get(v, 0) for v, c in coeffs.items()) != rhs:
            return False
    for coeffs, rhs in inequalities:
        if sum(c * x.get(v, 0) for v, c in coeffs.items()) < rhs:
            return False
    return True


def check_farkas(equalities: Sequence[Constraint], inequalities: Sequence[Constraint],
                 cert: FarkasCertificate) -> bool:
    """Exact verification of an infeasibility certificate."""
    if any(y < 0 for y in cert.ineq_mult.values()):
        return False
    total: dict[int, Fraction] = {}
    bound = Fraction(0)
    for group, mult in ((equalities, cert.eq_mult), (inequalities, cert.ineq_mult)):
        for i, y in mult.items():
            if y == 0:
                continue
            coeffs, rhs = group[i]
            bound += y * rhs
            for v, c in coeffs.items():
                total[v] = total.get(v, 0) + y * c
    return bound > 0 and all(c == 0 for c in total.values())


def eliminate(equalities: Sequence[Constraint]) -> tuple[dict[int, dict[int, Fraction]], bool]:
    """Reduced row echelon form of the equalities.

    Returns ``({pivot: expr}, consistent)`` where ``expr`` maps free variables to
    coefficients and key ``-1`` to the constant term, so that
    ``x[pivot] = expr[-1] + sum(expr[v] * x[v])``.
    """
    pivots: dict[int, dict[int, Fraction]] = {}
    for coeffs, rhs in equalities:
        row = {v: Fraction(c) for v, c in coeffs.items() if c != 0}
        row[-1] = -Fraction(rhs)
        for p in [v for v in row if v in pivots]:
            c = row.pop(p)
            for v, e in pivots[p].items():
                row[v] = row.get(v, 0) + c * e
        row = {v: c for v, c in row.items() if c != 0}
        const = row.pop(-1, Fraction(0))
        if not row:
            if const != 0:
                return pivots, False
            continue
        p = min(row)
        cp = row.pop(p)
        expr = {v: -c / cp for v, c in row.items()}
        if const != 0:
            expr[-1] = -const / cp
        for q, qexpr in pivots.items():
            if p in qexpr:
                c = qexpr.pop(p)
                for v, e in expr.items():
                    qexpr[v] = qexpr.get(v, 0) + c * e
                pivots[q] = {v: e for v, e in qexpr.items() if e != 0}
        pivots[p] = expr
    return pivots, True


def substitute(coeffs: Mapping[int, Fraction], rhs: Fraction,
               pivots: Mapping[int, Mapping[int, Fraction]]) -> tuple[dict[int, Fraction], Fraction]:
    out: dict[int, Fraction] = {}
    rhs = Fraction(rhs)
    for v, c in coeffs.items():
        if v in pivots:
            for w, e in pivots[v].items():
                if w == -1:
                    rhs -= c * e
                else:
                    out[w] = out.get(w, 0) + c * e
        else:
            out[v] = out.get(v, 0) + c
    return {v: c for v, c in out.items() if c != 0}, rhs


def _phase_one(rows: list[tuple[dict[int, Fraction], Fraction]],
               free_vars: list[int]) -> dict[int, Fraction] | None:
    """Find ``y`` with ``row . y >= rhs`` for every row, ``y`` free; ``None`` if none exists."""
    k = len(free_vars)
    col = {v: i for i, v in enumerate(free_vars)}
    m = len(rows)
    # columns: u (k), w (k), slack (m), artificial (m); y = u - w
    width = 2 * k + 2 * m
    tableau: list[list[Fraction]] = []
    basis: list[int] = []
    zero = Fraction(0)
    for i, (coeffs, rhs) in enumerate(rows):
        line = [zero] * (width + 1)
        sign = 1 if rhs > 0 else -1
        for v, c in coeffs.items():
            line[col[v]] = sign * c
            line[k + col[v]] = -sign * c
        line[2 * k + i] = Fraction(-sign)
        line[width] = sign * rhs
        if sign > 0:
            line[2 * k + m + i] = Fraction(1)
            basis.append(2 * k + m + i)
        else:
            basis.append(2 * k + i)
        tableau.append(line)
    artificial = set(range(2 * k + m, width))
    # reduced costs of "minimise sum of artificials"
    cost = [zero] * (width + 1)
    for i, b in enumerate(basis):
        if b in artificial:
            for j in range(width + 1):
                cost[j] -= tableau[i][j]
    for j in artificial:
        cost[j] = zero
    for i, b in enumerate(basis):
        if b in artificial:
            cost[b] = zero
    while True:
        entering = next((j for j in range(width) if cost[j] < 0 and j not in artificial), None)
        if entering is None:
            break
        best = None
        for i, line in enumerate(tableau):
            a = line[entering]
            if a > 0:
                ratio = line[width] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            # unbounded direction in phase one cannot happen: objective is bounded below by 0
            break
        r = best[1]
        pivot_row = tableau[r]
        a = pivot_row[entering]
        if a != 1:
            pivot_row = [x / a for x in pivot_row]
            tableau[r] = pivot_row
        nz = [j for j, x in enumerate(pivot_row) if x != 0]
        for i, line in enumerate(tableau):
            if i != r:
                f = line[entering]
                if f != 0:
                    for j in nz:
                        line[j] -= f * pivot_row[j]
        f = cost[entering]
        for j in nz:
            cost[j] -= f * pivot_row[j]
        basis[r] = entering
    if cost[width] != 0:
        return None
    values = [zero] * width
    for i, b in enumerate(basis):
        values[b] = tableau[i][width]
    return {v: values[col[v]] - values[k + col[v]] for v in free_vars}


def lp_feasible(equalities: Sequence[Constraint], inequalities: Sequence[Constraint],
                variables: Sequence[int] | None = None) -> LPResult:
    """Exact feasibility of ``{x : eq(x) == b, ineq(x) >= c}``.

    On success the witness assigns every variable (those in ``variables`` and
    any appearing in a constraint) and satisfies each constraint exactly.
    """
    names = sorted(set(variables or ()) | set(_variables(equalities, inequalities)))
    pivots, ok = eliminate(equalities)
    if not ok:
        return LPResult(False, reason="inconsistent equalities")
    rows: list[tuple[dict[int, Fraction], Fraction]] = []
    for coeffs, rhs in inequalities:
        row, r = substitute(coeffs, rhs, pivots)
        if not row:
            if r > 0:
                return LPResult(False, reason="constant inequality violated after elimination")
            continue
        rows.append((row, r))
    free = [v for v in names if v not in pivots]
    used = sorted({v for row, _ in rows for v in row})
    y = _phase_one(rows, used) if rows else {}
    if y is None:
        return LPResult(False, reason="phase one optimum is positive")
    x = {v: y.get(v, Fraction(0)) for v in free}
    for p, expr in pivots.items():
        x[p] = expr.get(-1, Fraction(0)) + sum(c * x[v] for v, c in expr.items() if v != -1)
    if not check_point(equalities, inequalities, x):
        raise AssertionError("exact simplex produced a point that fails verification")
    return LPResult(True, witness=x)


def _rationalize(value: float, limit: int) -> Fraction:
    return Fraction(value).limit_denominator(limit)


def _exact_nullspace_certificate(equalities: Sequence[Constraint],
                                 inequalities: Sequence[Constraint],
                                 eq_rows: list[int], ineq_rows: list[int]
                                 ) -> FarkasCertificate | None:
    """Solve for multipliers on a fixed support exactly; ``None`` if that fails."""
    unknowns = [("e", i) for i in eq_rows] + [("i", j) for j in ineq_rows]
    var_rows: dict[int, dict[int, Fraction]] = {}
    rhs_row: dict[int, Fraction] = {}
    for t, (kind, idx) in enumerate(unknowns):
        coeffs, rhs = (equalities if kind == "e" else inequalities)[idx]
        for v, c in coeffs.items():
            var_rows.setdefault(v, {})[t] = Fraction(c)
        rhs_row[t] = Fraction(rhs)
    system: list[Constraint] = [(row, Fraction(0)) for row in var_rows.values()]
    system.append((rhs_row, Fraction(1)))
    bounds: list[Constraint] = [({t: Fraction(1)}, Fraction(0))
                                for t, (kind, _) in enumerate(unknowns) if kind == "i"]
    result = lp_feasible(system, bounds, range(len(unknowns)))
    if not result.feasible or result.witness is None:
        return None
    cert = FarkasCertificate()
    for t, (kind, idx) in enumerate(unknowns):
        y = result.witness.get(t, Fraction(0))
        if y != 0:
            (cert.eq_mult if kind == "e" else cert.ineq_mult)[idx] = y
    return cert


@dataclass
class Probe:
    """Outcome of :func:`highs_probe`: exactly confirmed or ``"unknown"``."""

    status: str  # "feasible", "infeasible" or "unknown"
    witness: dict[int, Fraction] | None = None
    certificate: FarkasCertificate | None = None


class HighsScreen:
    """Floating point screen via HiGHS with exact confirmation of every answer.

    The inequalities are fixed at construction; each :meth:`probe` adds a set of
    equalities and solves ``min sum(t)`` subject to ``ineq(x) + t >= c``,
    ``eq(x) == b``, ``t >= 0``. A zero optimum gives a point that is rounded and
    re-checked exactly; a positive optimum gives dual multipliers that are
    rounded (or re-solved exactly on their support) into a Farkas certificate.
    Anything that fails exact confirmation is reported as ``"unknown"``.

    One solver instance is kept alive. Equality rows shared with the previous
    probe (same coefficient mapping objects, in the same order) stay loaded,
    so depth-first callers get warm starts.
    """

    def __init__(self, inequalities: Sequence[Constraint], variables: Sequence[int]) -> None:
        import highspy
        import numpy as np

        self.inequalities = list(inequalities)
        self.names = list(variables)
        self.col = {v: i for i, v in enumerate(self.names)}
        nv, ni = len(self.names), len(self.inequalities)
        inf = highspy.kHighsInf
        solver = highspy.Highs()
        solver.setOptionValue("output_flag", False)
        solver.setOptionValue("presolve", "off")
        solver.addVars(nv, np.full(nv, -inf), np.full(nv, inf))
        solver.addVars(ni, np.zeros(ni), np.full(ni, inf))
        solver.changeColsCost(ni, np.arange(nv, nv + ni, dtype=np.int32), np.ones(ni))
        starts, index, value = [], [], []
        for r, (coeffs, _) in enumerate(self.inequalities):
            starts.append(len(index))
            for v, c in coeffs.items():
                index.append(self.col[v])
                value.append(float(c))
            index.append(nv + r)
            value.append(1.0)
        solver.addRows(ni, np.array([float(rhs) for _, rhs in self.inequalities]),
                       np.full(ni, inf), len(index), np.array(starts, dtype=np.int32),
                       np.array(index, dtype=np.int32), np.array(value))
        self._solver = solver
        self._loaded: list[Constraint] = []

    def _sync(self, equalities: Sequence[Constraint]) -> None:
        import numpy as np

        keep = 0
        for old, new in zip(self._loaded, equalities):
            if old[0] is not new[0] or old[1] != new[1]:
                break
            keep += 1
        ni = len(self.inequalities)
        extra = len(self._loaded) - keep
        if extra:
            gone = np.arange(ni + keep, ni + len(self._loaded), dtype=np.int32)
            self._solver.deleteRows(extra, gone)
        for coeffs, rhs in equalities[keep:]:
            cols = np.array([self.col[v] for v in coeffs], dtype=np.int32)
            vals = np.array([float(c) for c in coeffs.values()])
            self._solver.addRow(float(rhs), float(rhs), len(cols), cols, vals)
        self._loaded = list(equalities)

    def probe(self, equalities: Sequence[Constraint], *, want_witness: bool = True) -> Probe:
        import highspy
        import numpy as np

        self._sync(equalities)
        solver = self._solver
        solver.run()
        if solver.getModelStatus() != highspy.HighsModelStatus.kOptimal:
            return Probe("unknown")
        nv, ni = len(self.names), len(self.inequalities)
        solution = solver.getSolution()
        if solver.getInfo().objective_function_value < 1e-7:
            if not want_witness:
                return Probe("feasible")
            x = np.asarray(solution.col_value)[:nv]
            witness = _round_point(equalities, self.inequalities, self.names, x)
            if witness is not None:
                return Probe("feasible", witness=witness)
            return Probe("unknown")
        duals = np.asarray(solution.row_dual)
        y_ineq, y_eq = duals[:ni], duals[ni:]
        cert = _round_certificate(y_eq, y_ineq)
        if check_farkas(equalities, self.inequalities, cert):
            return Probe("infeasible", certificate=cert)
        tol = 1e-9 * max(1.0, float(np.max(np.abs(y_ineq))) if ni else 1.0)
        eq_rows = [int(i) for i in np.flatnonzero(np.abs(y_eq) > tol)]
        ineq_rows = [int(j) for j in np.flatnonzero(y_ineq > tol)]
        cert2 = _exact_nullspace_certificate(equalities, self.inequalities, eq_rows, ineq_rows)
        if cert2 is not None and check_farkas(equalities, self.inequalities, cert2):
            return Probe("infeasible", certificate=cert2)
        return Probe("unknown")


def highs_probe(equalities: Sequence[Constraint], inequalities: Sequence[Constraint],
                variables: Sequence[int], *, want_witness: bool = True) -> Probe:
    """One-shot :class:`HighsScreen` probe."""
    return HighsScreen(inequalities, variables).probe(equalities, want_witness=want_witness)


def _round_certificate(y_eq, y_ineq) -> FarkasCertificate:
    import numpy as np

    scale = float(max(np.max(np.abs(y_eq), initial=0.0), np.max(y_ineq, initial=0.0), 1e-300))
    cert = FarkasCertificate()
    for i in np.flatnonzero(np.abs(y_eq) > 1e-12 * scale):
        q = _rationalize(float(y_eq[i]) / scale, 10_000)
        if q != 0:
            cert.eq_mult[int(i)] = q
    for j in np.flatnonzero(y_ineq > 1e-12 * scale):
        q = _rationalize(float(y_ineq[j]) / scale, 10_000)
        if q != 0:
            cert.ineq_mult[int(j)] = q
    return cert


def _round_point(equalities: Sequence[Constraint], inequalities: Sequence[Constraint],
                 names: list[int], x) -> dict[int, Fraction] | None:
    """Round free coordinates, recompute equality-determined ones exactly, verify."""
    pivots, ok = eliminate(equalities)
    if not ok:
        return None
    for limit in (64, 10_000, 10**9):
        point = {v: _rationalize(float(x[i]), limit)
                 for i, v in enumerate(names) if v not in pivots}
        for p, expr in pivots.items():
            point[p] = expr.get(-1, Fraction(0)) + sum(
                c * point.get(v, Fraction(0)) for v, c in expr.items() if v != -1)
        if check_point(equalities, inequalities, point):
            return point
    return None
