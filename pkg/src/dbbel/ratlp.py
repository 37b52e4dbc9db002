"""Exact rational linear programming.

Dense two-phase primal simplex over :class:`fractions.Fraction` with Bland's
rule.  All variables are non-negative.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

__all__ = ["LinearProgram", "LpOutcome", "LpError", "solve", "check_witness"]

RELATIONS = ("<=", "=", ">=")


class LpError(ValueError):
    pass


@dataclass
class LinearProgram:
    n: int
    rows: list[tuple[Sequence[Fraction], str, Fraction]] = field(default_factory=list)
    objective: Optional[Sequence[Fraction]] = None
    sense: str = "feasibility"  # "minimize", "maximize" or "feasibility"

    def add(self, coeffs: Sequence, rel: str, bound) -> None:
        self.rows.append(([Fraction(c) for c in coeffs], rel, Fraction(bound)))

    def validate(self) -> None:
        if self.n < 0:
            raise LpError("negative variable count")
        for i, (coeffs, rel, _) in enumerate(self.rows):
            if len(coeffs) != self.n:
                raise LpError(f"row {i} has {len(coeffs)} coefficients, expected {self.n}")
            if rel not in RELATIONS:
                raise LpError(f"row {i}: unknown relation {rel!r}")
        if self.sense not in ("minimize", "maximize", "feasibility"):
            raise LpError(f"unknown sense {self.sense!r}")
        if self.sense != "feasibility":
            if self.objective is None or len(self.objective) != self.n:
                raise LpError("objective must have one coefficient per variable")


@dataclass
class LpOutcome:
    status: str  # "optimal", "feasible", "infeasible" or "unbounded"
    witness: Optional[list[Fraction]] = None
    optimum: Optional[Fraction] = None
    pivots: int = 0

    @property
    def ok(self) -> bool:
        return self.status in ("optimal", "feasible")


def check_witness(lp: LinearProgram, x: Sequence[Fraction]) -> bool:
    """Exact substitution check of every row and of non-negativity."""
    if len(x) != lp.n or any(v < 0 for v in x):
        return False
    for coeffs, rel, bound in lp.rows:
        lhs = sum((c * v for c, v in zip(coeffs, x) if c), Fraction(0))
        if rel == "<=" and not lhs <= bound:
            return False
        if rel == ">=" and not lhs >= bound:
            return False
        if rel == "=" and lhs != bound:
            return False
    return True


class _Tableau:
    def __init__(self, rows, basis, ncols):
        self.rows = rows  # each row: list of ncols coefficients + rhs
        self.basis = basis
        self.ncols = ncols
        self.pivots = 0

    def pivot(self, i: int, j: int, cost: list[Fraction]) -> None:
        row = self.rows[i]
        p = row[j]
        if p != 1:
            row = [v / p if v else v for v in row]
            self.rows[i] = row
        nz = [c for c, v in enumerate(row) if v]
        for k, other in enumerate(self.rows):
            if k != i:
                f = other[j]
                if f:
                    for c in nz:
                        other[c] -= f * row[c]
        f = cost[j]
        if f:
            for c in nz:
                cost[c] -= f * row[c]
        self.basis[i] = j
        self.pivots += 1

    def run(self, cost: list[Fraction], allowed: int) -> str:
        """Minimise; ``cost`` holds reduced costs with ``-z`` in the last slot."""
        while True:
            enter = next((j for j in range(allowed) if cost[j] < 0), None)
            if enter is None:
                return "optimal"
            best = None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    ratio = row[-1] / a
                    if best is None or ratio < best[0] or (ratio == best[0] and self.basis[i] < self.basis[best[1]]):
                        best = (ratio, i)
            if best is None:
                return "unbounded"
            self.pivot(best[1], enter, cost)


def solve(lp: LinearProgram) -> LpOutcome:
    """Solve ``lp`` exactly.

    Status is "feasible" for feasibility problems, "optimal" for solved
    optimisation problems, otherwise "infeasible" or "unbounded".  Returned
    witnesses satisfy every row exactly.
    """
    lp.validate()
    n = lp.n
    norm = []
    for coeffs, rel, bound in lp.rows:
        coeffs = [Fraction(c) for c in coeffs]
        bound = Fraction(bound)
        if bound < 0:
            coeffs = [-c for c in coeffs]
            bound = -bound
            rel = {"<=": ">=", ">=": "<=", "=": "="}[rel]
        norm.append((coeffs, rel, bound))

    n_slack = sum(1 for _, rel, _ in norm if rel != "=")
    n_art = sum(1 for _, rel, _ in norm if rel != "<=")
    ncols = n + n_slack + n_art
    art_start = n + n_slack
    rows, basis = [], []
    s_col, a_col = n, art_start
    zero = Fraction(0)
    for coeffs, rel, bound in norm:
        row = coeffs + [zero] * (n_slack + n_art) + [bound]
        if rel == "<=":
            row[s_col] = Fraction(1)
            basis.append(s_col)
            s_col += 1
        else:
            if rel == ">=":
                row[s_col] = Fraction(-1)
                s_col += 1
            row[a_col] = Fraction(1)
            basis.append(a_col)
            a_col += 1
        rows.append(row)
    tab = _Tableau(rows, basis, ncols)

    # Phase 1: minimise the sum of artificial variables.
    if n_art:
        cost = [zero] * (ncols + 1)
        for j in range(art_start, ncols):
            cost[j] = Fraction(1)
        for i, b in enumerate(tab.basis):
            if b >= art_start:
                cost = [c - r for c, r in zip(cost, tab.rows[i])]
        tab.run(cost, ncols)
        if -cost[-1] > 0:
            return LpOutcome("infeasible", pivots=tab.pivots)
        # Drive remaining (zero-valued) artificials out of the basis.
        i = 0
        while i < len(tab.rows):
            if tab.basis[i] >= art_start:
                j = next((j for j in range(art_start) if tab.rows[i][j]), None)
                if j is None:
                    del tab.rows[i]
                    del tab.basis[i]
                    continue
                tab.pivot(i, j, cost)
            i += 1
        for k, row in enumerate(tab.rows):
            tab.rows[k] = row[:art_start] + [row[-1]]
        ncols = art_start
        tab.ncols = ncols

    # Phase 2.
    if lp.sense == "feasibility":
        c = [zero] * n
    else:
        sign = 1 if lp.sense == "minimize" else -1
        c = [sign * Fraction(v) for v in lp.objective]
    cost = c + [zero] * (ncols - n) + [zero]
    for i, b in enumerate(tab.basis):
        cb = cost[b]
        if cb:
            cost = [x - cb * r for x, r in zip(cost, tab.rows[i])]
    status = tab.run(cost, ncols)
    if status == "unbounded":
        return LpOutcome("unbounded", pivots=tab.pivots)

    x = [zero] * n
    for i, b in enumerate(tab.basis):
        if b < n:
            x[b] = tab.rows[i][-1]
    if not check_witness(lp, x):
        raise AssertionError("simplex produced a witness that fails substitution")
    if lp.sense == "feasibility":
        return LpOutcome("feasible", x, None, tab.pivots)
    opt = sum((Fraction(v) * xi for v, xi in zip(lp.objective, x)), zero)
    return LpOutcome("optimal", x, opt, tab.pivots)
