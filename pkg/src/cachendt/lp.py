"""Exact rational linear programming.

:func:`solve` is a two-phase tableau simplex over :class:`fractions.Fraction`
using Bland's rule, so it terminates on the degenerate vertices that the
file-splitting LP produces.  :func:`vertex_oracle` is an independent,
exponential-time check that enumerates basic feasible points directly; it is
meant for certifying :func:`solve` on small instances only.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

__all__ = [
    "LinearProgram",
    "LpSolution",
    "OPTIMAL",
    "INFEASIBLE",
    "UNBOUNDED",
    "solve",
    "vertex_oracle",
    "ORACLE_MAX_VARS",
]

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

ORACLE_MAX_VARS = 16

Row = Tuple[Sequence[Fraction], Fraction]


def _frac_row(coeffs) -> List[Fraction]:
    return [Fraction(c) for c in coeffs]


@dataclass
class LinearProgram:
    """minimize ``objective . x`` subject to equality rows, <= rows and box bounds.

    ``var_bounds`` holds ``(lo, hi)`` per variable; ``None`` stands for an
    infinite bound.  When omitted every variable is bounded below by 0.
    """

    objective: List[Fraction]
    eq_rows: List[Row] = field(default_factory=list)
    le_rows: List[Row] = field(default_factory=list)
    var_bounds: Optional[List[Tuple[Optional[Fraction], Optional[Fraction]]]] = None

    def __post_init__(self):
        n = len(self.objective)
        self.objective = _frac_row(self.objective)
        self.eq_rows = [(_frac_row(a), Fraction(b)) for a, b in self.eq_rows]
        self.le_rows = [(_frac_row(a), Fraction(b)) for a, b in self.le_rows]
        for a, _ in self.eq_rows + self.le_rows:
            if len(a) != n:
                raise ValueError(f"row of length {len(a)} in an LP with {n} variables")
        if self.var_bounds is None:
            self.var_bounds = [(Fraction(0), None)] * n
        if len(self.var_bounds) != n:
            raise ValueError("need one (lo, hi) pair per variable")
        bounds = []
        for lo, hi in self.var_bounds:
            lo = None if lo is None else Fraction(lo)
            hi = None if hi is None else Fraction(hi)
            if lo is not None and hi is not None and lo > hi:
                raise ValueError(f"empty bound interval [{lo}, {hi}]")
            bounds.append((lo, hi))
        self.var_bounds = bounds

    @property
    def n_vars(self) -> int:
        return len(self.objective)

    def is_feasible_point(self, x: Sequence[Fraction]) -> bool:
        """Exact check of every constraint at ``x``."""
        for a, b in self.eq_rows:
            if sum(ai * xi for ai, xi in zip(a, x)) != b:
                return False
        for a, b in self.le_rows:
            if sum(ai * xi for ai, xi in zip(a, x)) > b:
                return False
        for (lo, hi), xi in zip(self.var_bounds, x):
            if (lo is not None and xi < lo) or (hi is not None and xi > hi):
                return False
        return True

    def value_at(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * xi for c, xi in zip(self.objective, x)), Fraction(0))


@dataclass(frozen=True)
class LpSolution:
    status: str
    value: Optional[Fraction] = None
    point: Optional[Tuple[Fraction, ...]] = None

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


# -- simplex ---------------------------------------------------------------

class _Tableau:
    """Dense tableau ``rows[i] = [coeffs..., rhs]`` with an explicit basis."""

    def __init__(self, rows, basis):
        self.rows = rows
        self.basis = basis

    def pivot(self, i, j):
        prow = self.rows[i]
        piv = prow[j]
        if piv != 1:
            prow = [v / piv if v else v for v in prow]
            self.rows[i] = prow
        nz = [(k, v) for k, v in enumerate(prow) if v]
        for r, row in enumerate(self.rows):
            if r == i:
                continue
            f = row[j]
            if f:
                for k, v in nz:
                    row[k] -= f * v
        self.basis[i] = j

    def reduced_costs(self, cost, n_cols):
        """c_j - c_B B^-1 A_j for every column, plus the current objective value."""
        red = list(cost[:n_cols])
        obj = Fraction(0)
        for row, b in zip(self.rows, self.basis):
            cb = cost[b]
            if cb:
                for k in range(n_cols):
                    if row[k]:
                        red[k] -= cb * row[k]
                obj += cb * row[-1]
        return red, obj

    def run(self, cost, allowed):
        """Minimize ``cost`` with Bland's rule over columns in ``allowed``.

        Returns OPTIMAL or UNBOUNDED.
        """
        n_cols = len(self.rows[0]) - 1 if self.rows else len(cost)
        red, _ = self.reduced_costs(cost, n_cols)
        while True:
            entering = next((j for j in allowed if red[j] < 0), None)
            if entering is None:
                return OPTIMAL
            best = None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    ratio = row[-1] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return UNBOUNDED
            i = best[1]
            # keep the reduced-cost row in step with the pivot
            f = red[entering]
            self.pivot(i, entering)
            prow = self.rows[i]
            for k in range(n_cols):
                if prow[k]:
                    red[k] -= f * prow[k]


def solve(lp: LinearProgram) -> LpSolution:
    """Solve ``lp`` exactly with a two-phase simplex (Bland's anti-cycling rule)."""
    n = lp.n_vars
    # Substitute x_j = lo + y, x_j = hi - y or x_j = y+ - y- so every y >= 0.
    cols = []  # per original var: list of (column, sign)
    offset = []
    n_y = 0
    upper_rows = []
    for j, (lo, hi) in enumerate(lp.var_bounds):
        if lo is not None:
            cols.append([(n_y, 1)])
            offset.append(lo)
            if hi is not None:
                upper_rows.append((n_y, hi - lo))
            n_y += 1
        elif hi is not None:
            cols.append([(n_y, -1)])
            offset.append(hi)
            n_y += 1
        else:
            cols.append([(n_y, 1), (n_y + 1, -1)])
            offset.append(Fraction(0))
            n_y += 2

    def transform(a, b):
        row = [Fraction(0)] * n_y
        shift = Fraction(0)
        for j, aj in enumerate(a):
            if aj:
                shift += aj * offset[j]
                for c, sgn in cols[j]:
                    row[c] += sgn * aj
        return row, b - shift

    raw = []  # (coeffs over y, rhs, has_slack)
    for a, b in lp.eq_rows:
        row, rhs = transform(a, b)
        raw.append((row, rhs, False))
    for a, b in lp.le_rows:
        row, rhs = transform(a, b)
        raw.append((row, rhs, True))
    for c, u in upper_rows:
        row = [Fraction(0)] * n_y
        row[c] = Fraction(1)
        raw.append((row, u, True))

    m = len(raw)
    n_slack = sum(1 for _, _, s in raw if s)
    slack_start = n_y
    art_start = n_y + n_slack
    rows, basis, art_cols = [], [], []
    slack_k = 0
    for i, (row, rhs, has_slack) in enumerate(raw):
        full = row + [Fraction(0)] * n_slack
        sgn = 1
        if has_slack:
            full[slack_start + slack_k] = Fraction(1)
            slack_col = slack_start + slack_k
            slack_k += 1
        if rhs < 0:
            full = [-v for v in full]
            rhs = -rhs
            sgn = -1
        rows.append((full, rhs, has_slack and sgn > 0, slack_col if has_slack else None))

    n_art = sum(1 for _, _, usable, _ in rows if not usable)
    width = art_start + n_art
    tab_rows = []
    k = 0
    for full, rhs, usable, slack_col in rows:
        full = full + [Fraction(0)] * n_art
        if usable:
            basis.append(slack_col)
        else:
            full[art_start + k] = Fraction(1)
            basis.append(art_start + k)
            art_cols.append(art_start + k)
            k += 1
        tab_rows.append(full + [rhs])

    tab = _Tableau(tab_rows, basis)
    real_cols = list(range(art_start))

    if art_cols:
        phase1_cost = [Fraction(0)] * art_start + [Fraction(1)] * n_art
        tab.run(phase1_cost, list(range(width)))
        _, infeas = tab.reduced_costs(phase1_cost, width)
        if infeas > 0:
            return LpSolution(INFEASIBLE)
        # drive zero-valued artificials out of the basis; drop redundant rows
        i = 0
        while i < len(tab.rows):
            if tab.basis[i] >= art_start:
                j = next((c for c in real_cols if tab.rows[i][c] != 0), None)
                if j is None:
                    del tab.rows[i]
                    del tab.basis[i]
                    continue
                tab.pivot(i, j)
            i += 1

    cost = [Fraction(0)] * width
    for j, cj in enumerate(lp.objective):
        for c, sgn in cols[j]:
            cost[c] += sgn * cj
    status = tab.run(cost, real_cols)
    if status == UNBOUNDED:
        return LpSolution(UNBOUNDED)

    y = [Fraction(0)] * width
    for row, b in zip(tab.rows, tab.basis):
        y[b] = row[-1]
    x = tuple(offset[j] + sum((sgn * y[c] for c, sgn in cols[j]), Fraction(0))
              for j in range(n))
    return LpSolution(OPTIMAL, lp.value_at(x), x)


# -- vertex enumeration oracle --------------------------------------------

def _inverse(mat: List[List[Fraction]]) -> Optional[List[List[Fraction]]]:
    """Exact Gauss-Jordan inverse, or None when singular."""
    k = len(mat)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(k)] for i, row in enumerate(mat)]
    for col in range(k):
        piv = next((r for r in range(col, k) if aug[r][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [v / p for v in aug[col]]
        for r in range(k):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[k:] for row in aug]


def vertex_oracle(lp: LinearProgram, max_vars: int = ORACLE_MAX_VARS) -> LpSolution:
    """Minimum of ``lp`` over its basic feasible points, by enumeration.

    A basic point is fixed by choosing a set ``F`` of "free" variables, the
    same number of constraint rows to hold with equality (nonsingular on
    ``F``), and a lower/upper bound for each remaining variable.  Bound
    assignments are explored depth-first, pruning any branch for which some
    row can no longer be satisfied by the remaining box.

    All bounds must be finite, so a nonempty feasible set always has a
    vertex.  Raises ``ValueError`` for more than ``max_vars`` variables.
    """
    n = lp.n_vars
    if n > max_vars:
        raise ValueError(f"vertex oracle limited to {max_vars} variables, got {n}")
    if any(lo is None or hi is None for lo, hi in lp.var_bounds):
        raise ValueError("vertex oracle needs finite bounds on every variable")

    # integer rescaling: X = scale * x puts every bound on the integers and
    # each row is multiplied through by the lcm of its denominators
    scale = math.lcm(*(Fraction(v).denominator for b in lp.var_bounds for v in b))
    lo = [int(b[0] * scale) for b in lp.var_bounds]
    hi = [int(b[1] * scale) for b in lp.var_bounds]
    rows = []
    for (a, b), is_eq in ([(r, True) for r in lp.eq_rows] + [(r, False) for r in lp.le_rows]):
        rhs = Fraction(b) * scale
        mult = math.lcm(rhs.denominator, *(Fraction(c).denominator for c in a))
        rows.append(([int(c * mult) for c in a], int(rhs * mult), is_eq))
    m = len(rows)
    cmin = [[min(a[j] * lo[j], a[j] * hi[j]) for j in range(n)] for a, _, _ in rows]
    cmax = [[max(a[j] * lo[j], a[j] * hi[j]) for j in range(n)] for a, _, _ in rows]

    best_val: Optional[Fraction] = None
    best_pt = None

    for k in range(0, min(m, n) + 1):
        for sel in itertools.combinations(range(m), k):
            for free in itertools.combinations(range(n), k):
                inv = _inverse([[Fraction(rows[r][0][j]) for j in free] for r in sel]) if k else []
                if inv is None:
                    continue
                fixed = [j for j in range(n) if j not in free]
                nf = len(fixed)
                # free variables may land anywhere in their box
                base_min = [sum(cmin[ri][j] for j in free) for ri in range(m)]
                base_max = [sum(cmax[ri][j] for j in free) for ri in range(m)]
                suf_min = [[0] * (nf + 1) for _ in range(m)]
                suf_max = [[0] * (nf + 1) for _ in range(m)]
                for ri in range(m):
                    for d in range(nf - 1, -1, -1):
                        suf_min[ri][d] = suf_min[ri][d + 1] + cmin[ri][fixed[d]]
                        suf_max[ri][d] = suf_max[ri][d + 1] + cmax[ri][fixed[d]]

                x = [0] * n
                partial = [0] * m

                def viable(d):
                    for ri, (_, b, is_eq) in enumerate(rows):
                        if partial[ri] + base_min[ri] + suf_min[ri][d] > b:
                            return False
                        if is_eq and partial[ri] + base_max[ri] + suf_max[ri][d] < b:
                            return False
                    return True

                def leaf():
                    nonlocal best_val, best_pt
                    pt = [Fraction(v) for v in x]
                    if k:
                        rhs = [rows[r][1] - partial[r] for r in sel]
                        for fi, j in enumerate(free):
                            pt[j] = sum((inv[fi][c] * rhs[c] for c in range(k)), Fraction(0))
                            if pt[j] < lo[j] or pt[j] > hi[j]:
                                return
                        for ri, (a, b, is_eq) in enumerate(rows):
                            lhs = partial[ri] + sum(a[j] * pt[j] for j in free)
                            if lhs > b or (is_eq and lhs != b):
                                return
                    else:
                        for ri, (_, b, is_eq) in enumerate(rows):
                            if partial[ri] > b or (is_eq and partial[ri] != b):
                                return
                    point = tuple(v / scale for v in pt)
                    val = lp.value_at(point)
                    if best_val is None or val < best_val:
                        best_val, best_pt = val, point

                def dfs(d):
                    if not viable(d):
                        return
                    if d == nf:
                        leaf()
                        return
                    j = fixed[d]
                    for v in (lo[j], hi[j]) if lo[j] != hi[j] else (lo[j],):
                        x[j] = v
                        for ri in range(m):
                            partial[ri] += rows[ri][0][j] * v
                        dfs(d + 1)
                        for ri in range(m):
                            partial[ri] -= rows[ri][0][j] * v
                    x[j] = 0

                dfs(0)

    if best_val is None:
        return LpSolution(INFEASIBLE)
    return LpSolution(OPTIMAL, best_val, best_pt)
