"""Exact two-phase simplex over the rationals with Bland's pivoting rule.

Arithmetic runs on ``gmpy2.mpq`` when available (same exact semantics as
``fractions.Fraction``, roughly an order of magnitude faster) and results are
handed back as ``Fraction``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

from .core import DimensionMismatch, as_rational

try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover - exercised only without gmpy2
    _Q = Fraction

Bound = tuple[Optional[object], Optional[object]]


class LPStatus(str, Enum):
    OPTIMAL = "OPTIMAL"
    INFEASIBLE = "INFEASIBLE"
    UNBOUNDED = "UNBOUNDED"


@dataclass(frozen=True)
class LPResult:
    status: LPStatus
    x: Optional[tuple[Fraction, ...]] = None
    objective: Optional[Fraction] = None
    # d(objective)/d(b_i) for every original constraint row
    duals: Optional[tuple[Fraction, ...]] = None
    pivots: int = 0


def _q(v) -> "_Q":
    r = as_rational(v)
    return _Q(r.numerator, r.denominator)


def _frac(v) -> Fraction:
    return Fraction(int(v.numerator), int(v.denominator))


class _Tableau:
    """Dense tableau; row i reads ``sum(rows[i][j] * x_j) == rhs[i]`` with ``basis[i]`` a unit column."""

    def __init__(self, rows, rhs, basis, ncols):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.ncols = ncols
        self.pivots = 0

    def pivot(self, r: int, col: int, obj_rows) -> None:
        prow = self.rows[r]
        inv = 1 / prow[col]
        prow = [v * inv for v in prow]
        self.rows[r] = prow
        self.rhs[r] *= inv
        nz = [k for k, v in enumerate(prow) if v]
        prhs = self.rhs[r]
        for i, row in enumerate(self.rows):
            if i == r:
                continue
            f = row[col]
            if f:
                for k in nz:
                    row[k] -= f * prow[k]
                self.rhs[i] -= f * prhs
        for obj in obj_rows:
            f = obj[0][col]
            if f:
                for k in nz:
                    obj[0][k] -= f * prow[k]
                obj[1] -= f * prhs
        self.basis[r] = col
        self.pivots += 1

    def run(self, obj, allowed, extra_objs=()) -> bool:
        """Maximize with Bland's rule. ``obj = [reduced_costs, -value]``.

        Returns False when the objective is unbounded.
        """
        red = obj[0]
        while True:
            col = next((j for j in range(self.ncols) if allowed[j] and red[j] > 0), None)
            if col is None:
                return True
            best = None
            for i, row in enumerate(self.rows):
                a = row[col]
                if a > 0:
                    ratio = self.rhs[i] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return False
            self.pivot(best[1], col, (obj, *extra_objs))


def lp_solve(
    c: Sequence,
    A: Sequence[Sequence],
    relations: Sequence[str],
    b: Sequence,
    bounds: Optional[Sequence[Bound]] = None,
    maximize: bool = True,
) -> LPResult:
    """Solve ``max (or min) c.x  s.t.  A x (<=|>=|==) b,  lo <= x <= hi`` exactly.

    ``bounds`` defaults to ``(0, None)`` for every variable; ``None`` means
    unbounded on that side.
    """
    n = len(c)
    if len(A) != len(relations) or len(A) != len(b):
        raise DimensionMismatch(f"A has {len(A)} rows, relations {len(relations)}, b {len(b)}")
    if any(len(row) != n for row in A):
        raise DimensionMismatch(f"every row of A must have {n} entries")
    if bounds is None:
        bounds = [(0, None)] * n
    if len(bounds) != n:
        raise DimensionMismatch(f"expected {n} bounds, got {len(bounds)}")
    for rel in relations:
        if rel not in ("<=", ">=", "=="):
            raise ValueError(f"unknown relation {rel!r}")

    sense = _Q(1) if maximize else _Q(-1)
    # x_i = offset_i + sum(coef * y_k) over nonnegative structural columns y_k
    subst: list[tuple["_Q", list[tuple[int, "_Q"]]]] = []
    ub_rows: list[tuple[int, "_Q"]] = []
    ny = 0
    for lo, hi in bounds:
        lo = None if lo is None else _q(lo)
        hi = None if hi is None else _q(hi)
        if lo is not None:
            subst.append((lo, [(ny, _Q(1))]))
            if hi is not None:
                if hi < lo:
                    return LPResult(LPStatus.INFEASIBLE)
                ub_rows.append((ny, hi - lo))
            ny += 1
        elif hi is not None:
            subst.append((hi, [(ny, _Q(-1))]))
            ny += 1
        else:
            subst.append((_Q(0), [(ny, _Q(1)), (ny + 1, _Q(-1))]))
            ny += 2

    rows_y: list[list] = []
    rels: list[str] = []
    rhs_y: list = []
    for row, rel, bi in zip(A, relations, b):
        coeffs = [_Q(0)] * ny
        shift = _Q(0)
        for i, a in enumerate(row):
            a = _q(a)
            if not a:
                continue
            off, terms = subst[i]
            shift += a * off
            for k, s in terms:
                coeffs[k] += a * s
        rows_y.append(coeffs)
        rels.append(rel)
        rhs_y.append(_q(bi) - shift)
    n_orig_rows = len(rows_y)
    for k, width in ub_rows:
        coeffs = [_Q(0)] * ny
        coeffs[k] = _Q(1)
        rows_y.append(coeffs)
        rels.append("<=")
        rhs_y.append(width)

    cost_y = [_Q(0)] * ny
    obj_shift = _Q(0)
    for i, ci in enumerate(c):
        ci = _q(ci) * sense
        off, terms = subst[i]
        obj_shift += ci * off
        for k, s in terms:
            cost_y[k] += ci * s

    # slack / surplus / artificial columns
    nrows = len(rows_y)
    signs = []
    for i in range(nrows):
        if rhs_y[i] < 0:
            rows_y[i] = [-v for v in rows_y[i]]
            rhs_y[i] = -rhs_y[i]
            rels[i] = {"<=": ">=", ">=": "<=", "==": "=="}[rels[i]]
            signs.append(-1)
        else:
            signs.append(1)
    extra = []  # per row: (slack_col or None, artificial_col or None)
    col = ny
    for rel in rels:
        slack = art = None
        if rel in ("<=", ">="):
            slack = col
            col += 1
        if rel in (">=", "=="):
            art = col
            col += 1
        extra.append((slack, art))
    ncols = col
    rows = []
    basis = []
    for i in range(nrows):
        row = rows_y[i] + [_Q(0)] * (ncols - ny)
        slack, art = extra[i]
        if slack is not None:
            row[slack] = _Q(1) if rels[i] == "<=" else _Q(-1)
        if art is not None:
            row[art] = _Q(1)
        rows.append(row)
        basis.append(art if art is not None else slack)
    tab = _Tableau(rows, list(rhs_y), basis, ncols)
    artificial = [False] * ncols
    for _, art in extra:
        if art is not None:
            artificial[art] = True

    def objective_row(costs):
        red = list(costs)
        val = _Q(0)
        for i, bcol in enumerate(tab.basis):
            cb = costs[bcol]
            if cb:
                red = [r - cb * a for r, a in zip(red, tab.rows[i])]
                val += cb * tab.rhs[i]
        return [red, -val]

    phase2_costs = cost_y + [_Q(0)] * (ncols - ny)
    obj2 = objective_row(phase2_costs)
    if any(artificial):
        phase1_costs = [_Q(-1) if artificial[j] else _Q(0) for j in range(ncols)]
        obj1 = objective_row(phase1_costs)
        tab.run(obj1, [True] * ncols, extra_objs=(obj2,))
        if obj1[1] != 0:
            return LPResult(LPStatus.INFEASIBLE, pivots=tab.pivots)
        for i in range(nrows):
            if artificial[tab.basis[i]]:
                col_in = next(
                    (j for j in range(ncols) if not artificial[j] and tab.rows[i][j]), None
                )
                if col_in is not None:
                    tab.pivot(i, col_in, (obj2,))
                # otherwise the row is redundant and the artificial stays at 0
    allowed = [not a for a in artificial]
    if not tab.run(obj2, allowed):
        return LPResult(LPStatus.UNBOUNDED, pivots=tab.pivots)

    y = [_Q(0)] * ncols
    for i, bcol in enumerate(tab.basis):
        y[bcol] = tab.rhs[i]
    x = []
    for off, terms in subst:
        x.append(off + sum((s * y[k] for k, s in terms), _Q(0)))
    value = (-obj2[1] + obj_shift) * sense
    duals = []
    for i in range(n_orig_rows):
        slack, art = extra[i]
        unit = art if art is not None else slack
        # reduced cost of a unit column is minus the row's shadow price
        duals.append(-obj2[0][unit] * signs[i] * sense)
    return LPResult(
        LPStatus.OPTIMAL,
        x=tuple(_frac(v) for v in x),
        objective=_frac(value),
        duals=tuple(_frac(v) for v in duals),
        pivots=tab.pivots,
    )
