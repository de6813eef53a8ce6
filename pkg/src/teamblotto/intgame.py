"""Integer team Blotto game: exact LPs and a multistart alternating solver.

The distributed problem maximizes a bilinear function over a product of two
simplices and is non-convex. With one factor fixed it is an ordinary matrix
game, solved exactly by :func:`best_response_lp`. Alternating the two sides
from many starts yields certified *lower bounds* on the distributed value;
nothing here certifies optimality.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from .analytic import win_share
from .core import (
    BadDivision,
    DimensionMismatch,
    GameConfig,
    InfeasibleDivision,
    TooLarge,
    partition_of,
)
from .distributions import IntStrategy, convolve_int
from .lp import LPStatus, lp_solve

import highspy
import numpy as np
from flint import fmpq, fmpq_mat, fmpz_mat

log = logging.getLogger(__name__)

SAMPLE_DENOMINATOR = 10**4
MAX_ITERATIONS = 200
SNAP_DENOMINATOR = 10**6


@dataclass(frozen=True)
class PayoffMatrix:
    """Team payoff ``entries[t][e]`` for integer allocations t and e to battlefield 1."""

    B: int
    E: int
    entries: tuple[tuple[Fraction, ...], ...] = field(repr=False)

    @classmethod
    def build(cls, B: int, E: int) -> "PayoffMatrix":
        if B < 0 or E < 0:
            raise ValueError("budgets must be nonnegative")
        entries = tuple(
            tuple(win_share(t, e) + win_share(B - t, E - e) for e in range(E + 1))
            for t in range(B + 1)
        )
        return cls(B, E, entries)

    @cached_property
    def doubled(self) -> tuple[tuple[int, ...], ...]:
        """``2 * entries`` as plain ints, for the hot loops."""
        return tuple(tuple(int(2 * v) for v in row) for row in self.entries)


@dataclass(frozen=True)
class SolveResult:
    lower_bound: Fraction
    F1: IntStrategy
    F2: IntStrategy
    starts_used: int
    iterations: int
    seed: int
    best_start: str = ""


def _game_value_simplex(rows: Sequence[Sequence]) -> tuple[Fraction, list[Fraction], list[Fraction]]:
    """Exact value and optimal mixes of a nonnegative matrix game by one simplex run.

    With every entry shifted by +1 the matrix is positive, and the column
    player's LP ``max sum(y)  s.t.  (M + 1) y <= 1, y >= 0`` starts from a
    feasible slack basis. Its optimum is 1/(value + 1); the row duals and the
    primal solution, rescaled, are the two players' optimal mixes.
    """
    ncols = len(rows[0])
    shifted = [[a + 1 for a in row] for row in rows]
    res = lp_solve([1] * ncols, shifted, ["<="] * len(rows), [1] * len(rows))
    assert res.status is LPStatus.OPTIMAL, res.status
    total = res.objective
    row_mix = [y / total for y in res.duals]
    col_mix = [y / total for y in res.x]
    return 1 / total - 1, row_mix, col_mix


def _integer_rows(rows: Sequence[Sequence]) -> tuple[list[list[int]], int]:
    """Scale a rational matrix to integers; returns (rows * scale, scale)."""
    fracs = [[Fraction(a) if isinstance(a, int) else Fraction(int(a.numerator), int(a.denominator)) for a in row] for row in rows]
    scale = math.lcm(*(a.denominator for row in fracs for a in row))
    return [[int(a * scale) for a in row] for row in fracs], scale


def _float_basis(M: np.ndarray) -> Optional[tuple[list[int], list[int]]]:
    """Square block (rows R, columns C) read off an optimal float simplex basis.

    The row player's LP is ``max v  s.t.  q^T M >= v, sum(q) = 1, q >= 0``.
    In an optimal basis the basic q_r and the columns whose constraint is
    nonbasic (tight) form a square block; the exact equalizers on that block
    are the candidate equilibrium. Floating point only guesses the block.
    """
    K, N = M.shape
    # the basis is scale invariant; normalizing keeps HiGHS well conditioned
    M = M / max(1.0, float(np.abs(M).max()))
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    inf = highspy.kHighsInf
    h.addVars(K + 1, np.r_[np.zeros(K), -inf], np.full(K + 1, inf))
    h.changeColsCost(K + 1, np.arange(K + 1, dtype=np.int32), np.r_[np.zeros(K), -1.0])
    A = np.vstack([np.hstack([M.T, -np.ones((N, 1))]), np.r_[np.ones(K), 0.0][None, :]])
    starts = np.arange(N + 1, dtype=np.int32) * (K + 1)
    index = np.tile(np.arange(K + 1, dtype=np.int32), N + 1)
    h.addRows(N + 1, np.r_[np.zeros(N), 1.0], np.r_[np.full(N, inf), 1.0], A.size, starts, index, A.ravel())
    h.run()
    if h.getModelStatus() != highspy.HighsModelStatus.kOptimal:  # pragma: no cover
        return None
    basis = h.getBasis()
    basic = highspy.HighsBasisStatus.kBasic
    R = [k for k in range(K) if basis.col_status[k] == basic]
    C = [e for e in range(N) if basis.row_status[e] != basic]
    if len(R) != len(C) or not R:
        return None
    return R, C


class _Game:
    """Integer matrix game ``M`` (rows maximize) with exact helpers on top of FLINT."""

    def __init__(self, M: list[list[int]]):
        self.K, self.N = len(M), len(M[0])
        self.rows = M
        self.Mq = fmpq_mat(fmpz_mat(M))
        self.floats = np.array([[float(a) for a in row] for row in M])

    def column_payoffs(self, q: dict[int, fmpq]) -> list[fmpq]:
        vec = fmpq_mat(1, self.K, [q.get(k, 0) for k in range(self.K)])
        return (vec * self.Mq).entries()

    def row_payoffs(self, y: dict[int, fmpq]) -> list[fmpq]:
        vec = fmpq_mat(self.N, 1, [y.get(e, 0) for e in range(self.N)])
        return (self.Mq * vec).entries()

    def equalizers(self, r_idx: Sequence[int], c_idx: Sequence[int]):
        """Mixes on a square block R x C that make the opponent indifferent on it.

        Returns (value, q, y) with q, y as dicts, or None when the bordered
        system is singular, the two values differ, or a mix has a negative entry.
        """
        n = len(r_idx)
        rhs = fmpq_mat(n + 1, 1, [0] * n + [1])
        # unknowns (q_1..q_n, v): sum_r q_r M[r][c] - v = 0 for c in C, sum q = 1
        A = fmpq_mat(n + 1, n + 1, [
            *(x for c in c_idx for x in (*(self.rows[r][c] for r in r_idx), -1)),
            *([1] * n), 0,
        ])
        B = fmpq_mat(n + 1, n + 1, [
            *(x for r in r_idx for x in (*(self.rows[r][c] for c in c_idx), -1)),
            *([1] * n), 0,
        ])
        try:
            sol_q = A.solve(rhs).entries()
            sol_y = B.solve(rhs).entries()
        except ZeroDivisionError:
            return None
        if sol_q[n] != sol_y[n] or any(p < 0 for p in sol_q[:n]) or any(p < 0 for p in sol_y[:n]):
            return None
        q = {r: p for r, p in zip(r_idx, sol_q) if p}
        y = {c: p for c, p in zip(c_idx, sol_y) if p}
        return sol_q[n], q, y

    def seeded_equalizers(self, r_idx: Sequence[int], c_idx: Sequence[int]):
        """Exact equilibrium of rows[R][C] guessed from a float basis.

        The candidate is accepted only if no row or column of the restricted
        game does strictly better against it in exact arithmetic. Returns
        (equilibrium or None, guessed block or None).
        """
        block = _float_basis(self.floats[np.ix_(r_idx, c_idx)])
        if block is None:
            return None, None
        R, C = [r_idx[i] for i in block[0]], [c_idx[i] for i in block[1]]
        eq = self.equalizers(R, C)
        if eq is None:
            return None, (R, C)
        v, q, y = eq
        cols = self.column_payoffs(q)
        rows = self.row_payoffs(y)
        if any(cols[c] < v for c in c_idx) or any(rows[r] > v for r in r_idx):
            return None, (R, C)
        return eq, (R, C)

    def restricted(self, r_idx: list[int], c_idx: list[int]):
        """Exact value and mixes of the game restricted to rows R and columns C."""
        eq, _ = self.seeded_equalizers(r_idx, c_idx)
        if eq is not None:
            return eq
        sub = [[self.rows[r][c] for c in c_idx] for r in r_idx]
        value, q_sub, y_sub = _game_value_simplex(sub)
        q = {r: fmpq(p.numerator, p.denominator) for r, p in zip(r_idx, q_sub) if p}
        y = {c: fmpq(p.numerator, p.denominator) for c, p in zip(c_idx, y_sub) if p}
        return fmpq(value.numerator, value.denominator), q, y

    def solve(self) -> tuple[fmpq, dict[int, fmpq]]:
        """Exact value and an optimal row mix.

        The float basis usually yields the exact equilibrium directly. When
        it does not, a double oracle takes over: solve the game restricted to
        row set R and column set C exactly, then add any row or column that
        is a strictly better exact response to the restricted solution. When
        nothing improves, the restricted mixes guarantee the same value in
        the full game. Either way optimality is certified in exact arithmetic.
        """
        eq, block = self.seeded_equalizers(range(self.K), range(self.N))
        if eq is not None:
            return eq[0], eq[1]
        R, C = (set(block[0]), set(block[1])) if block else ({0}, {0})
        v, q, y = self.restricted(sorted(R), sorted(C))
        while True:
            cols = self.column_payoffs(q)
            rows = self.row_payoffs(y)
            e_star = min(range(self.N), key=cols.__getitem__)
            k_star = max(range(self.K), key=rows.__getitem__)
            grew = False
            if cols[e_star] < v:
                C.add(e_star)
                grew = True
            if rows[k_star] > v:
                R.add(k_star)
                grew = True
            if not grew:
                return v, q
            v, q, y = self.restricted(sorted(R), sorted(C))


def _fraction(x: fmpq) -> Fraction:
    return Fraction(int(x.p), int(x.q))


def _game_value(rows: Sequence[Sequence]) -> tuple[Fraction, list[Fraction]]:
    """Exact value and an optimal row mix of a rational matrix game."""
    M, scale = _integer_rows(rows)
    return _int_game_value(M, scale)


def _int_game_value(M: list[list[int]], scale: int) -> tuple[Fraction, list[Fraction]]:
    value, q = _Game(M).solve()
    mix = [Fraction(0)] * len(M)
    for k, p in q.items():
        mix[k] = _fraction(p)
    return _fraction(value) / scale, mix


def _min_over_columns(mix: Sequence[Fraction], rows: Sequence[Sequence]) -> Fraction:
    ncols = len(rows[0])
    return min(sum((p * row[e] for p, row in zip(mix, rows) if p), Fraction(0)) for e in range(ncols))


def centralized_value_int(B: int, E: int) -> tuple[Fraction, IntStrategy]:
    """Security value of the integer game with one colonel holding all of B."""
    pm = PayoffMatrix.build(B, E)
    value, mix = _int_game_value([list(row) for row in pm.doubled], 2)
    strategy = IntStrategy(B, tuple(mix))
    assert _min_over_columns(strategy.probs, pm.entries) == value
    return value, strategy


def _common_denominator(F: IntStrategy) -> tuple[list[int], int]:
    den = math.lcm(*(p.denominator for p in F.probs))
    return [p.numerator * (den // p.denominator) for p in F.probs], den


def _slice_rows(pm: PayoffMatrix, fixed: IntStrategy, free_budget: int) -> tuple[list[list[int]], int]:
    """``slice[k][e] = sum_j fixed[j] * entries[j + k][e]``, scaled to integers.

    Returns the integer matrix and the scale it was multiplied by.
    """
    nums, den = _common_denominator(fixed)
    # entries are at most 2, so int64 is exact while 4 * den stays below 2**62
    dtype = np.int64 if den < 2**60 else object
    doubled = np.array(pm.doubled, dtype=dtype)
    weights = np.array(nums, dtype=dtype)
    n = len(nums)
    rows = [[int(a) for a in weights @ doubled[k : k + n]] for k in range(free_budget + 1)]
    return rows, 2 * den


def best_response_lp(
    pm: PayoffMatrix, fixed: IntStrategy, fixed_side: int, free_budget: int
) -> tuple[Fraction, IntStrategy]:
    """Best strategy for the free sub-player given the other's fixed strategy.

    The team payoff is linear in the free factor of the convolution, so this
    is an exact LP. ``fixed_side`` only labels which sub-player is held fixed.
    """
    if fixed_side not in (1, 2):
        raise ValueError("fixed_side must be 1 or 2")
    if fixed.budget + free_budget != pm.B:
        raise DimensionMismatch(
            f"fixed budget {fixed.budget} + free budget {free_budget} != B = {pm.B}"
        )
    rows, scale = _slice_rows(pm, fixed, free_budget)
    value, mix = _int_game_value(rows, scale)
    return value, IntStrategy(free_budget, tuple(mix))


def eval_value_int(pm: PayoffMatrix, F1: IntStrategy, F2: IntStrategy) -> Fraction:
    """Worst case over integer enemy allocations of the product profile (F1, F2)."""
    if F1.budget + F2.budget != pm.B:
        raise DimensionMismatch(f"budgets {F1.budget} + {F2.budget} != B = {pm.B}")
    n1, d1 = _common_denominator(F1)
    n2, d2 = _common_denominator(F2)
    conv = [0] * (pm.B + 1)
    for j, a in enumerate(n1):
        if a:
            for k, b in enumerate(n2):
                if b:
                    conv[j + k] += a * b
    payoffs = (fmpz_mat(1, pm.B + 1, conv) * fmpz_mat([list(r) for r in pm.doubled])).entries()
    return Fraction(int(min(payoffs)), 2 * d1 * d2)


def _random_simplex_point(rng: random.Random, budget: int) -> IntStrategy:
    weights = [rng.randint(1, SAMPLE_DENOMINATOR) for _ in range(budget + 1)]
    total = sum(weights)
    return IntStrategy(budget, tuple(Fraction(w, total) for w in weights))


def _comb_start(B: int, E: int, B1: int) -> Optional[IntStrategy]:
    """F1 of the factor comb when B1 lies in one of its bands, else None."""
    if B >= E or B1 == 0:
        return None
    from .construct import bands, comb_distributed

    pi = partition_of(GameConfig(B, E))
    for band in bands(pi, Fraction(B, 2)):
        if band.lo <= B1 <= band.hi:
            try:
                F1, _ = comb_distributed(pi, band.k1, Fraction(B1))
            except InfeasibleDivision:  # pragma: no cover - guarded by the band test
                continue
            if all(x.denominator == 1 for x in F1.locations):
                return IntStrategy.from_atomic(F1)
    return None


def _warm_starts(B: int, E: int, B1: int) -> list[tuple[str, IntStrategy]]:
    starts = []
    comb = _comb_start(B, E, B1)
    if comb is not None:
        starts.append(("comb", comb))
    # centralized split: shift the centralized optimum so its lowest atom sits at a
    _, central = centralized_value_int(B, E)
    a = min(B1, min(central.support()))
    starts.append(("central-split", IntStrategy.dirac(a, B1)))
    starts.append(("uniform", IntStrategy.uniform(B1)))
    return starts


def _round_strategy(F: IntStrategy, denominator: int) -> IntStrategy:
    """Nearest point of the grid {n / denominator} on the simplex (ties to the heaviest entry)."""
    counts = [round(p * denominator) for p in F.probs]
    # the rounding residue goes to the heaviest entry so the sum stays exactly 1
    k = max(range(len(counts)), key=F.probs.__getitem__)
    counts[k] += denominator - sum(counts)
    if counts[k] < 0:
        return F
    return IntStrategy(F.budget, tuple(Fraction(c, denominator) for c in counts))


def _snap(
    F: IntStrategy, floor: Optional[Fraction], evaluate
) -> Optional[tuple[IntStrategy, Fraction]]:
    """Short-denominator neighbor of F whose exact value is strictly above floor.

    LP solutions inherit the digit count of the fixed strategy, so feeding
    them back unrounded makes the rationals grow geometrically from round to
    round. Candidates are F itself when its common denominator is at most
    SNAP_DENOMINATOR, then F rounded to that grid. Returns None when neither
    keeps a strict gain.
    """
    candidates = []
    if math.lcm(*(p.denominator for p in F.probs)) <= SNAP_DENOMINATOR:
        candidates.append(F)
    candidates.append(_round_strategy(F, SNAP_DENOMINATOR))
    for G in candidates:
        value = evaluate(G)
        if floor is None or value > floor:
            return G, value
    return None


def alternate(
    pm: PayoffMatrix,
    F1: IntStrategy,
    tol: Fraction = Fraction(0),
    max_iterations: int = MAX_ITERATIONS,
) -> tuple[Fraction, IntStrategy, IntStrategy, list[Fraction]]:
    """Alternate exact best responses from F1 until a round gains at most ``tol``.

    Returns the final exact value, the profile and the exact value after
    every half-step; that history is nondecreasing.
    """
    B1 = F1.budget
    B2 = pm.B - B1
    history: list[Fraction] = []
    value: Optional[Fraction] = None
    F2: Optional[IntStrategy] = None
    for _ in range(max_iterations):
        start = value
        v2, G2 = best_response_lp(pm, F1, 1, B2)
        if value is not None and v2 <= value:
            break
        snapped = _snap(G2, value, lambda G: eval_value_int(pm, F1, G))
        if snapped is None:
            break
        F2, value = snapped
        history.append(value)
        v1, G1 = best_response_lp(pm, F2, 2, B1)
        if v1 > value:
            snapped = _snap(G1, value, lambda G: eval_value_int(pm, G, F2))
            if snapped is not None:
                F1, value = snapped
                history.append(value)
        if start is not None and value - start <= tol:
            break
    assert value is not None and F2 is not None
    if any(b < a for a, b in zip(history, history[1:])):
        raise AssertionError("alternation decreased the value")
    return value, F1, F2, history


def solve_distributed(
    B: int,
    E: int,
    B1: int,
    starts: int = 64,
    seed: int = 0,
    tol: Fraction = Fraction(0),
    max_iterations: int = MAX_ITERATIONS,
) -> SolveResult:
    """Best product profile found by multistart alternation; a lower bound on V_d*(B1)."""
    if B1 < 0 or 2 * B1 > B:
        raise BadDivision(f"need 0 <= B1 <= B/2, got B1={B1}, B={B}")
    pm = PayoffMatrix.build(B, E)
    if B1 == 0:
        # the B1-simplex is a single point, one start is exhaustive
        value, F2 = centralized_value_int(B, E)
        F1 = IntStrategy.dirac(0, 0)
        return SolveResult(value, F1, F2, 1, 1, seed, "central")

    rng = random.Random(seed)
    inits = _warm_starts(B, E, B1)
    inits += [(f"random-{i}", _random_simplex_point(rng, B1)) for i in range(starts)]
    best: Optional[tuple[Fraction, IntStrategy, IntStrategy, str]] = None
    total_iterations = 0
    for label, F1 in inits:
        value, G1, G2, history = alternate(pm, F1, tol, max_iterations)
        total_iterations += len(history)
        log.debug("B1=%d start %s -> %s after %d half-steps", B1, label, value, len(history))
        if best is None or value > best[0]:
            best = (value, G1, G2, label)
    assert best is not None
    value, F1, F2, label = best
    assert eval_value_int(pm, F1, F2) == value
    return SolveResult(value, F1, F2, len(inits), total_iterations, seed, label)


def _compositions(total: int, parts: int):
    """All tuples of ``parts`` nonnegative integers summing to ``total``."""
    for cuts in combinations(range(total + parts - 1), parts - 1):
        prev = -1
        out = []
        for c in cuts:
            out.append(c - prev - 1)
            prev = c
        out.append(total + parts - 1 - prev - 1)
        yield out


def oracle_grid(B: int, E: int, B1: int, resolution: int) -> Fraction:
    """Brute-force max over F1 on the grid k/resolution, each F2 solved exactly."""
    if B1 > 3:
        raise TooLarge(f"grid oracle enumerates the B1-simplex; B1={B1} > 3 is too large")
    if B1 < 0 or B1 > B:
        raise BadDivision(f"B1={B1} outside [0, {B}]")
    if resolution < 1:
        raise ValueError("resolution must be positive")
    pm = PayoffMatrix.build(B, E)
    best: Optional[Fraction] = None
    for counts in _compositions(resolution, B1 + 1):
        # slice built directly from the payoff entries and solved by the
        # plain exact simplex, so the oracle shares no code with the solver
        rows = [
            [
                sum((Fraction(c, resolution) * pm.entries[j + k][e] for j, c in enumerate(counts) if c), Fraction(0))
                for e in range(E + 1)
            ]
            for k in range(B - B1 + 1)
        ]
        value, _, _ = _game_value_simplex(rows)
        if best is None or value > best:
            best = value
    assert best is not None
    return best
