"""Worst-case value of an atomic team strategy and the security-strategy checker.

Two readings of the mass-placement conditions are supported:

``closed`` (default)
    Mass is counted on the closures ``[(j-1)d, (j-1)d + r_B]`` and the
    comparison window is ``[0, x - d]``. Under this reading the conditions are
    equivalent to ``value_of(F) == 1 - 1/m`` for atomic strategies with ties
    split, and the d-spaced comb passes.
``strict``
    SS-1 counts mass on the intervals exactly as written,
    ``I_j = ((j-1)d, (j-1)d + r_B]`` for j >= 2, so atoms sitting on a left
    endpoint ``(j-1)d`` belong to no interval. SS-2 keeps the closures for the
    atoms it tests but uses the right-open window ``[0, x - d)``, which drops
    the partner atom exactly d below. The comb fails both.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, NamedTuple, Optional

from .analytic import centralized_value, win_share
from .core import (
    BoundaryCase,
    BudgetOrder,
    GameConfig,
    Interval,
    PartitionInfo,
    UnsupportedValues,
    as_rational,
    partition_of,
)
from .distributions import AtomicStrategy, cdf, cdf_left

Reading = Literal["closed", "strict"]
READINGS = ("closed", "strict")


@dataclass(frozen=True)
class ValueReport:
    value: Fraction
    witness_e: Fraction
    # set when the minimum is taken on an open piece (lo, hi) of [0, E]
    witness_interval: Optional[tuple[Fraction, Fraction]] = None
    # always True: [0, E] is closed and the payoff is piecewise constant
    attained: bool = True


class SS1Result(NamedTuple):
    ok: bool
    masses: list[tuple[int, Fraction]]
    outside: Fraction


class SS2Violation(NamedTuple):
    j: int
    x: Fraction
    lhs: Fraction
    rhs: Fraction


class SS2Result(NamedTuple):
    ok: bool
    violation: Optional[SS2Violation]


@dataclass(frozen=True)
class SSCheckReport:
    ss1_ok: bool
    ss1_masses: list[tuple[int, Fraction]]
    outside_mass: Fraction
    ss2_ok: bool
    ss2_violation: Optional[SS2Violation]
    value: Fraction
    centralized: Fraction
    reading: str = "closed"
    agrees: bool = field(init=False)

    def __post_init__(self) -> None:
        both = self.ss1_ok and self.ss2_ok
        object.__setattr__(self, "agrees", both == (self.value == self.centralized))

    @property
    def is_security(self) -> bool:
        return self.ss1_ok and self.ss2_ok


def team_payoff(cfg: GameConfig, F: AtomicStrategy, e: Fraction) -> Fraction:
    """Expected team payoff against the enemy pure strategy e."""
    B, E = cfg.B, cfg.E
    total = Fraction(0)
    for x, w in F.atoms:
        total += w * (cfg.v1 * win_share(x, e) + cfg.v2 * win_share(B - x, E - e))
    return total


def _team_payoff_fast(cfg: GameConfig, F: AtomicStrategy, e: Fraction) -> Fraction:
    # strict wins come from cumulative mass; only atoms tying at e (battlefield 1)
    # or at e - d (battlefield 2) need the tie rule
    y = e - cfg.d
    bf1 = 1 - cdf(F, e) + F.weight_at(e) * win_share(e, e)
    bf2 = cdf_left(F, y) + F.weight_at(y) * win_share(cfg.B - y, cfg.E - e)
    return cfg.v1 * bf1 + cfg.v2 * bf2


def value_of(cfg: GameConfig, F: AtomicStrategy) -> ValueReport:
    """Exact minimum over e in [0, E] of the team payoff of F.

    The payoff only changes where the enemy ties an atom on battlefield 1
    (e = x) or on battlefield 2 (e = x + d), so evaluating those points plus
    one point inside every open piece between them is exhaustive.
    """
    if cfg.B >= cfg.E:
        raise BudgetOrder(f"value_of needs B < E (got B={cfg.B}, E={cfg.E})")
    if F.budget != cfg.B:
        raise ValueError(f"strategy budget {F.budget} differs from B={cfg.B}")
    d, E = cfg.d, cfg.E
    points = {Fraction(0), E}
    for x, _ in F.atoms:
        points.add(x)
        if x + d <= E:
            points.add(x + d)
    breaks = sorted(points)

    best: Optional[tuple[Fraction, Fraction, Optional[tuple[Fraction, Fraction]]]] = None
    candidates: list[tuple[Fraction, Optional[tuple[Fraction, Fraction]]]] = []
    for i, p in enumerate(breaks):
        candidates.append((p, None))
        if i + 1 < len(breaks):
            q = breaks[i + 1]
            candidates.append(((p + q) / 2, (p, q)))
    for e, piece in candidates:
        v = _team_payoff_fast(cfg, F, e)
        if best is None or v < best[0]:
            best = (v, e, piece)
    assert best is not None
    return ValueReport(value=best[0], witness_e=best[1], witness_interval=best[2])


def enemy_payoff_cdf_form(F: AtomicStrategy, x, d) -> Fraction:
    """Enemy payoff F(x) - F(x - d) + 1 at allocation x.

    Only valid where neither x nor x - d carries an atom; at atoms the tie
    rule of the payoff makes the true value differ.
    """
    x, d = as_rational(x), as_rational(d)
    return cdf(F, x) - cdf(F, x - d) + 1


def _require_characterized_case(pi: PartitionInfo, F: AtomicStrategy) -> None:
    if pi.boundary:
        raise BoundaryCase(f"r_B == d == {pi.d}: conditions only characterize r_B < d")
    if F.budget != pi.B:
        raise ValueError(f"strategy budget {F.budget} differs from B={pi.B}")


def _intervals(pi: PartitionInfo, reading: Reading) -> tuple[Interval, ...]:
    if reading not in READINGS:
        raise ValueError(f"unknown reading {reading!r}; expected one of {READINGS}")
    if reading == "closed":
        return tuple(I.closure() for I in pi.intervals)
    return pi.intervals


def _upper(F: AtomicStrategy, y: Fraction, inclusive: bool) -> Fraction:
    return cdf(F, y) if inclusive else cdf_left(F, y)


def _mass_up_to(F: AtomicStrategy, I: Interval, y: Fraction, inclusive: bool) -> Fraction:
    """Mass of I intersected with [0, y] (inclusive) or [0, y)."""
    upper = min(_upper(F, y, inclusive), _upper(F, I.hi, I.hi_closed))
    lower = _upper(F, I.lo, not I.lo_closed)
    return max(upper - lower, Fraction(0))


def check_ss1(pi: PartitionInfo, F: AtomicStrategy, reading: Reading = "closed") -> SS1Result:
    """Mass 1/m in every interval I_j."""
    _require_characterized_case(pi, F)
    target = Fraction(1, pi.m)
    masses = [(j, F.mass(I)) for j, I in enumerate(_intervals(pi, reading), start=1)]
    outside = 1 - sum((mass for _, mass in masses), Fraction(0))
    return SS1Result(all(mass == target for _, mass in masses), masses, outside)


def check_ss2(pi: PartitionInfo, F: AtomicStrategy, reading: Reading = "closed") -> SS2Result:
    """mass(I_{j+1} & [0, x]) <= mass(I_j & [0, x - d]) for x in I_{j+1}.

    The left side only grows at atoms of I_{j+1} and the right side is
    nondecreasing in x, so atom locations are the only points to test.
    """
    _require_characterized_case(pi, F)
    # the reading only decides whether the right side keeps an atom at x - d;
    # with open left ends no comb atom would be tested at all
    intervals = _intervals(pi, "closed")
    if reading not in READINGS:
        raise ValueError(f"reading must be one of {READINGS}, got {reading!r}")
    inclusive = reading == "closed"
    for j in range(1, pi.m):
        here, nxt = intervals[j - 1], intervals[j]
        for x, _ in F.atoms:
            if x not in nxt:
                continue
            lhs = _mass_up_to(F, nxt, x, True)
            rhs = _mass_up_to(F, here, x - pi.d, inclusive)
            if lhs > rhs:
                return SS2Result(False, SS2Violation(j, x, lhs, rhs))
    return SS2Result(True, None)


def is_security_strategy(cfg: GameConfig, F: AtomicStrategy, reading: Reading = "closed") -> SSCheckReport:
    """Run both mass conditions and cross-check them against the exact value."""
    if not cfg.unit_values:
        raise UnsupportedValues("security conditions are stated for v1 = v2 = 1")
    pi = partition_of(cfg)
    ss1 = check_ss1(pi, F, reading)
    ss2 = check_ss2(pi, F, reading)
    return SSCheckReport(
        ss1_ok=ss1.ok,
        ss1_masses=ss1.masses,
        outside_mass=ss1.outside,
        ss2_ok=ss2.ok,
        ss2_violation=ss2.violation,
        value=value_of(cfg, F).value,
        centralized=centralized_value(cfg),
        reading=reading,
    )
