"""Pure-strategy payoffs and the closed-form centralized security value."""

from __future__ import annotations

import math
from fractions import Fraction

from .core import GameConfig, OutOfRange, RationalLike, UnsupportedValues, as_rational, partition_of

HALF = Fraction(1, 2)


def win_share(x: RationalLike, y: RationalLike) -> Fraction:
    """Share of a battlefield won with allocation x against y (ties split)."""
    x, y = as_rational(x), as_rational(y)
    if x > y:
        return Fraction(1)
    if x == y:
        return HALF
    return Fraction(0)


def payoff_pure(cfg: GameConfig, b: RationalLike, e: RationalLike) -> Fraction:
    """Team payoff when it sends b and the enemy sends e to battlefield 1."""
    b, e = as_rational(b), as_rational(e)
    if not 0 <= b <= cfg.B:
        raise OutOfRange(f"team allocation {b} outside [0, {cfg.B}]")
    if not 0 <= e <= cfg.E:
        raise OutOfRange(f"enemy allocation {e} outside [0, {cfg.E}]")
    return cfg.v1 * win_share(b, e) + cfg.v2 * win_share(cfg.B - b, cfg.E - e)


def enemy_payoff_pure(cfg: GameConfig, e: RationalLike, b: RationalLike) -> Fraction:
    return cfg.v1 + cfg.v2 - payoff_pure(cfg, b, e)


def centralized_value(cfg: GameConfig) -> Fraction:
    """Security value of a single colonel holding the whole budget B.

    Partition endpoints follow the closed-form table verbatim: for B < E the
    value is 1 - 1/m on (m-1)/m < B/E <= m/(m+1). At the exact right endpoint
    (r_B == d) an atomic strategy that exploits ties can do strictly better, so
    the returned number is only a lower bound there.
    """
    if not cfg.unit_values:
        raise UnsupportedValues(f"closed form needs v1 = v2 = 1, got v1={cfg.v1}, v2={cfg.v2}")
    if cfg.B == cfg.E:
        return Fraction(1)
    if cfg.B < cfg.E:
        return 1 - Fraction(1, partition_of(cfg).m)
    # (m+1)/m < B/E <= m/(m-1)  <=>  E/(B-E) < m <= B/(B-E)
    surplus = cfg.B - cfg.E
    m = math.floor(cfg.E / surplus) + 1
    return 1 + Fraction(1, m)
