"""Exact rationals, game configuration and partition geometry."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rational = Fraction
RationalLike = Union[int, str, Fraction]


class BlottoError(Exception):
    """Base class for every error raised by this package."""


class BudgetOrder(BlottoError):
    pass


class OutOfRange(BlottoError):
    pass


class UnsupportedValues(BlottoError):
    pass


class BoundaryCase(BlottoError):
    """Raised when r_B == d, a case the security-strategy conditions exclude."""


class InfeasibleDivision(BlottoError):
    pass


class InfeasibleGap(BlottoError):
    pass


class DimensionMismatch(BlottoError):
    pass


class BadDivision(BlottoError):
    pass


class TooLarge(BlottoError):
    pass


def as_rational(value: RationalLike) -> Fraction:
    """Coerce ``value`` to an exact Fraction.

    Floats are rejected: a float literal such as 0.1 is not the rational the
    caller almost certainly meant.
    """
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {value!r}") from exc
    # gmpy2.mpq and friends expose numerator/denominator
    num = getattr(value, "numerator", None)
    den = getattr(value, "denominator", None)
    if num is not None and den is not None and not isinstance(value, float):
        return Fraction(int(num), int(den))
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def format_rational(q: RationalLike) -> str:
    """Serialize as ``"p/q"``, or ``"p"`` when the denominator is 1."""
    return str(as_rational(q))


def parse_rational(text: str) -> Fraction:
    return as_rational(str(text))


@dataclass(frozen=True)
class GameConfig:
    """Budgets and battlefield values of a two-battlefield Blotto game."""

    B: Fraction
    E: Fraction
    v1: Fraction = Fraction(1)
    v2: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        for name in ("B", "E", "v1", "v2"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))
        if self.B <= 0 or self.E <= 0:
            raise ValueError(f"budgets must be positive, got B={self.B}, E={self.E}")
        if self.v1 < 0 or self.v2 < 0:
            raise ValueError("battlefield values must be nonnegative")

    @property
    def d(self) -> Fraction:
        return self.E - self.B

    @property
    def unit_values(self) -> bool:
        return self.v1 == 1 and self.v2 == 1


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction
    lo_closed: bool = True
    hi_closed: bool = True

    def __contains__(self, x: Fraction) -> bool:
        above = x >= self.lo if self.lo_closed else x > self.lo
        below = x <= self.hi if self.hi_closed else x < self.hi
        return above and below

    def closure(self) -> "Interval":
        return Interval(self.lo, self.hi, True, True)

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    def __str__(self) -> str:
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{self.lo}, {self.hi}{right}"


@dataclass(frozen=True)
class PartitionInfo:
    """Partition index m of B/E together with d = E - B and r_B = B - (m-1)d.

    ``intervals[j-1]`` is I_j: ``[0, r_B]`` for j = 1 and
    ``((j-1)d, (j-1)d + r_B]`` for j = 2..m.
    """

    m: int
    d: Fraction
    rB: Fraction
    intervals: tuple[Interval, ...]
    B: Fraction
    E: Fraction

    @property
    def boundary(self) -> bool:
        """True when B/E sits exactly on the right end m/(m+1) of its partition."""
        return self.rB == self.d

    def interval(self, j: int) -> Interval:
        return self.intervals[j - 1]


def partition_of(cfg: GameConfig) -> PartitionInfo:
    """Locate B/E in its partition (m-1)/m < B/E <= m/(m+1)."""
    if cfg.B >= cfg.E:
        raise BudgetOrder(f"partition machinery needs B < E (got B={cfg.B}, E={cfg.E})")
    d = cfg.d
    # (m-1)d < B <= md  <=>  m = ceil(B/d)
    ratio = cfg.B / d
    m = math.ceil(ratio)
    rB = cfg.B - (m - 1) * d
    assert 0 < rB <= d
    intervals = [Interval(Fraction(0), rB, True, True)]
    for j in range(2, m + 1):
        lo = (j - 1) * d
        intervals.append(Interval(lo, lo + rB, False, True))
    return PartitionInfo(m=m, d=d, rB=rB, intervals=tuple(intervals), B=cfg.B, E=cfg.E)
