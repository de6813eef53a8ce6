"""Explicit centralized and distributed strategies.

* :func:`comb_centralized` spreads mass 1/m over 0, d, ..., (m-1)d.
* :func:`comb_distributed` factors that comb as a convolution of a k1-comb
  with spacing d and a (m/k1)-comb with spacing k1*d.
* :func:`sample_ss1_profile` draws product profiles, for even m and a
  division strictly between the first two bands, whose convolution puts
  mass 1/m in every interval.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .core import InfeasibleDivision, InfeasibleGap, PartitionInfo, RationalLike, as_rational
from .distributions import AtomicStrategy

SAMPLE_DENOMINATOR = 10**4


@dataclass(frozen=True)
class Band:
    """Divisions B1 in ``[lo, hi] = [(k1-1)d, (k1-1)d + r_B]`` rebuild the comb."""

    k1: int
    lo: Fraction
    hi: Fraction
    # hi clipped to the requested half budget, when that cut the band short
    clipped_hi: Optional[Fraction] = None

    @property
    def clipped(self) -> bool:
        return self.clipped_hi is not None

    @property
    def feasible_hi(self) -> Fraction:
        return self.hi if self.clipped_hi is None else self.clipped_hi


def comb_centralized(pi: PartitionInfo) -> AtomicStrategy:
    w = Fraction(1, pi.m)
    return AtomicStrategy(pi.B, tuple((j * pi.d, w) for j in range(pi.m)))


def _factors(m: int) -> list[int]:
    return [k for k in range(1, m + 1) if m % k == 0]


def bands(pi: PartitionInfo, b_half: Optional[RationalLike] = None) -> list[Band]:
    """One band per factor k1 of m that meets ``[0, b_half]`` (default B/2)."""
    half = pi.B / 2 if b_half is None else as_rational(b_half)
    out = []
    for k1 in _factors(pi.m):
        lo = (k1 - 1) * pi.d
        hi = lo + pi.rB
        if lo > half:
            continue
        out.append(Band(k1, lo, hi, half if hi > half else None))
    if pi.rB < pi.d:
        for a, b in zip(out, out[1:]):
            assert a.hi < b.lo, "bands of consecutive factors must be disjoint"
    return out


def comb_distributed(
    pi: PartitionInfo, k1: int, B1: RationalLike
) -> tuple[AtomicStrategy, AtomicStrategy]:
    """Sub-player strategies whose convolution is :func:`comb_centralized`."""
    B1 = as_rational(B1)
    if k1 < 1 or pi.m % k1:
        raise ValueError(f"k1={k1} is not a factor of m={pi.m}")
    k2 = pi.m // k1
    lo = (k1 - 1) * pi.d
    hi = lo + pi.rB
    if not lo <= B1 <= hi:
        raise InfeasibleDivision(f"B1={B1} outside the k1={k1} band [{lo}, {hi}]")
    F1 = AtomicStrategy(B1, tuple((j * pi.d, Fraction(1, k1)) for j in range(k1)))
    F2 = AtomicStrategy(pi.B - B1, tuple((j * k1 * pi.d, Fraction(1, k2)) for j in range(k2)))
    return F1, F2


def _uniform_in(rng: random.Random, lo: Fraction, hi: Fraction) -> Fraction:
    return lo + (hi - lo) * Fraction(rng.randint(0, SAMPLE_DENOMINATOR), SAMPLE_DENOMINATOR)


def _split(rng: random.Random, mass: Fraction, parts: int) -> list[Fraction]:
    raw = [rng.randint(1, SAMPLE_DENOMINATOR) for _ in range(parts)]
    total = sum(raw)
    return [mass * Fraction(r, total) for r in raw]


def sample_ss1_profile(
    pi: PartitionInfo, B1: RationalLike, seed: int
) -> tuple[AtomicStrategy, AtomicStrategy]:
    """Seeded product profile (F1, F2) whose convolution satisfies the 1/m-mass condition.

    F1 puts mass 1/2 on a cluster containing 0 and 1/2 on a cluster containing
    B1. F2 puts mass 2/m on each of m/2 clusters, the i-th sitting at offset
    ``[d - B1, r_B]`` from ``(2i-2)d`` so that the two F1 clusters land in
    I_{2i-1} and I_{2i}. Cluster widths use at most a quarter of the slack
    ``w = r_B - d + B1`` and F2 clusters keep a further quarter margin on both
    sides, so every atom is strictly inside its target interval.
    """
    B1 = as_rational(B1)
    m, d, rB = pi.m, pi.d, pi.rB
    if m % 2:
        raise InfeasibleGap(f"sampler needs an even partition, got m={m}")
    if rB >= d:
        raise InfeasibleGap("sampler needs r_B < d")
    if not d - rB < B1 < d:
        raise InfeasibleGap(f"B1={B1} outside the gap ({d - rB}, {d})")
    rng = random.Random(seed)
    slack = rB - d + B1
    width1 = _uniform_in(rng, Fraction(0), slack / 4)
    width2 = _uniform_in(rng, Fraction(0), slack / 4)

    p1 = [Fraction(0)] + [_uniform_in(rng, Fraction(0), width1) for _ in range(rng.randint(0, 2))]
    p2 = [B1] + [_uniform_in(rng, B1 - width2, B1) for _ in range(rng.randint(0, 2))]
    F1 = AtomicStrategy.from_pairs(
        B1,
        list(zip(p1, _split(rng, Fraction(1, 2), len(p1))))
        + list(zip(p2, _split(rng, Fraction(1, 2), len(p2)))),
    )

    lo = d - B1 + width2
    hi = rB - width1
    margin = (hi - lo) / 4
    lo, hi = lo + margin, hi - margin
    if lo > hi:  # pragma: no cover - impossible when the gap preconditions hold
        raise InfeasibleGap("empty cluster window")
    pairs = []
    for i in range(1, m // 2 + 1):
        base = (2 * i - 2) * d
        locs = [base + _uniform_in(rng, lo, hi) for _ in range(rng.randint(1, 3))]
        pairs += list(zip(locs, _split(rng, Fraction(2, m), len(locs))))
    F2 = AtomicStrategy.from_pairs(pi.B - B1, pairs)
    return F1, F2
