"""Finite-support mixed strategies and their exact convolution."""

from __future__ import annotations

import json
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import accumulate
from typing import Iterable

from .core import Interval, RationalLike, as_rational, format_rational


class StrategyError(ValueError):
    """A strategy violates one of its type invariants."""


@dataclass(frozen=True)
class AtomicStrategy:
    """Distribution of the battlefield-1 allocation, as sorted atoms on [0, budget]."""

    budget: Fraction
    atoms: tuple[tuple[Fraction, Fraction], ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "budget", as_rational(self.budget))
        atoms = tuple((as_rational(x), as_rational(w)) for x, w in self.atoms)
        object.__setattr__(self, "atoms", atoms)
        _check_atoms(self.budget, atoms)

    @classmethod
    def from_pairs(
        cls, budget: RationalLike, pairs: Iterable[tuple[RationalLike, RationalLike]]
    ) -> "AtomicStrategy":
        """Build from unsorted pairs, merging atoms at the same location."""
        merged: dict[Fraction, Fraction] = {}
        for x, w in pairs:
            x, w = as_rational(x), as_rational(w)
            if w == 0:
                continue
            merged[x] = merged.get(x, Fraction(0)) + w
        return cls(budget, tuple(sorted(merged.items())))

    @classmethod
    def dirac(cls, x: RationalLike, budget: RationalLike) -> "AtomicStrategy":
        return cls(budget, ((as_rational(x), Fraction(1)),))

    @classmethod
    def uniform(cls, locations: Iterable[RationalLike], budget: RationalLike) -> "AtomicStrategy":
        locs = [as_rational(x) for x in locations]
        w = Fraction(1, len(locs))
        return cls.from_pairs(budget, [(x, w) for x in locs])

    @property
    def locations(self) -> list[Fraction]:
        return [x for x, _ in self.atoms]

    @cached_property
    def _xs(self) -> list[Fraction]:
        return [x for x, _ in self.atoms]

    @cached_property
    def _cum(self) -> list[Fraction]:
        return list(accumulate((w for _, w in self.atoms), initial=Fraction(0)))

    def weight_at(self, x: RationalLike) -> Fraction:
        x = as_rational(x)
        i = bisect_left(self._xs, x)
        if i < len(self._xs) and self._xs[i] == x:
            return self.atoms[i][1]
        return Fraction(0)

    def mass(self, interval: Interval) -> Fraction:
        """Exact probability of ``interval``, honoring open/closed endpoints."""
        upper = cdf(self, interval.hi) if interval.hi_closed else cdf_left(self, interval.hi)
        lower = cdf_left(self, interval.lo) if interval.lo_closed else cdf(self, interval.lo)
        return max(upper - lower, Fraction(0))


def _check_atoms(budget: Fraction, atoms: tuple[tuple[Fraction, Fraction], ...]) -> None:
    if budget < 0:
        raise StrategyError(f"budget must be nonnegative, got {budget}")
    if not atoms:
        raise StrategyError("weights sum to 1 violated: strategy has no atoms")
    prev = None
    for i, (x, w) in enumerate(atoms):
        if not 0 <= x <= budget:
            raise StrategyError(f"0 <= location <= budget violated at atom {i}: x={x}, budget={budget}")
        if w <= 0:
            raise StrategyError(f"weights > 0 violated at atom {i}: w={w}")
        if prev is not None and x <= prev:
            raise StrategyError(f"locations strictly increasing violated at atom {i}: {prev} then {x}")
        prev = x
    total = sum((w for _, w in atoms), Fraction(0))
    if total != 1:
        raise StrategyError(f"weights sum to 1 violated: total is {total}")


def cdf(F: AtomicStrategy, x: RationalLike) -> Fraction:
    """P(b <= x)."""
    return F._cum[bisect_right(F._xs, as_rational(x))]


def cdf_left(F: AtomicStrategy, x: RationalLike) -> Fraction:
    """Left limit P(b < x)."""
    return F._cum[bisect_left(F._xs, as_rational(x))]


def convolve(F1: AtomicStrategy, F2: AtomicStrategy) -> AtomicStrategy:
    """Distribution of b1 + b2 for independent b1 ~ F1, b2 ~ F2."""
    pairs = [(x1 + x2, w1 * w2) for x1, w1 in F1.atoms for x2, w2 in F2.atoms]
    return AtomicStrategy.from_pairs(F1.budget + F2.budget, pairs)


@dataclass(frozen=True)
class IntStrategy:
    """Probability vector over the integer allocations 0..budget."""

    budget: int
    probs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        probs = tuple(as_rational(p) for p in self.probs)
        object.__setattr__(self, "probs", probs)
        if self.budget < 0:
            raise StrategyError("budget must be nonnegative")
        if len(probs) != self.budget + 1:
            raise StrategyError(f"probs must have length budget+1 = {self.budget + 1}, got {len(probs)}")
        if any(p < 0 for p in probs):
            raise StrategyError("entries >= 0 violated")
        if sum(probs, Fraction(0)) != 1:
            raise StrategyError(f"weights sum to 1 violated: total is {sum(probs, Fraction(0))}")

    @classmethod
    def dirac(cls, k: int, budget: int) -> "IntStrategy":
        probs = [Fraction(0)] * (budget + 1)
        probs[k] = Fraction(1)
        return cls(budget, tuple(probs))

    @classmethod
    def uniform(cls, budget: int) -> "IntStrategy":
        return cls(budget, (Fraction(1, budget + 1),) * (budget + 1))

    @classmethod
    def from_atomic(cls, F: AtomicStrategy) -> "IntStrategy":
        """Embed an atomic strategy whose atoms and budget are integers."""
        if F.budget.denominator != 1 or any(x.denominator != 1 for x in F.locations):
            raise StrategyError("atomic strategy is not integer-supported")
        probs = [Fraction(0)] * (int(F.budget) + 1)
        for x, w in F.atoms:
            probs[int(x)] = w
        return cls(int(F.budget), tuple(probs))

    def to_atomic(self) -> AtomicStrategy:
        return AtomicStrategy.from_pairs(self.budget, [(k, p) for k, p in enumerate(self.probs) if p])

    def support(self) -> list[int]:
        return [k for k, p in enumerate(self.probs) if p]


def convolve_int(p: IntStrategy, q: IntStrategy) -> IntStrategy:
    out = [Fraction(0)] * (p.budget + q.budget + 1)
    for i, a in enumerate(p.probs):
        if not a:
            continue
        for j, b in enumerate(q.probs):
            if b:
                out[i + j] += a * b
    return IntStrategy(p.budget + q.budget, tuple(out))


# JSON strategy files: {"budget": "15", "atoms": [{"x": "0", "w": "1/2"}, ...]}


def strategy_to_dict(F: AtomicStrategy) -> dict:
    return {
        "budget": format_rational(F.budget),
        "atoms": [{"x": format_rational(x), "w": format_rational(w)} for x, w in F.atoms],
    }


def strategy_from_dict(data: dict) -> AtomicStrategy:
    if not isinstance(data, dict) or "budget" not in data or "atoms" not in data:
        raise StrategyError('strategy JSON must be an object with "budget" and "atoms"')
    atoms = data["atoms"]
    if not isinstance(atoms, list):
        raise StrategyError('"atoms" must be a list')
    pairs = []
    for i, atom in enumerate(atoms):
        try:
            pairs.append((_parse_cell(atom["x"]), _parse_cell(atom["w"])))
        except (KeyError, TypeError, ValueError) as exc:
            raise StrategyError(f'atom {i}: expected {{"x": rational, "w": rational}} ({exc})') from exc
    return AtomicStrategy(_parse_cell(data["budget"]), tuple(pairs))


def _parse_cell(value) -> Fraction:
    if isinstance(value, float):
        raise ValueError(f"floats are not accepted, write {value!r} as a rational string")
    return as_rational(value)


def dumps_strategy(F: AtomicStrategy) -> str:
    return json.dumps(strategy_to_dict(F), indent=2)


def loads_strategy(text: str) -> AtomicStrategy:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StrategyError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return strategy_from_dict(data)
