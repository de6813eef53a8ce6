from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from teamblotto.analytic import centralized_value, enemy_payoff_pure, payoff_pure, win_share
from teamblotto.core import GameConfig, OutOfRange, UnsupportedValues

F = Fraction
rationals = st.fractions(-10, 10, max_denominator=6)


def test_win_share_examples():
    assert win_share(3, 2) == 1
    assert win_share(2, 2) == F(1, 2)
    assert win_share(0, 5) == 0


@given(rationals, rationals)
def test_win_share_antisymmetric(x, y):
    assert win_share(x, y) + win_share(y, x) == 1


def test_payoff_pure_examples():
    assert payoff_pure(GameConfig(36, 50), 36, 0) == 1
    assert payoff_pure(GameConfig(2, 2), 1, 1) == 1
    assert payoff_pure(GameConfig(36, 50), 0, 0) == F(1, 2)


def test_payoff_pure_range():
    with pytest.raises(OutOfRange):
        payoff_pure(GameConfig(36, 50), 37, 0)
    with pytest.raises(OutOfRange):
        payoff_pure(GameConfig(36, 50), 0, -1)


@given(st.fractions(0, 36, max_denominator=4), st.fractions(0, 50, max_denominator=4))
def test_constant_sum(b, e):
    cfg = GameConfig(36, 50, v1=2, v2=F(1, 3))
    assert payoff_pure(cfg, b, e) + enemy_payoff_pure(cfg, e, b) == cfg.v1 + cfg.v2


def test_centralized_examples():
    assert centralized_value(GameConfig(36, 50)) == F(2, 3)
    assert centralized_value(GameConfig(50, 50)) == 1
    assert centralized_value(GameConfig(42, 50)) == F(5, 6)


def test_centralized_above_e():
    # (m+1)/m < B/E <= m/(m-1): B/E = 3/2 sits at the right end of m = 3
    assert centralized_value(GameConfig(3, 2)) == F(4, 3)
    assert centralized_value(GameConfig(55, 50)) == 1 + F(1, 11)


def test_centralized_needs_unit_values():
    with pytest.raises(UnsupportedValues):
        centralized_value(GameConfig(36, 50, v1=2))


def test_centralized_breakpoints_verbatim():
    # B/E = m/(m+1) belongs to partition m
    for m in range(1, 8):
        assert centralized_value(GameConfig(m, m + 1)) == 1 - F(1, m)


def test_centralized_monotone_in_b_with_jumps_at_breakpoints():
    E = 60
    grid = [F(k, 4) for k in range(1, 4 * 2 * E)]
    values = [centralized_value(GameConfig(B, E)) for B in grid]
    assert all(a <= b for a, b in zip(values, values[1:]))
    breakpoints = {E * F(m, m + 1) for m in range(1, 400)} | {F(E)}
    for (B, v), (B_next, v_next) in zip(zip(grid, values), zip(grid[1:], values[1:])):
        if B_next < E:
            # constant between breakpoints, and a jump right after each one
            assert (v != v_next) == any(B <= p < B_next for p in breakpoints)
    assert all(v < 1 for B, v in zip(grid, values) if B < E)
    assert all(v > 1 for B, v in zip(grid, values) if B > E)
