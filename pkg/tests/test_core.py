from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from teamblotto.core import (
    BudgetOrder,
    GameConfig,
    Interval,
    as_rational,
    format_rational,
    parse_rational,
    partition_of,
)


def test_as_rational_accepts_exact_inputs():
    assert as_rational(3) == 3
    assert as_rational("13/2") == Fraction(13, 2)
    assert as_rational(Fraction(1, 3)) == Fraction(1, 3)


@pytest.mark.parametrize("bad", [0.5, True, None, [1]])
def test_as_rational_rejects_inexact(bad):
    with pytest.raises(TypeError):
        as_rational(bad)


def test_as_rational_rejects_garbage_string():
    with pytest.raises(ValueError):
        as_rational("one half")


@given(st.fractions())
def test_format_parse_round_trip(q):
    assert parse_rational(format_rational(q)) == q


def test_format_rational_shapes():
    assert format_rational(Fraction(5, 6)) == "5/6"
    assert format_rational(4) == "4"


def test_game_config_validation():
    with pytest.raises(ValueError):
        GameConfig(0, 5)
    with pytest.raises(ValueError):
        GameConfig(1, 5, v1=-1)
    cfg = GameConfig("36", 50)
    assert cfg.d == 14 and cfg.unit_values


@pytest.mark.parametrize(
    "B,E,m,d,rB",
    [(36, 50, 3, 14, 8), (42, 50, 6, 8, 2), (1, 2, 1, 1, 1), (1, 3, 1, 2, 1), (2, 3, 2, 1, 1)],
)
def test_partition_examples(B, E, m, d, rB):
    pi = partition_of(GameConfig(B, E))
    assert (pi.m, pi.d, pi.rB) == (m, d, rB)


def test_partition_intervals_36_50():
    pi = partition_of(GameConfig(36, 50))
    assert [str(I) for I in pi.intervals] == ["[0, 8]", "(14, 22]", "(28, 36]"]
    assert 14 not in pi.interval(2) and 22 in pi.interval(2)


def test_partition_rejects_b_ge_e():
    with pytest.raises(BudgetOrder):
        partition_of(GameConfig(50, 50))
    with pytest.raises(BudgetOrder):
        partition_of(GameConfig(51, 50))


@given(st.integers(1, 200), st.integers(1, 200))
def test_partition_invariants(B, extra):
    E = B + extra
    pi = partition_of(GameConfig(B, E))
    # m is the bucket of B/E, (m-1)/m < B/E <= m/(m+1)
    ratio = Fraction(B, E)
    assert Fraction(pi.m - 1, pi.m) < ratio <= Fraction(pi.m, pi.m + 1)
    assert 0 < pi.rB <= pi.d
    assert pi.B == (pi.m - 1) * pi.d + pi.rB
    assert len(pi.intervals) == pi.m
    for j, I in enumerate(pi.intervals, start=1):
        assert I.lo == (j - 1) * pi.d and I.length == pi.rB
        assert I.hi_closed and I.lo_closed == (j == 1)
    assert pi.intervals[-1].hi == B


def test_interval_closure():
    I = Interval(Fraction(1), Fraction(2), False, True)
    assert 1 not in I and 1 in I.closure()
