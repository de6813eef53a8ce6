from fractions import Fraction

import pytest

from teamblotto.construct import bands, comb_centralized, comb_distributed, sample_ss1_profile
from teamblotto.core import GameConfig, InfeasibleDivision, InfeasibleGap, partition_of
from teamblotto.distributions import AtomicStrategy, convolve
from teamblotto.security import check_ss1, check_ss2, value_of

F = Fraction
PI36 = partition_of(GameConfig(36, 50))
PI42 = partition_of(GameConfig(42, 50))


def test_comb_centralized_examples():
    assert comb_centralized(PI36).atoms == ((0, F(1, 3)), (14, F(1, 3)), (28, F(1, 3)))
    assert comb_centralized(PI42).atoms == tuple((8 * j, F(1, 6)) for j in range(6))
    assert comb_centralized(partition_of(GameConfig(1, 2))).atoms == ((0, 1),)


def test_bands_examples():
    assert [(b.k1, b.lo, b.hi) for b in bands(PI42, 21)] == [(1, 0, 2), (2, 8, 10), (3, 16, 18)]
    found = bands(PI36, 18)
    assert [(b.k1, b.lo, b.hi) for b in found] == [(1, 0, 8)]
    single = bands(partition_of(GameConfig(1, 3)))
    assert [(b.k1, b.lo, b.hi) for b in single] == [(1, 0, 1)]


def test_bands_default_half_and_clipping():
    assert bands(PI42) == bands(PI42, 21)
    clipped = bands(PI42, 17)
    assert clipped[-1].clipped and clipped[-1].feasible_hi == 17 and clipped[-1].hi == 18
    assert not clipped[0].clipped


def test_bands_disjoint_and_sized():
    for B, E in [(42, 50), (36, 50), (70, 80), (59, 60)]:
        pi = partition_of(GameConfig(B, E))
        found = bands(pi, B)
        assert all(b.hi - b.lo == pi.rB and pi.m % b.k1 == 0 for b in found)
        if pi.rB < pi.d:
            assert all(a.hi < b.lo for a, b in zip(found, found[1:]))


def test_comb_distributed_example():
    F1, F2 = comb_distributed(PI42, 2, 9)
    assert F1.atoms == ((0, F(1, 2)), (8, F(1, 2))) and F1.budget == 9
    assert F2.atoms == ((0, F(1, 3)), (16, F(1, 3)), (32, F(1, 3))) and F2.budget == 33
    assert convolve(F1, F2) == comb_centralized(PI42)
    G1, G2 = comb_distributed(PI36, 1, 5)
    assert G1.atoms == ((0, 1),) and G2.atoms == comb_centralized(PI36).atoms


def test_comb_distributed_errors():
    with pytest.raises(InfeasibleDivision):
        comb_distributed(PI42, 2, 11)
    with pytest.raises(ValueError):
        comb_distributed(PI42, 4, 24)


@pytest.mark.parametrize("pi", [PI42, PI36, partition_of(GameConfig(70, 80))])
def test_comb_distributed_rebuilds_comb_across_bands(pi):
    cfg = GameConfig(pi.B, pi.E)
    for band in bands(pi, pi.B):
        for B1 in (band.lo, (band.lo + band.hi) / 2, band.hi):
            F1, F2 = comb_distributed(pi, band.k1, B1)
            conv = convolve(F1, F2)
            assert conv == comb_centralized(pi)
            assert value_of(cfg, conv).value == 1 - F(1, pi.m)


def test_sampler_is_deterministic():
    assert sample_ss1_profile(PI42, 7, seed=1) == sample_ss1_profile(PI42, 7, seed=1)
    assert sample_ss1_profile(PI42, 7, seed=1) != sample_ss1_profile(PI42, 7, seed=2)


@pytest.mark.parametrize("B1", [F(13, 2), 7, F(15, 2)])
def test_sampler_profiles_pass_ss1_fail_ss2(B1):
    for seed in range(25):
        F1, F2 = sample_ss1_profile(PI42, B1, seed)
        assert all(0 <= x <= F1.budget for x in F1.locations)
        assert all(0 <= x <= F2.budget for x in F2.locations)
        assert F1.budget == B1 and F2.budget == 42 - B1
        conv = convolve(F1, F2)
        assert check_ss1(PI42, conv).ok
        assert not check_ss2(PI42, conv).ok
        assert value_of(GameConfig(42, 50), conv).value < F(5, 6)


def test_sampler_preconditions():
    with pytest.raises(InfeasibleGap):
        sample_ss1_profile(PI42, 5, seed=0)
    with pytest.raises(InfeasibleGap):
        sample_ss1_profile(PI42, 8, seed=0)
    with pytest.raises(InfeasibleGap):
        sample_ss1_profile(PI36, 7, seed=0)  # odd m


def test_sampler_cluster_masses():
    F1, F2 = sample_ss1_profile(PI42, 7, seed=3)
    low = sum(w for x, w in F1.atoms if x <= F1.budget / 2)
    assert low == F(1, 2)
    # each F2 cluster sits in its own block of width 2d
    for i in range(3):
        mass = sum(w for x, w in F2.atoms if 2 * i * 8 <= x < 2 * (i + 1) * 8)
        assert mass == F(1, 3)
    assert isinstance(F1, AtomicStrategy)
