import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import gaussian_mixture
from ssmodes.curves import EmptyCurveSet, MinimaCurve, curve_lengths, match_minima, track_curves
from ssmodes.scale_space import ScaleGrid, ScaleSpacePlane, build_plane


def fake_plane(minima_per_step, n_bins=64):
    minima = [np.asarray(m, dtype=np.int64) for m in minima_per_step]
    grid = ScaleGrid(n_steps=len(minima) - 1)
    return ScaleSpacePlane(grid=grid, levels=[np.zeros(n_bins)] * len(minima), minima=minima)


def alive_and_born(curves, n_levels):
    alive = np.zeros(n_levels, dtype=int)
    born = np.zeros(n_levels, dtype=int)
    for c in curves:
        alive[c.birth_step:c.death_step + 1] += 1
        born[c.birth_step] += 1
    return alive, born


def test_two_bump_single_survivor(two_bump):
    plane = build_plane(two_bump)
    curves = track_curves(plane)
    top = plane.grid.n_steps
    survivors = [c for c in curves if c.death_step == top]
    assert len(survivors) == 1
    assert survivors[0].position == 32
    assert survivors[0].length == top + 1
    assert all(c.length < top + 1 for c in curves if c is not survivors[0])


def test_constant_histogram_no_curves():
    assert track_curves(build_plane(np.full(20, 3.0))) == []


def test_perfect_persistence():
    curves = track_curves(fake_plane([[10, 30, 50]] * 8))
    assert [c.length for c in curves] == [8, 8, 8]
    assert [c.positions for c in curves] == [(10,) * 8, (30,) * 8, (50,) * 8]


def test_drift_and_death():
    curves = track_curves(fake_plane([[10, 30], [11, 30], [12], [13]]))
    assert [(c.birth_step, c.positions) for c in curves] == [(0, (10, 11, 12, 13)), (0, (30, 30))]


def test_late_birth_is_kept():
    curves = track_curves(fake_plane([[10], [10], [10, 40], [10, 40]]))
    assert [(c.birth_step, c.length, c.position) for c in curves] == [(0, 4, 10), (2, 2, 40)]


def test_match_closest_first_and_window():
    # 20 is closer to 21 than 18 is, so 18 goes unmatched
    assert match_minima(np.array([18, 20]), np.array([21]), window=3) == [(1, 0)]
    assert match_minima(np.array([10]), np.array([14]), window=3) == []


def test_match_tie_goes_to_smaller_bin():
    assert match_minima(np.array([8, 12]), np.array([10]), window=2) == [(0, 0)]


class TestLengths:
    def test_counts(self):
        hl = curve_lengths([3, 3, 5])
        assert hl.counts[2] == 2 and hl.counts[4] == 1 and hl.n == 3
        assert sorted(hl.lengths()) == [3, 3, 5]

    def test_single_full_length(self):
        c = MinimaCurve(0, tuple([5] * 9))
        hl = curve_lengths([c], L_max=9)
        assert hl.counts[8] == 1 and hl.n == 1 and hl.L_max == 9

    def test_empty(self):
        with pytest.raises(EmptyCurveSet):
            curve_lengths([])

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            curve_lengths([12], L_max=10)

    def test_two_bump_one_full_length(self, two_bump):
        plane = build_plane(two_bump)
        hl = curve_lengths(track_curves(plane), plane.grid.n_steps + 1)
        assert hl.counts[-1] == 1


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(8, 60))
def test_bookkeeping(seed, n_bins):
    h = np.random.default_rng(seed).integers(0, 20, n_bins).astype(float)
    plane = build_plane(h)
    curves = track_curves(plane)
    n_levels = len(plane.minima)
    alive, born = alive_and_born(curves, n_levels)
    np.testing.assert_array_equal(alive, plane.minima_counts())
    assert np.all(alive[1:] <= alive[:-1] + born[1:])
    assert sum(c.length for c in curves) == plane.minima_counts().sum()
    # every minimum belongs to exactly one curve
    seen = [[] for _ in range(n_levels)]
    for c in curves:
        for k, p in enumerate(c.positions, start=c.birth_step):
            seen[k].append(p)
    for k in range(n_levels):
        assert sorted(seen[k]) == list(plane.minima[k])
    for c in curves:
        assert 1 <= c.length <= plane.grid.n_steps + 1


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([0.1, 3.0, 1000.0]))
def test_scaling_invariance(seed, alpha):
    h = np.random.default_rng(seed).integers(0, 50, 48).astype(float)
    a = track_curves(build_plane(h))
    b = track_curves(build_plane(alpha * h))
    assert [(c.birth_step, c.positions) for c in a] == [(c.birth_step, c.positions) for c in b]


def test_deterministic():
    h = gaussian_mixture(80, (20, 50), 5) + np.random.default_rng(1).random(80)
    assert track_curves(build_plane(h)) == track_curves(build_plane(h))
