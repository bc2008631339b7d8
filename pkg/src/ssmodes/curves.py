"""Linking minima across scales into scale-space curves."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from ssmodes.scale_space import ScaleSpacePlane


class EmptyCurveSet(ValueError):
    """No minima anywhere in the plane: the histogram has a single trivial mode."""


@dataclass(frozen=True)
class MinimaCurve:
    birth_step: int
    positions: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.positions)

    @property
    def death_step(self) -> int:
        return self.birth_step + len(self.positions) - 1

    @property
    def position(self) -> int:
        """Finest-scale position: step 0, or the birth step for late-born curves."""
        return self.positions[0]


def matching_window(sqrt_t: float) -> int:
    return max(2, math.ceil(sqrt_t))


def match_minima(prev: np.ndarray, cur: np.ndarray, window: int) -> list[tuple[int, int]]:
    """Greedy one-to-one matching of two sorted position arrays.

    Candidate pairs within ``window`` are accepted in order of increasing
    distance, ties going to the smaller bin index. Returns index pairs.
    """
    cands = []
    for i, a in enumerate(prev):
        lo = np.searchsorted(cur, a - window, side="left")
        hi = np.searchsorted(cur, a + window, side="right")
        for j in range(lo, hi):
            b = cur[j]
            cands.append((abs(int(b) - int(a)), int(min(a, b)), int(a), i, j))
    cands.sort()
    used_i, used_j, pairs = set(), set(), []
    for _, _, _, i, j in cands:
        if i in used_i or j in used_j:
            continue
        used_i.add(i)
        used_j.add(j)
        pairs.append((i, j))
    return pairs


def track_curves(plane: ScaleSpacePlane) -> list[MinimaCurve]:
    """Follow every minimum from its birth step until it is no longer matched.

    Curves are returned sorted by finest-scale position, then birth step.
    """
    sqrt_scales = plane.grid.sqrt_scales
    finished: list[MinimaCurve] = []
    # open curves, aligned with the minima of the previous step
    open_births = [0] * plane.minima[0].size
    open_paths = [[int(p)] for p in plane.minima[0]]

    for k in range(1, len(plane.minima)):
        prev, cur = plane.minima[k - 1], plane.minima[k]
        pairs = dict(match_minima(prev, cur, matching_window(sqrt_scales[k])))
        births = [k] * cur.size
        paths: list[list[int] | None] = [None] * cur.size
        for i in range(prev.size):
            j = pairs.get(i)
            if j is None:
                finished.append(MinimaCurve(open_births[i], tuple(open_paths[i])))
            else:
                births[j] = open_births[i]
                paths[j] = open_paths[i] + [int(cur[j])]
        open_births = births
        open_paths = [p if p is not None else [int(cur[j])] for j, p in enumerate(paths)]

    finished.extend(MinimaCurve(b, tuple(p)) for b, p in zip(open_births, open_paths))
    finished.sort(key=lambda c: (c.position, c.birth_step))
    return finished


@dataclass(frozen=True)
class LengthHistogram:
    """Occurrences of curve lengths; ``counts[k - 1]`` is H_L(k)."""

    counts: np.ndarray
    L_max: int

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    def lengths(self) -> np.ndarray:
        return np.repeat(np.arange(1, self.L_max + 1), self.counts)


def curve_lengths(curves, L_max: int | None = None) -> LengthHistogram:
    """Histogram H_L of curve lengths over 1..L_max (default: longest curve)."""
    lengths = [c.length if isinstance(c, MinimaCurve) else int(c) for c in curves]
    if not lengths:
        raise EmptyCurveSet("no scale-space curves")
    if L_max is None:
        L_max = max(lengths)
    if min(lengths) < 1 or max(lengths) > L_max:
        raise ValueError(f"curve lengths must lie in [1, {L_max}]")
    counts = np.zeros(L_max, dtype=np.int64)
    for length, m in Counter(lengths).items():
        counts[length - 1] = m
    return LengthHistogram(counts=counts, L_max=L_max)
