"""Discrete Gaussian scale-space of a 1D histogram.

Every level is computed directly from the raw histogram with a truncated,
renormalized sampled Gaussian (no cascading), using half-sample symmetric
reflection at both ends.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

SQRT_T0 = 0.5
DEFAULT_C = 6.0
# relative tolerance under which neighbouring samples count as equal
MINIMA_RTOL = 1e-12


def as_histogram(counts) -> np.ndarray:
    """Validate and return histogram counts as a float array."""
    h = np.asarray(counts, dtype=np.float64)
    if h.ndim != 1:
        raise ValueError("histogram must be one-dimensional")
    if h.size < 3:
        raise ValueError(f"histogram needs at least 3 bins, got {h.size}")
    if not np.all(np.isfinite(h)):
        raise ValueError("histogram counts must be finite")
    if np.any(h < 0):
        raise ValueError("histogram counts must be nonnegative")
    return h


@dataclass(frozen=True)
class Kernel:
    t: float
    C: float
    M: int
    weights: np.ndarray


def kernel_halfwidth(t: float, C: float = DEFAULT_C) -> int:
    return int(math.ceil(C * math.sqrt(t))) + 1


def sample_gaussian_kernel(t: float, C: float = DEFAULT_C) -> Kernel:
    """Sampled Gaussian g(n;t) on [-M, M], M = ceil(C*sqrt(t)) + 1, unit sum."""
    if not t > 0:
        raise ValueError(f"scale t must be positive, got {t}")
    if not 3 <= C <= 6:
        raise ValueError(f"truncation factor C must lie in [3, 6], got {C}")
    M = kernel_halfwidth(t, C)
    n = np.arange(-M, M + 1, dtype=np.float64)
    w = np.exp(-(n * n) / (2.0 * t)) / math.sqrt(2.0 * math.pi * t)
    w /= w.sum()
    # enforce exact symmetry after the division
    w = 0.5 * (w + w[::-1])
    return Kernel(t=t, C=C, M=M, weights=w)


def smooth(h, t: float, C: float = DEFAULT_C) -> np.ndarray:
    """Convolve ``h`` with the truncated Gaussian of variance ``t``.

    ``t == 0`` returns an unchanged copy. The signal is extended by
    half-sample symmetric reflection, repeated as often as the kernel needs.
    """
    h = np.asarray(h, dtype=np.float64)
    if t < 0:
        raise ValueError(f"scale t must be nonnegative, got {t}")
    if t == 0:
        return h.copy()
    k = sample_gaussian_kernel(t, C)
    padded = np.pad(h, k.M, mode="symmetric")
    return np.convolve(padded, k.weights, mode="valid")


def find_local_minima(signal, rtol: float = MINIMA_RTOL) -> np.ndarray:
    """Interior local minima of ``signal``, sorted.

    A minimum is a run of equal samples entered from a larger value on the
    left and left towards a larger value on the right; it is reported at the
    run's centre (lower middle for even runs). Endpoints are never minima.
    Differences below ``rtol * max|signal|`` are treated as equality.
    """
    s = np.asarray(signal, dtype=np.float64)
    if s.size < 3:
        raise ValueError("signal needs at least 3 samples")
    d = np.diff(s)
    scale = float(np.max(np.abs(s)))
    d[np.abs(d) <= rtol * scale] = 0.0
    sign = np.sign(d).astype(np.int8)
    nz = np.flatnonzero(sign)
    if nz.size < 2:
        return np.empty(0, dtype=np.int64)
    prev, nxt = nz[:-1], nz[1:]
    hit = (sign[prev] < 0) & (sign[nxt] > 0)
    # plateau spans samples prev+1 .. nxt
    lo, hi = prev[hit] + 1, nxt[hit]
    return ((lo + hi) // 2).astype(np.int64)


GRIDS = ("variance", "sqrt")


@dataclass(frozen=True)
class ScaleGrid:
    """Scales t_0 = 0 < t_1 < ... < t_n_steps.

    ``"variance"`` spacing adds t0 per step (t_k = k * t0, the variance
    reached by k iterated convolutions with the t0 kernel). ``"sqrt"``
    spacing adds sqrt(t0) to the standard deviation per step
    (t_k = (k * sqrt(t0))^2), so the top scale has sqrt(t) = n_steps/2.
    """

    n_steps: int
    sqrt_t0: float = SQRT_T0
    spacing: str = "variance"

    def __post_init__(self):
        if self.spacing not in GRIDS:
            raise ValueError(f"unknown grid spacing {self.spacing!r}; expected one of {GRIDS}")
        if self.n_steps < 1:
            raise ValueError("a scale grid needs at least one step")

    @property
    def scales(self) -> np.ndarray:
        k = np.arange(self.n_steps + 1, dtype=np.float64)
        if self.spacing == "sqrt":
            return (k * self.sqrt_t0) ** 2
        return k * self.sqrt_t0 ** 2

    @property
    def sqrt_scales(self) -> np.ndarray:
        return np.sqrt(self.scales)

    def __len__(self) -> int:
        return self.n_steps + 1


@dataclass
class ScaleSpacePlane:
    grid: ScaleGrid
    levels: list[np.ndarray]
    minima: list[np.ndarray] = field(repr=False)

    @property
    def n_bins(self) -> int:
        return self.levels[0].size

    def minima_counts(self) -> np.ndarray:
        return np.array([m.size for m in self.minima], dtype=np.int64)


def build_plane(h, C: float = DEFAULT_C, grid: str = "variance") -> ScaleSpacePlane:
    """Smoothed levels and their minima over 2*x_max + 1 scales, level 0 raw."""
    h = as_histogram(h)
    grid = ScaleGrid(n_steps=2 * (h.size - 1), spacing=grid)
    levels = [smooth(h, t, C) for t in grid.scales]
    minima = [find_local_minima(level) for level in levels]
    return ScaleSpacePlane(grid=grid, levels=levels, minima=minima)
