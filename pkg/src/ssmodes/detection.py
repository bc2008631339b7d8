"""Histogram -> scale-space -> curves -> threshold -> modes."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ssmodes import thresholding as th
from ssmodes.curves import EmptyCurveSet, MinimaCurve, curve_lengths, track_curves
from ssmodes.scale_space import DEFAULT_C, GRIDS, as_histogram, build_plane


@dataclass
class DetectionConfig:
    method: str = "otsu"
    epsilon: float | str = "auto"
    C: float = DEFAULT_C
    seed: int = 0
    init: str = "random"
    restarts: int = 10
    grid: str = "variance"

    def __post_init__(self):
        if self.method not in th.METHODS:
            raise ValueError(f"unknown method {self.method!r}; expected one of {', '.join(th.METHODS)}")
        if not 3 <= self.C <= 6:
            raise ValueError(f"C must lie in [3, 6], got {self.C}")
        if self.epsilon != "auto" and not float(self.epsilon) > 0:
            raise ValueError(f"epsilon must be 'auto' or positive, got {self.epsilon!r}")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.grid not in GRIDS:
            raise ValueError(f"unknown grid {self.grid!r}; expected one of {', '.join(GRIDS)}")

    def resolve_epsilon(self, n: int) -> float:
        return 1.0 / n if self.epsilon == "auto" else float(self.epsilon)


@dataclass
class ModeSet:
    n_bins: int
    boundaries: list[int]
    modes: list[tuple[int, int]]
    threshold: th.ThresholdResult | None
    curves: list[MinimaCurve] = field(default_factory=list)
    meaningful: list[bool] = field(default_factory=list)


def modes_from_boundaries(boundaries, n_bins: int) -> list[tuple[int, int]]:
    """Supports [0, b1], [b1, b2], ..., [bm, n_bins - 1]."""
    b = [int(v) for v in boundaries]
    if any(v <= 0 or v >= n_bins - 1 for v in b):
        raise ValueError(f"boundaries must be interior to [0, {n_bins - 1}]")
    if any(u >= v for u, v in zip(b, b[1:])):
        raise ValueError("boundaries must be strictly increasing")
    edges = [0, *b, n_bins - 1]
    return list(zip(edges[:-1], edges[1:]))


def apply_threshold(curves: list[MinimaCurve], L_max: int, cfg: DetectionConfig) -> th.ThresholdResult:
    hist = curve_lengths(curves, L_max)
    lengths = hist.lengths()
    if hist.n == 1:
        return th.degenerate(cfg.method, "a single curve cannot be split into two classes")
    eps = cfg.resolve_epsilon(hist.n)
    if cfg.method == "uniform":
        return th.threshold_uniform(L_max, eps)
    if cfg.method == "halfnormal":
        return th.threshold_halfnormal(lengths, L_max, eps)
    if cfg.method == "empirical":
        return th.threshold_empirical(hist, eps)
    if cfg.method == "otsu":
        return th.threshold_otsu(hist)
    return th.cluster_kmeans(lengths, norm=cfg.method[-2:], init=cfg.init,
                             restarts=cfg.restarts, seed=cfg.seed)


def detect_modes(h, cfg: DetectionConfig | None = None) -> ModeSet:
    """Find the meaningful modes of histogram ``h``.

    Each meaningful curve contributes one boundary at its finest-scale
    position. No curves, or no meaningful ones, give a single mode.
    """
    cfg = cfg or DetectionConfig()
    h = as_histogram(h)
    plane = build_plane(h, cfg.C, cfg.grid)
    curves = track_curves(plane)
    n_bins = h.size
    try:
        result = apply_threshold(curves, plane.grid.n_steps + 1, cfg)
    except EmptyCurveSet:
        return ModeSet(n_bins, [], modes_from_boundaries([], n_bins), None)
    flags = [result.is_meaningful(c.length) for c in curves]
    boundaries = sorted({c.position for c in th.select_meaningful(curves, result)})
    return ModeSet(n_bins, boundaries, modes_from_boundaries(boundaries, n_bins), result, curves, flags)
