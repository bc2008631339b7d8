"""Length thresholds separating meaningful from spurious scale-space curves.

All rules return a :class:`ThresholdResult`; a curve is meaningful when its
length is strictly greater than ``T``. Degenerate inputs (no possible
separation) give ``T = 0`` so that every curve is kept.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from ssmodes.curves import LengthHistogram, MinimaCurve

Norm = Literal["l1", "l2"]
Init = Literal["random", "uniform"]

METHODS = ("uniform", "halfnormal", "empirical", "otsu", "kmeans-l1", "kmeans-l2")

_ERF_INV_A = 0.147  # constant of the Winitzki closed-form approximation


log = logging.getLogger(__name__)


@dataclass
class ThresholdResult:
    method: str
    T: float
    epsilon: float | None = None
    degenerate: bool = False
    diagnostics: dict = field(default_factory=dict)

    meaningful_rule = "L_i > T"

    def is_meaningful(self, length) -> bool:
        return length > self.T


def degenerate(method: str, reason: str, epsilon=None, **diag) -> ThresholdResult:
    log.info("%s: %s; all curves declared meaningful", method, reason)
    return ThresholdResult(method, 0.0, epsilon, True, {"warning": reason, **diag})


def _check_epsilon(epsilon: float) -> None:
    if not 0 < epsilon <= 1:
        raise ValueError(f"epsilon must lie in (0, 1], got {epsilon}")


def erf_inv(y: float) -> float:
    """Inverse error function, accurate to |erf(x) - y| <= 1e-9.

    Starts from Winitzki's closed-form guess and polishes it with Newton
    steps on ``math.erf``.
    """
    y = float(y)
    if not -1 < y < 1:
        raise ValueError(f"erf_inv is defined on (-1, 1), got {y}")
    if y == 0:
        return 0.0
    a = _ERF_INV_A
    ln = math.log1p(-y * y)
    b = 2 / (math.pi * a) + ln / 2
    x = math.copysign(math.sqrt(math.sqrt(b * b - ln / a) - b), y)
    for _ in range(50):
        step = (math.erf(x) - y) / (2 / math.sqrt(math.pi) * math.exp(-x * x))
        x -= step
        if abs(step) <= 1e-15 * max(1.0, abs(x)):
            break
    return x


def threshold_uniform(L_max: int, epsilon: float) -> ThresholdResult:
    """Uniform law: T = (1 - eps) L_max + 1, capped at L_max."""
    _check_epsilon(epsilon)
    T = (1 - epsilon) * L_max + 1
    return ThresholdResult("uniform", min(T, float(L_max)), epsilon, diagnostics={"T_formula": T})


def threshold_halfnormal(lengths, L_max: int, epsilon: float) -> ThresholdResult:
    """Half-normal law with sigma = sqrt(pi/2) * mean(lengths)."""
    lengths = np.asarray(lengths, dtype=np.float64)
    if lengths.size == 0:
        raise ValueError("half-normal threshold needs at least one length")
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    sigma = math.sqrt(math.pi / 2) * float(lengths.mean())
    scale = sigma * math.sqrt(2)
    arg = math.erf(L_max / scale) - epsilon
    if arg < 0:
        return degenerate("halfnormal", f"epsilon {epsilon:g} exceeds the half-normal mass on [0, L_max]",
                           epsilon, sigma=sigma)
    T = scale * erf_inv(arg)
    return ThresholdResult("halfnormal", T, epsilon, diagnostics={"sigma": sigma})


def threshold_empirical(hist: LengthHistogram, epsilon: float) -> ThresholdResult:
    """Smallest T whose cumulative count reaches (1 - eps) n."""
    _check_epsilon(epsilon)
    n = hist.n
    if n == 0:
        raise ValueError("empirical threshold needs a nonempty length histogram")
    target = (1 - epsilon) * n
    cum = np.cumsum(hist.counts)
    T = int(np.searchsorted(cum, target - 1e-9 * n, side="left")) + 1
    return ThresholdResult("empirical", float(max(T, 1)), epsilon, diagnostics={"target": target})


def between_class_variance(hist: LengthHistogram) -> np.ndarray:
    """sigma_B^2(T) = W1 W2 (mu1 - mu2)^2 for T = 1..L_max-1 (mu_r are class means)."""
    counts = hist.counts.astype(np.float64)
    k = np.arange(1, hist.L_max + 1, dtype=np.float64)
    n = counts.sum()
    n1 = np.cumsum(counts)[:-1]
    s1 = np.cumsum(k * counts)[:-1]
    n2 = n - n1
    s2 = (k * counts).sum() - s1
    with np.errstate(divide="ignore", invalid="ignore"):
        diff = np.where((n1 > 0) & (n2 > 0), s1 / n1 - s2 / n2, 0.0)
    return (n1 / n) * (n2 / n) * diff * diff


def threshold_otsu(hist: LengthHistogram) -> ThresholdResult:
    """Exhaustive Otsu search over integer T in [1, L_max - 1], ties to smaller T."""
    if np.count_nonzero(hist.counts) < 2:
        return degenerate("otsu", "all curve lengths are identical")
    sb = between_class_variance(hist)
    T = int(np.argmax(sb)) + 1
    return ThresholdResult("otsu", float(T), diagnostics={"sigma_b2": sb})


def _centroid(x: np.ndarray, norm: Norm) -> float:
    return float(np.median(x)) if norm == "l1" else float(x.mean())


def _objective(x: np.ndarray, labels: np.ndarray, centroids: np.ndarray, norm: Norm) -> float:
    r = x - centroids[labels]
    return float(np.abs(r).sum()) if norm == "l1" else float((r * r).sum())


def _lloyd(x: np.ndarray, c: np.ndarray, norm: Norm, max_iter: int = 100):
    labels = None
    for _ in range(max_iter):
        new = (np.abs(x - c[1]) < np.abs(x - c[0])).astype(np.int64)
        for r in (0, 1):
            if not np.any(new == r):
                # reseed the empty cluster at the point farthest from the other centroid
                far = int(np.argmax(np.abs(x - c[1 - r])))
                c[r] = x[far]
                new = (np.abs(x - c[1]) < np.abs(x - c[0])).astype(np.int64)
                new[far] = r
        if labels is not None and np.array_equal(new, labels):
            break
        labels = new
        c = np.array([_centroid(x[labels == r], norm) for r in (0, 1)])
    return labels, c


def cluster_kmeans(lengths, norm: Norm = "l2", init: Init = "random",
                   restarts: int = 10, seed: int = 0) -> ThresholdResult:
    """Two-class 1D k-Means on curve lengths; the upper cluster is meaningful."""
    if norm not in ("l1", "l2"):
        raise ValueError(f"norm must be 'l1' or 'l2', got {norm!r}")
    if init not in ("random", "uniform"):
        raise ValueError(f"init must be 'random' or 'uniform', got {init!r}")
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    method = f"kmeans-{norm}"
    x = np.asarray(lengths, dtype=np.float64)
    if x.size < 2:
        raise ValueError("k-Means needs at least two lengths")
    values = np.unique(x)
    if values.size < 2:
        return degenerate(method, "all curve lengths are identical")

    if init == "uniform":
        lo, span = values[0], values[-1] - values[0]
        starts = [np.array([lo + span / 4, lo + 3 * span / 4])]
    else:
        starts = [np.sort(np.random.default_rng(seed + r).choice(values, 2, replace=False))
                  for r in range(restarts)]

    best = None
    for c0 in starts:
        labels, c = _lloyd(x, c0.astype(np.float64), norm)
        obj = _objective(x, labels, c, norm)
        if best is None or obj < best[0]:
            best = (obj, labels, c)
    obj, labels, c = best
    upper = int(np.argmax(c))
    hi, lo = x[labels == upper], x[labels != upper]
    T = (hi.min() + lo.max()) / 2
    return ThresholdResult(method, float(T), diagnostics={
        "centroids": sorted(c.tolist()),
        "weights": [int(lo.size), int(hi.size)],
        "objective": obj,
    })


def select_meaningful(curves: list[MinimaCurve], result: ThresholdResult) -> list[MinimaCurve]:
    """Curves with length > T, in order of finest-scale position."""
    keep = [c for c in curves if result.is_meaningful(c.length)]
    return sorted(keep, key=lambda c: (c.position, c.birth_step))
