"""Grayscale segmentation and HSV-seeded color reduction."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ssmodes.detection import DetectionConfig, ModeSet, detect_modes

MIN_SUBDIVIDE_PIXELS = 64
HIERARCHIES = ("v", "vsh")


def gray_histogram(img: np.ndarray) -> np.ndarray:
    """256-bin histogram of an 8-bit grayscale image."""
    img = np.asarray(img)
    if img.ndim != 2:
        raise ValueError(f"expected a 2-D grayscale image, got shape {img.shape}")
    return np.bincount(img.ravel().astype(np.int64), minlength=256).astype(np.float64)


def classify(values: np.ndarray, boundaries) -> np.ndarray:
    """Class j for b_j <= v < b_{j+1}, with b_0 = 0 and b_{m+1} = 256."""
    return np.searchsorted(np.asarray(boundaries, dtype=np.int64), values, side="right")


@dataclass
class GraySegmentation:
    labels: np.ndarray
    class_means: np.ndarray
    modes: ModeSet

    def render(self) -> np.ndarray:
        return np.rint(self.class_means[self.labels]).astype(np.uint8)


def segment_gray(img: np.ndarray, cfg: DetectionConfig | None = None) -> GraySegmentation:
    img = np.asarray(img)
    modes = detect_modes(gray_histogram(img), cfg)
    labels = classify(img, modes.boundaries)
    n_classes = len(modes.boundaries) + 1
    sums = np.bincount(labels.ravel(), weights=img.ravel().astype(np.float64), minlength=n_classes)
    counts = np.bincount(labels.ravel(), minlength=n_classes)
    edges = np.array([0, *modes.boundaries, 256], dtype=np.float64)
    # classes without pixels fall back to the middle of their support
    means = np.where(counts > 0, sums / np.maximum(counts, 1), (edges[:-1] + edges[1:] - 1) / 2)
    return GraySegmentation(labels, means, modes)


def rgb_to_hsv(rgb) -> np.ndarray:
    """8-bit RGB (..., 3) to HSV with H in [0, 360), S and V in [0, 1]."""
    rgb = np.asarray(rgb, dtype=np.float64)
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    mx = rgb.max(axis=-1)
    mn = rgb.min(axis=-1)
    delta = mx - mn
    v = mx / 255.0
    s = np.divide(delta, mx, out=np.zeros_like(mx), where=mx > 0)
    safe = np.where(delta > 0, delta, 1.0)
    h = np.select(
        [delta == 0, mx == r, mx == g],
        [0.0, ((g - b) / safe) % 6.0, (b - r) / safe + 2.0],
        (r - g) / safe + 4.0,
    ) * 60.0
    h = np.where(h >= 360.0, h - 360.0, h)
    return np.stack([h, s, v], axis=-1)


def hsv_to_rgb(hsv) -> np.ndarray:
    """Inverse of :func:`rgb_to_hsv`, returning float RGB in [0, 255]."""
    hsv = np.asarray(hsv, dtype=np.float64)
    h, s, v = hsv[..., 0], hsv[..., 1], hsv[..., 2]
    c = v * s
    hp = (h % 360.0) / 60.0
    x = c * (1 - np.abs(hp % 2 - 1))
    z = np.zeros_like(c)
    sector = np.floor(hp).astype(np.int64) % 6
    table = [(c, x, z), (x, c, z), (z, c, x), (z, x, c), (x, z, c), (c, z, x)]
    out = np.zeros(hsv.shape, dtype=np.float64)
    for i, (rr, gg, bb) in enumerate(table):
        m = sector == i
        out[..., 0] = np.where(m, rr, out[..., 0])
        out[..., 1] = np.where(m, gg, out[..., 1])
        out[..., 2] = np.where(m, bb, out[..., 2])
    return (out + (v - c)[..., None]) * 255.0


def _unit_bins(x: np.ndarray) -> np.ndarray:
    return np.clip(np.rint(x * 255.0), 0, 255).astype(np.int64)


def _hue_bins(h: np.ndarray) -> np.ndarray:
    return np.clip(np.floor(h / 360.0 * 256.0), 0, 255).astype(np.int64)


def _split(labels: np.ndarray, channel: np.ndarray, cfg: DetectionConfig) -> np.ndarray:
    """Refine every class with enough pixels by the modes of ``channel`` (0..255)."""
    out = np.zeros_like(labels)
    next_label = 0
    for cls in np.unique(labels):
        idx = np.flatnonzero(labels == cls)
        if idx.size < MIN_SUBDIVIDE_PIXELS:
            out[idx] = next_label
            next_label += 1
            continue
        values = channel[idx]
        hist = np.bincount(values, minlength=256).astype(np.float64)
        sub = classify(values, detect_modes(hist, cfg).boundaries)
        # compact subclass ids so that only occupied classes survive
        _, sub = np.unique(sub, return_inverse=True)
        out[idx] = next_label + sub
        next_label += int(sub.max()) + 1
    return out


@dataclass
class Palette:
    colors: np.ndarray
    labels: np.ndarray
    centroids: np.ndarray
    seeds: np.ndarray
    objective_history: list[float] = field(default_factory=list)


def color_objective(pixels: np.ndarray, centroids: np.ndarray, labels: np.ndarray) -> float:
    d = pixels - centroids[labels]
    return float(np.einsum("ij,ij->", d, d))


def _assign(pixels: np.ndarray, sq_norms: np.ndarray, centroids: np.ndarray) -> tuple[np.ndarray, float]:
    """Nearest centroid per pixel and the resulting sum of squared distances."""
    d = pixels @ (-2.0 * centroids.T)
    d += (centroids * centroids).sum(1)
    labels = np.argmin(d, axis=1)
    best = np.take_along_axis(d, labels[:, None], axis=1)[:, 0]
    return labels, float(np.maximum(best + sq_norms, 0.0).sum())


def kmeans_colors(pixels: np.ndarray, seeds: np.ndarray, max_iter: int = 50, tol: float = 0.5):
    """Lloyd iterations in RGB from the given seed centroids.

    Returns labels, centroids and the objective after every assignment step.
    Stops once no centroid moves by ``tol`` or more.
    """
    centroids = seeds.astype(np.float64).copy()
    sq_norms = (pixels * pixels).sum(1)
    labels, obj = _assign(pixels, sq_norms, centroids)
    history = [obj]
    k = centroids.shape[0]
    for _ in range(max_iter):
        counts = np.bincount(labels, minlength=k)
        new = centroids.copy()
        for ch in range(3):
            sums = np.bincount(labels, weights=pixels[:, ch], minlength=k)
            new[:, ch] = np.where(counts > 0, sums / np.maximum(counts, 1), centroids[:, ch])
        shift = float(np.abs(new - centroids).max())
        centroids = new
        labels, obj = _assign(pixels, sq_norms, centroids)
        history.append(obj)
        if shift < tol:
            break
    return labels, centroids, history


def reduce_colors(img: np.ndarray, cfg: DetectionConfig | None = None,
                  hierarchy: str = "v") -> tuple[np.ndarray, Palette]:
    """Reduce the colors of an RGB image.

    Classes come from the modes of the V histogram (and, for ``"vsh"``, of
    the S then H histograms inside each class); their mean colors seed a
    k-Means over all pixels.
    """
    if hierarchy not in HIERARCHIES:
        raise ValueError(f"hierarchy must be one of {HIERARCHIES}, got {hierarchy!r}")
    img = np.asarray(img)
    if img.ndim != 3 or img.shape[2] != 3:
        raise ValueError(f"expected an (h, w, 3) RGB image, got shape {img.shape}")
    cfg = cfg or DetectionConfig()
    h, w, _ = img.shape
    pixels = img.reshape(-1, 3).astype(np.float64)
    hsv = rgb_to_hsv(img.reshape(-1, 3))

    v_bins = _unit_bins(hsv[:, 2])
    labels = classify(v_bins, detect_modes(np.bincount(v_bins, minlength=256).astype(np.float64), cfg).boundaries)
    _, labels = np.unique(labels, return_inverse=True)
    if hierarchy == "vsh":
        labels = _split(labels, _unit_bins(hsv[:, 1]), cfg)
        labels = _split(labels, _hue_bins(hsv[:, 0]), cfg)

    k = int(labels.max()) + 1
    counts = np.bincount(labels, minlength=k)
    seeds = np.stack([np.bincount(labels, weights=pixels[:, ch], minlength=k) for ch in range(3)], axis=1)
    seeds /= counts[:, None]

    final, centroids, history = kmeans_colors(pixels, seeds)
    used, final = np.unique(final, return_inverse=True)
    colors = np.clip(np.rint(centroids[used]), 0, 255).astype(np.uint8)
    out = colors[final].reshape(h, w, 3)
    palette = Palette(colors, final.reshape(h, w), centroids[used], seeds, history)
    return out, palette
