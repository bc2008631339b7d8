"""Meaningful mode detection in 1D histograms via scale-space minima persistence."""
from ssmodes.curves import LengthHistogram, MinimaCurve, curve_lengths, track_curves
from ssmodes.detection import DetectionConfig, ModeSet, detect_modes, modes_from_boundaries
from ssmodes.scale_space import ScaleGrid, ScaleSpacePlane, build_plane, find_local_minima, sample_gaussian_kernel, smooth
from ssmodes.thresholding import (
    ThresholdResult,
    cluster_kmeans,
    erf_inv,
    select_meaningful,
    threshold_empirical,
    threshold_halfnormal,
    threshold_otsu,
    threshold_uniform,
)

__all__ = [
    "DetectionConfig", "LengthHistogram", "MinimaCurve", "ModeSet", "ScaleGrid", "ScaleSpacePlane",
    "ThresholdResult", "build_plane", "cluster_kmeans", "curve_lengths", "detect_modes", "erf_inv",
    "find_local_minima", "modes_from_boundaries", "sample_gaussian_kernel", "select_meaningful", "smooth",
    "threshold_empirical", "threshold_halfnormal", "threshold_otsu", "threshold_uniform", "track_curves",
]
