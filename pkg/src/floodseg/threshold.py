"""Global optimal thresholding from the gray-level histogram.

The threshold maximizes the between-class variance
``sigma_b^2(t) = w0(t) * w1(t) * (mu0(t) - mu1(t))^2`` where class 0 holds
levels <= t and class 1 holds levels > t. Candidates are compared with exact
integer arithmetic (cross-multiplied rationals), so the reported argmax is
free of float rounding and ties resolve to the smallest t deterministically.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .raster import BinaryImage, GrayImage

LEVELS = 256


class DegenerateHistogram(Exception):
    """Histogram has fewer than 2 distinct populated gray levels."""


@dataclass(frozen=True, eq=False)
class Histogram:
    """Counts per gray level 0..255."""

    counts: np.ndarray  # (256,) int64

    def __post_init__(self):
        arr = np.array(self.counts, dtype=np.int64, copy=True)
        if arr.shape != (LEVELS,):
            raise ValueError(f"histogram needs {LEVELS} bins, got shape {arr.shape}")
        if (arr < 0).any():
            raise ValueError("histogram counts must be non-negative")
        if arr.sum() < 1:
            raise ValueError("histogram must count at least one pixel")
        arr.setflags(write=False)
        object.__setattr__(self, "counts", arr)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def __eq__(self, other) -> bool:
        return isinstance(other, Histogram) and np.array_equal(self.counts, other.counts)


@dataclass(frozen=True)
class ThresholdReport:
    """Chosen threshold plus the criterion value it attained.

    ``degenerate`` marks reports produced on inputs where the criterion had
    no basis to separate two classes (e.g. a flat gradient plane).
    """

    threshold: int
    criterion_value: float
    histogram: Histogram = field(repr=False)
    degenerate: bool = False

    def __post_init__(self):
        if not 0 <= self.threshold <= 255:
            raise ValueError(f"threshold {self.threshold} outside 0..255")
        if self.criterion_value < 0:
            raise ValueError("criterion value must be non-negative")


def histogram(img: GrayImage) -> Histogram:
    return Histogram(np.bincount(img.pixels.ravel(), minlength=LEVELS))


def otsu_threshold(hist: Histogram) -> ThresholdReport:
    """Threshold maximizing between-class variance; smallest maximizer on ties.

    Raises DegenerateHistogram when fewer than 2 gray levels are populated
    (a constant image cannot be split).
    """
    counts = hist.counts
    if np.count_nonzero(counts) < 2:
        raise DegenerateHistogram("need at least 2 distinct populated gray levels")

    total = hist.total
    total_sum = int((counts * np.arange(LEVELS, dtype=np.int64)).sum())

    # sigma_b^2(t) is proportional to (s0*w1 - s1*w0)^2 / (w0*w1); compare
    # candidates by cross-multiplication in unbounded ints.
    best_t = -1
    best_num = 0
    best_den = 1
    w0 = 0
    s0 = 0
    for t in range(LEVELS):
        w0 += int(counts[t])
        s0 += t * int(counts[t])
        w1 = total - w0
        if w0 == 0 or w1 == 0:
            continue
        num = (s0 * w1 - (total_sum - s0) * w0) ** 2
        den = w0 * w1
        if best_t < 0 or num * best_den > best_num * den:
            best_t, best_num, best_den = t, num, den

    sigma2 = best_num / best_den / total / total
    return ThresholdReport(threshold=best_t, criterion_value=sigma2, histogram=hist)


def apply_threshold(img: GrayImage, t: int, max_value: int = 255) -> BinaryImage:
    """Foreground where the pixel strictly exceeds t.

    max_value is the intensity foreground takes when serialized; the
    pipeline keeps it at 255, matching the PGM writer.
    """
    if not 0 <= t <= 255:
        raise ValueError(f"threshold {t} outside 0..255")
    if not 0 <= max_value <= 255:
        raise ValueError(f"max_value {max_value} outside 0..255")
    return BinaryImage(img.pixels > t)


def binarize_fixed(img: GrayImage, t: int = 127) -> BinaryImage:
    """Fixed-threshold binarization; the no-threshold branch of the pipeline."""
    return apply_threshold(img, t)
