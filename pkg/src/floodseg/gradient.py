"""Sobel gradients, gradient magnitude, and the binary gradient mask (BGM)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .raster import BinaryImage, GrayImage
from .threshold import DegenerateHistogram, Histogram, ThresholdReport, otsu_threshold

# Horizontal kernel; positive response for intensity increasing rightward.
# The vertical kernel is its transpose (positive for increase downward).
SOBEL_X = np.array([[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]], dtype=np.float64)


@dataclass(frozen=True, eq=False)
class GradientField:
    """Per-pixel Sobel responses and their Euclidean magnitude."""

    gx: np.ndarray  # (h, w) float64
    gy: np.ndarray  # (h, w) float64
    magnitude: np.ndarray  # (h, w) float64, non-negative

    def __post_init__(self):
        for name in ("gx", "gy", "magnitude"):
            arr = np.asarray(getattr(self, name), dtype=np.float64)
            if arr.shape != self.gx.shape or arr.ndim != 2:
                raise ValueError("gradient planes must share one 2-D shape")
            arr = arr.copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def width(self) -> int:
        return self.gx.shape[1]

    @property
    def height(self) -> int:
        return self.gx.shape[0]


def _as_gray_plane(img: GrayImage | BinaryImage) -> np.ndarray:
    if isinstance(img, BinaryImage):
        return np.where(img.pixels, 255.0, 0.0)
    return img.pixels.astype(np.float64)


def sobel(img: GrayImage | BinaryImage) -> GradientField:
    """3x3 Sobel responses with clamp-to-edge borders.

    Binary inputs are treated as 0/255 gray. Border replication keeps the
    image frame from producing spurious edge responses.
    """
    f = _as_gray_plane(img)
    p = np.pad(f, 1, mode="edge")
    right = p[:-2, 2:] + 2.0 * p[1:-1, 2:] + p[2:, 2:]
    left = p[:-2, :-2] + 2.0 * p[1:-1, :-2] + p[2:, :-2]
    below = p[2:, :-2] + 2.0 * p[2:, 1:-1] + p[2:, 2:]
    above = p[:-2, :-2] + 2.0 * p[:-2, 1:-1] + p[:-2, 2:]
    gx = right - left
    gy = below - above
    return GradientField(gx=gx, gy=gy, magnitude=np.hypot(gx, gy))


def quantize_magnitude(magnitude: np.ndarray) -> GrayImage:
    """Rescale a non-negative magnitude plane linearly onto 0..255.

    The maximum maps to 255; rounding is half up. An all-zero plane maps to
    an all-zero image.
    """
    mag = np.asarray(magnitude, dtype=np.float64)
    peak = mag.max()
    if peak <= 0.0:
        return GrayImage(np.zeros(mag.shape, np.uint8))
    q = np.floor(mag * (255.0 / peak) + 0.5)
    return GrayImage(np.clip(q, 0, 255).astype(np.uint8))


def binary_gradient_mask(
    img: GrayImage | BinaryImage, fudge: float = 1.0
) -> tuple[BinaryImage, ThresholdReport]:
    """Mask of pixels whose quantized Sobel magnitude exceeds a tuned threshold.

    The magnitude plane is quantized to 0..255, thresholded by Otsu, and the
    chosen level is scaled by ``fudge`` (the tuning knob) and clamped to
    0..255 before the strict comparison. The returned report carries the
    tuned (applied) threshold.

    A flat gradient (constant input, no edges) yields an all-background mask
    with the report flagged degenerate rather than an error.
    """
    if not fudge > 0:
        raise ValueError(f"fudge must be positive, got {fudge}")
    field = sobel(img)
    quant = quantize_magnitude(field.magnitude)
    hist = Histogram(np.bincount(quant.pixels.ravel(), minlength=256))

    if field.magnitude.max() <= 0.0:
        report = ThresholdReport(
            threshold=255, criterion_value=0.0, histogram=hist, degenerate=True
        )
        return BinaryImage(np.zeros(quant.pixels.shape, bool)), report

    try:
        base = otsu_threshold(hist)
        raw_t, criterion, degenerate = base.threshold, base.criterion_value, False
    except DegenerateHistogram:
        # Everything quantized onto one positive level: the whole plane is
        # edge response, so pick the level just below it (mask all-foreground
        # at fudge 1.0) and flag the report.
        raw_t = int(np.flatnonzero(hist.counts)[0]) - 1
        criterion, degenerate = 0.0, True

    tuned = int(min(255, max(0, np.floor(raw_t * fudge + 0.5))))
    report = ThresholdReport(
        threshold=tuned, criterion_value=criterion, histogram=hist, degenerate=degenerate
    )
    return BinaryImage(quant.pixels > tuned), report
