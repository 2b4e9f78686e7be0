"""End-to-end segmentation pipeline in both variants.

Stage order: grayscale -> binarize (optimal or fixed threshold) -> binary
gradient mask -> gradient magnitude of the mask -> dilation of its support ->
watershed of the dilated mask rendered as a two-level surface. Basins are the
background components carved out by the dilated edge band; dams form inside
the band. Every intermediate is retained and timed.
"""
from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field

import numpy as np

from .gradient import binary_gradient_mask, quantize_magnitude, sobel
from .morphology import StructuringElement, dilate, se_square3
from .raster import BinaryImage, ColorImage, GrayImage, to_grayscale
from .threshold import (
    DegenerateHistogram,
    ThresholdReport,
    apply_threshold,
    binarize_fixed,
    histogram,
    otsu_threshold,
)
from .watershed import LabelImage, MinimaSet, watershed_transform

STAGE_NAMES = ("s0_gray", "s1_binary", "s2_bgm", "s3_gradmag", "s4_dilated", "s5_labels")


class Mode(enum.Enum):
    WITH_THRESHOLD = "threshold"
    WITHOUT_THRESHOLD = "no-threshold"


class PipelineDegenerate(Exception):
    """A stage could not proceed; ``stage`` names the failing stage."""

    def __init__(self, stage: str, reason: str):
        super().__init__(f"degenerate input at stage {stage}: {reason}")
        self.stage = stage
        self.reason = reason


@dataclass(frozen=True)
class PipelineConfig:
    mode: Mode = Mode.WITH_THRESHOLD
    connectivity: int = 4
    se: StructuringElement = field(default_factory=se_square3)
    fudge: float = 1.0
    fixed_binarize_t: int = 127
    color_seed: int = 1

    def __post_init__(self):
        if not self.fudge > 0:
            raise ValueError(f"fudge must be positive, got {self.fudge}")
        if self.connectivity not in (4, 8):
            raise ValueError(f"connectivity must be 4 or 8, got {self.connectivity}")


@dataclass(frozen=True)
class PipelineResult:
    """All stage images plus wall-clock stage timings (seconds)."""

    s0_gray: GrayImage
    s1_binary: BinaryImage
    s2_bgm: BinaryImage
    s3_gradmag: GrayImage
    s4_dilated: BinaryImage
    s5_labels: LabelImage
    minima: MinimaSet
    threshold_report: ThresholdReport | None
    bgm_report: ThresholdReport
    stage_seconds: tuple[float, float, float, float, float, float]
    total_seconds: float


def run_pipeline(img: ColorImage | GrayImage, cfg: PipelineConfig) -> PipelineResult:
    """Execute all six stages in order; images are bit-reproducible.

    Raises PipelineDegenerate (naming the stage) when optimal thresholding
    meets a constant image. A flat gradient at the mask stage is not an
    error: the empty mask cascades into a single all-frame basin.
    """
    times = []
    t_start = time.perf_counter()

    t0 = time.perf_counter()
    s0 = to_grayscale(img) if isinstance(img, ColorImage) else img
    times.append(time.perf_counter() - t0)

    t0 = time.perf_counter()
    report: ThresholdReport | None = None
    if cfg.mode is Mode.WITH_THRESHOLD:
        try:
            report = otsu_threshold(histogram(s0))
        except DegenerateHistogram as exc:
            raise PipelineDegenerate("s1_binary", str(exc)) from exc
        s1 = apply_threshold(s0, report.threshold)
    else:
        s1 = binarize_fixed(s0, cfg.fixed_binarize_t)
    times.append(time.perf_counter() - t0)

    t0 = time.perf_counter()
    s2, bgm_report = binary_gradient_mask(s1, cfg.fudge)
    times.append(time.perf_counter() - t0)

    t0 = time.perf_counter()
    s3 = quantize_magnitude(sobel(s2).magnitude)
    times.append(time.perf_counter() - t0)

    t0 = time.perf_counter()
    s4 = dilate(BinaryImage(s3.pixels > 0), cfg.se)
    times.append(time.perf_counter() - t0)

    t0 = time.perf_counter()
    surface = GrayImage(np.where(s4.pixels, 255, 0).astype(np.uint8))
    s5, minima = watershed_transform(surface, cfg.connectivity)
    times.append(time.perf_counter() - t0)

    return PipelineResult(
        s0_gray=s0,
        s1_binary=s1,
        s2_bgm=s2,
        s3_gradmag=s3,
        s4_dilated=s4,
        s5_labels=s5,
        minima=minima,
        threshold_report=report,
        bgm_report=bgm_report,
        stage_seconds=tuple(times),
        total_seconds=time.perf_counter() - t_start,
    )


def label_agreement(a: LabelImage, b: LabelImage) -> float:
    """Pixelwise agreement after mapping each a-label to its best-overlap b-label.

    Label 0 (watershed) always maps to 0; basin labels map to the b-label
    sharing the most pixels (smallest such label on ties).
    """
    if a.labels.shape != b.labels.shape:
        raise ValueError("label images must share dimensions")
    flat_a = a.labels.ravel().astype(np.int64)
    flat_b = b.labels.ravel().astype(np.int64)
    nb = b.basin_count + 1
    confusion = np.bincount(flat_a * nb + flat_b, minlength=(a.basin_count + 1) * nb)
    confusion = confusion.reshape(a.basin_count + 1, nb)
    mapping = confusion.argmax(axis=1)
    mapping[0] = 0
    return float((mapping[flat_a] == flat_b).mean())


@dataclass(frozen=True)
class ComparisonReport:
    """Both pipeline variants side by side.

    A variant that degenerated carries None and the failing stage name; the
    agreement rate is computed only when both variants completed.
    """

    with_threshold: PipelineResult | None
    without_threshold: PipelineResult | None
    with_threshold_degenerate_stage: str | None
    without_threshold_degenerate_stage: str | None
    agreement: float | None


def compare_modes(img: ColorImage | GrayImage, cfg: PipelineConfig) -> ComparisonReport:
    """Run both variants and measure how far their segmentations agree."""
    results: dict[Mode, PipelineResult | None] = {}
    stages: dict[Mode, str | None] = {}
    for mode in (Mode.WITH_THRESHOLD, Mode.WITHOUT_THRESHOLD):
        run_cfg = PipelineConfig(
            mode=mode,
            connectivity=cfg.connectivity,
            se=cfg.se,
            fudge=cfg.fudge,
            fixed_binarize_t=cfg.fixed_binarize_t,
            color_seed=cfg.color_seed,
        )
        try:
            results[mode] = run_pipeline(img, run_cfg)
            stages[mode] = None
        except PipelineDegenerate as exc:
            results[mode] = None
            stages[mode] = exc.stage

    with_t = results[Mode.WITH_THRESHOLD]
    without_t = results[Mode.WITHOUT_THRESHOLD]
    agreement = None
    if with_t is not None and without_t is not None:
        agreement = label_agreement(with_t.s5_labels, without_t.s5_labels)
    return ComparisonReport(
        with_threshold=with_t,
        without_threshold=without_t,
        with_threshold_degenerate_stage=stages[Mode.WITH_THRESHOLD],
        without_threshold_degenerate_stage=stages[Mode.WITHOUT_THRESHOLD],
        agreement=agreement,
    )
