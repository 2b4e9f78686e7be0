"""Watershed segmentation with optimal thresholding, gradient masking, and dilation."""

from .gradient import GradientField, binary_gradient_mask, quantize_magnitude, sobel
from .morphology import (
    StructuringElement,
    dilate,
    parse_structuring_element,
    se_square3,
)
from .pipeline import (
    ComparisonReport,
    Mode,
    PipelineConfig,
    PipelineDegenerate,
    PipelineResult,
    compare_modes,
    label_agreement,
    run_pipeline,
)
from .raster import (
    BinaryImage,
    ColorImage,
    GrayImage,
    IoFailure,
    MalformedHeader,
    RasterError,
    TruncatedPixelData,
    UnsupportedMaxval,
    read_image,
    to_grayscale,
    write_image,
)
from .threshold import (
    DegenerateHistogram,
    Histogram,
    ThresholdReport,
    apply_threshold,
    binarize_fixed,
    histogram,
    otsu_threshold,
)
from .watershed import (
    ImageTooLargeForOracle,
    LabelImage,
    MinimaSet,
    OutOfBounds,
    colorize_labels,
    label_summary,
    labels_to_gray,
    regional_minima,
    topographical_distance,
    topographical_distance_map,
    watershed_transform,
)

__version__ = "0.1.0"

__all__ = [
    "BinaryImage",
    "ColorImage",
    "ComparisonReport",
    "DegenerateHistogram",
    "GradientField",
    "GrayImage",
    "Histogram",
    "ImageTooLargeForOracle",
    "IoFailure",
    "LabelImage",
    "MalformedHeader",
    "MinimaSet",
    "Mode",
    "OutOfBounds",
    "PipelineConfig",
    "PipelineDegenerate",
    "PipelineResult",
    "RasterError",
    "StructuringElement",
    "ThresholdReport",
    "TruncatedPixelData",
    "UnsupportedMaxval",
    "apply_threshold",
    "binarize_fixed",
    "binary_gradient_mask",
    "colorize_labels",
    "compare_modes",
    "dilate",
    "histogram",
    "label_agreement",
    "label_summary",
    "labels_to_gray",
    "otsu_threshold",
    "parse_structuring_element",
    "quantize_magnitude",
    "read_image",
    "regional_minima",
    "run_pipeline",
    "se_square3",
    "sobel",
    "to_grayscale",
    "topographical_distance",
    "topographical_distance_map",
    "watershed_transform",
    "write_image",
]
