"""Binary dilation by a structuring element.

Dilation is the Minkowski-style union of structuring-element translates over
the foreground: probing out of frame contributes nothing, and the probe uses
the reflected element so the union and probe readings coincide (identical for
symmetric elements such as the default 3x3 square).
"""
from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .raster import BinaryImage

_OFFSET_RE = re.compile(r"\((-?\d+),(-?\d+)\)")


@dataclass(frozen=True)
class StructuringElement:
    """Set of (dx, dy) displacements relative to the origin.

    dx moves along columns, dy along rows. Offsets may be negative and are
    not size-capped; the dilated image always keeps the input's size.
    """

    offsets: tuple[tuple[int, int], ...]
    name: str | None = None

    def __post_init__(self):
        offs = tuple(sorted((int(dx), int(dy)) for dx, dy in self.offsets))
        if not offs:
            raise ValueError("structuring element needs at least one offset")
        if len(set(offs)) != len(offs):
            raise ValueError("structuring element offsets must be unique")
        object.__setattr__(self, "offsets", offs)


def se_square3() -> StructuringElement:
    """The default 3x3 square with the origin at its center."""
    offsets = tuple((dx, dy) for dy in (-1, 0, 1) for dx in (-1, 0, 1))
    return StructuringElement(offsets=offsets, name="square3")


def parse_structuring_element(spec: str) -> StructuringElement:
    """Parse the CLI syntax: ``square3`` or ``offsets:(dx,dy);(dx,dy);...``."""
    if spec == "square3":
        return se_square3()
    if spec.startswith("offsets:"):
        body = spec[len("offsets:") :]
        parts = [p for p in body.split(";") if p]
        offsets = []
        for part in parts:
            m = _OFFSET_RE.fullmatch(part.strip())
            if m is None:
                raise ValueError(f"bad offset {part!r}, expected (dx,dy)")
            offsets.append((int(m.group(1)), int(m.group(2))))
        return StructuringElement(offsets=tuple(offsets))
    raise ValueError(f"unknown structuring element spec {spec!r}")


def dilate(img: BinaryImage, se: StructuringElement) -> BinaryImage:
    """Union of the foreground translated by every structuring-element offset.

    Equivalently: an output pixel is foreground iff some offset of the
    reflected element lands in-bounds on an input foreground pixel.
    Out-of-frame probes are background; the output is clipped to the frame.
    """
    src = img.pixels
    h, w = src.shape
    out = np.zeros((h, w), bool)
    for dx, dy in se.offsets:
        # Translate the foreground by (+dx, +dy), clipped to the frame.
        if abs(dx) >= w or abs(dy) >= h:
            continue
        dst_r = slice(max(dy, 0), h + min(dy, 0))
        dst_c = slice(max(dx, 0), w + min(dx, 0))
        src_r = slice(max(-dy, 0), h + min(-dy, 0))
        src_c = slice(max(-dx, 0), w + min(-dx, 0))
        out[dst_r, dst_c] |= src[src_r, src_c]
    return BinaryImage(out)
