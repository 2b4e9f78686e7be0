"""Pixel-buffer types, color-to-gray conversion, and Netpbm (PGM/PPM) file I/O.

All image types are immutable after construction: the backing arrays are
copied in and write-locked, so instances are safe to share across threads.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

_WHITESPACE = b" \t\r\n\x0b\x0c"

# BT.601 luma weights; they sum to 1 so gray triples map to themselves.
_LUMA = np.array([0.299, 0.587, 0.114])


class RasterError(Exception):
    """Base class for image decoding/encoding failures."""


class MalformedHeader(RasterError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class UnsupportedMaxval(RasterError):
    def __init__(self, maxval: int, offset: int):
        super().__init__(f"maxval {maxval} unsupported, only 255 (byte offset {offset})")
        self.maxval = maxval
        self.offset = offset


class TruncatedPixelData(RasterError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class IoFailure(RasterError):
    pass


def _frozen(pixels, dtype) -> np.ndarray:
    arr = np.array(pixels, dtype=dtype, copy=True, order="C")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class GrayImage:
    """8-bit single-channel raster; rows top to bottom."""

    pixels: np.ndarray  # (height, width) uint8

    def __post_init__(self):
        arr = _frozen(self.pixels, np.uint8)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"GrayImage needs a 2-D (h, w) array, got shape {arr.shape}")
        object.__setattr__(self, "pixels", arr)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def __eq__(self, other) -> bool:
        return isinstance(other, GrayImage) and np.array_equal(self.pixels, other.pixels)


@dataclass(frozen=True, eq=False)
class ColorImage:
    """8-bit RGB raster."""

    pixels: np.ndarray  # (height, width, 3) uint8

    def __post_init__(self):
        arr = _frozen(self.pixels, np.uint8)
        if arr.ndim != 3 or arr.shape[2] != 3 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"ColorImage needs a (h, w, 3) array, got shape {arr.shape}")
        object.__setattr__(self, "pixels", arr)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def __eq__(self, other) -> bool:
        return isinstance(other, ColorImage) and np.array_equal(self.pixels, other.pixels)


@dataclass(frozen=True, eq=False)
class BinaryImage:
    """Foreground/background raster; serialized with foreground=255, background=0."""

    pixels: np.ndarray  # (height, width) bool

    def __post_init__(self):
        arr = _frozen(self.pixels, bool)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"BinaryImage needs a 2-D (h, w) array, got shape {arr.shape}")
        object.__setattr__(self, "pixels", arr)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def __eq__(self, other) -> bool:
        return isinstance(other, BinaryImage) and np.array_equal(self.pixels, other.pixels)


def to_grayscale(img: ColorImage) -> GrayImage:
    """BT.601 luma conversion, rounding half away from zero.

    A pure-gray triple (v, v, v) always maps back to v: the weights sum to 1
    and the accumulated float error is far below the 0.5 rounding margin.
    """
    luma = img.pixels.astype(np.float64) @ _LUMA
    return GrayImage(np.clip(np.floor(luma + 0.5), 0, 255).astype(np.uint8))


def _next_token(data: bytes, pos: int) -> tuple[bytes, int, int]:
    """Scan past whitespace and '#' comments; return (token, start, end)."""
    n = len(data)
    while pos < n:
        if data[pos] in _WHITESPACE:
            pos += 1
        elif data[pos] == 0x23:  # '#'
            while pos < n and data[pos] not in b"\r\n":
                pos += 1
        else:
            break
    if pos >= n:
        raise MalformedHeader("unexpected end of file in header", pos)
    start = pos
    while pos < n and data[pos] not in _WHITESPACE and data[pos] != 0x23:
        pos += 1
    return data[start:pos], start, pos


def _header_int(data: bytes, pos: int, what: str) -> tuple[int, int, int]:
    tok, start, end = _next_token(data, pos)
    if not tok.isdigit():
        raise MalformedHeader(f"expected integer {what}, got {tok!r}", start)
    return int(tok), start, end


def _ascii_samples(data: bytes, pos: int, count: int, maxval: int) -> np.ndarray:
    out = np.empty(count, np.uint8)
    for i in range(count):
        try:
            tok, start, pos = _next_token(data, pos)
        except MalformedHeader as exc:
            raise TruncatedPixelData(
                f"expected {count} samples, file ended after {i}", exc.offset
            ) from None
        if not tok.isdigit():
            raise TruncatedPixelData(f"invalid sample {tok!r}", start)
        value = int(tok)
        if value > maxval:
            raise TruncatedPixelData(f"sample {value} exceeds maxval {maxval}", start)
        out[i] = value
    return out


def read_image(path) -> ColorImage | GrayImage:
    """Parse a PGM (P2/P5) into GrayImage or a PPM (P3/P6) into ColorImage.

    Only maxval 255 is accepted. Header comments are tolerated; binary
    payloads must follow the maxval after a single whitespace byte.
    """
    data = Path(path).read_bytes()
    magic, magic_off, pos = _next_token(data, 0)
    if magic not in (b"P2", b"P3", b"P5", b"P6"):
        raise MalformedHeader(f"unsupported magic {magic!r}", magic_off)
    width, off, pos = _header_int(data, pos, "width")
    if width < 1:
        raise MalformedHeader("width must be >= 1", off)
    height, off, pos = _header_int(data, pos, "height")
    if height < 1:
        raise MalformedHeader("height must be >= 1", off)
    maxval, maxval_off, pos = _header_int(data, pos, "maxval")
    if maxval != 255:
        raise UnsupportedMaxval(maxval, maxval_off)

    channels = 3 if magic in (b"P3", b"P6") else 1
    count = width * height * channels

    if magic in (b"P5", b"P6"):
        if pos >= len(data) or data[pos] not in _WHITESPACE:
            raise MalformedHeader("expected single whitespace after maxval", pos)
        payload = data[pos + 1 : pos + 1 + count]
        if len(payload) < count:
            raise TruncatedPixelData(
                f"expected {count} payload bytes, got {len(payload)}", len(data)
            )
        flat = np.frombuffer(payload, np.uint8)
    else:
        flat = _ascii_samples(data, pos, count, maxval)

    if channels == 3:
        return ColorImage(flat.reshape(height, width, 3))
    return GrayImage(flat.reshape(height, width))


def write_image(img: GrayImage | BinaryImage | ColorImage, path) -> None:
    """Write GrayImage/BinaryImage as binary PGM (P5), ColorImage as PPM (P6).

    Roundtrips bit-exactly through read_image.
    """
    if isinstance(img, GrayImage):
        payload = img.pixels.tobytes()
        magic = b"P5"
    elif isinstance(img, BinaryImage):
        payload = np.where(img.pixels, 255, 0).astype(np.uint8).tobytes()
        magic = b"P5"
    elif isinstance(img, ColorImage):
        payload = img.pixels.tobytes()
        magic = b"P6"
    else:
        raise TypeError(f"cannot serialize {type(img).__name__}")
    header = b"%s\n%d %d\n255\n" % (magic, img.width, img.height)
    try:
        Path(path).write_bytes(header + payload)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
