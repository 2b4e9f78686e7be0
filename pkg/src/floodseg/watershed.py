"""Discrete watershed transform by flooding simulation.

The image is read as a topographic surface: every regional minimum is pierced
and seeded with its own basin label, the surface floods in increasing gray
value (FIFO among equal values), and dams (label 0) form where floods from
distinct basins meet. Non-plateau pixels attach to the basin of their
steepest descent, so on plateau-free images the basins coincide exactly with
the topographical-distance catchment basins; plateaus are split by flood
arrival order.

``topographical_distance`` is a shortest-path test oracle over the
lower-slope cost and is deliberately capped to small images.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ._flood import flood, label_minima
from .raster import ColorImage, GrayImage

MAX_ORACLE_PIXELS = 64 * 64
_MAX_PIXELS = 1 << 27  # heap key packing limit


class OutOfBounds(Exception):
    pass


class ImageTooLargeForOracle(Exception):
    pass


def _offsets(conn: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    if conn == 4:
        steps = [(-1, 0), (1, 0), (0, -1), (0, 1)]
    elif conn == 8:
        steps = [(-1, 0), (1, 0), (0, -1), (0, 1), (-1, -1), (-1, 1), (1, -1), (1, 1)]
    else:
        raise ValueError(f"connectivity must be 4 or 8, got {conn}")
    dr = np.array([s[0] for s in steps], np.int64)
    dc = np.array([s[1] for s in steps], np.int64)
    return dr, dc, dr * dr + dc * dc


@dataclass(frozen=True, eq=False)
class LabelImage:
    """Total per-pixel labeling: 0 marks watershed pixels, 1..N the basins."""

    labels: np.ndarray  # (h, w) int32
    basin_count: int

    def __post_init__(self):
        arr = np.array(self.labels, dtype=np.int32, copy=True)
        if arr.ndim != 2:
            raise ValueError("labels must be 2-D")
        if arr.min() < 0 or arr.max() > self.basin_count:
            raise ValueError("labels must lie in 0..basin_count")
        arr.setflags(write=False)
        object.__setattr__(self, "labels", arr)

    @property
    def width(self) -> int:
        return self.labels.shape[1]

    @property
    def height(self) -> int:
        return self.labels.shape[0]

    @property
    def watershed_pixel_count(self) -> int:
        return int((self.labels == 0).sum())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LabelImage)
            and self.basin_count == other.basin_count
            and np.array_equal(self.labels, other.labels)
        )


@dataclass(frozen=True, eq=False)
class MinimaSet:
    """Regional minima, one connected component per future basin.

    Component k+1 of ``component_map`` seeds basin label k+1 in the
    transform; components are numbered by their smallest row-major pixel.
    """

    component_map: np.ndarray  # (h, w) int32, 0 where not a minimum
    count: int

    def __post_init__(self):
        arr = np.array(self.component_map, dtype=np.int32, copy=True)
        arr.setflags(write=False)
        object.__setattr__(self, "component_map", arr)

    def __len__(self) -> int:
        return self.count

    @cached_property
    def components(self) -> tuple[np.ndarray, ...]:
        """Raveled pixel indices of each minimum, ascending, by component."""
        flat = self.component_map.ravel()
        order = np.argsort(flat, kind="stable")
        sorted_labels = flat[order]
        out = []
        for k in range(1, self.count + 1):
            lo = np.searchsorted(sorted_labels, k, side="left")
            hi = np.searchsorted(sorted_labels, k, side="right")
            out.append(np.sort(order[lo:hi]))
        return tuple(out)


def regional_minima(f: GrayImage, conn: int = 4) -> MinimaSet:
    """All maximal constant plateaus that have no strictly lower neighbor."""
    dr, dc, _ = _offsets(conn)
    flat = f.pixels.astype(np.int32).ravel()
    comp, count = label_minima(flat, f.height, f.width, dr, dc)
    return MinimaSet(component_map=comp.reshape(f.height, f.width), count=count)


def watershed_transform(f: GrayImage, conn: int = 4) -> tuple[LabelImage, MinimaSet]:
    """Flood the surface from its regional minima; deterministic in (f, conn).

    Returns the label image (0 = dam, 1..N = basins; basin k grows from
    minima component k) together with the minima. The flood is sequential by
    contract: the FIFO tie-break is part of the output's definition.
    """
    if f.width * f.height > _MAX_PIXELS:
        raise ValueError(f"image exceeds {_MAX_PIXELS} pixels")
    dr, dc, d2 = _offsets(conn)
    flat = f.pixels.astype(np.int32).ravel()
    comp, count = label_minima(flat, f.height, f.width, dr, dc)
    labels = flood(flat, comp, f.height, f.width, dr, dc, d2)
    label_img = LabelImage(labels=labels.reshape(f.height, f.width), basin_count=count)
    minima = MinimaSet(component_map=comp.reshape(f.height, f.width), count=count)
    return label_img, minima


def _lower_slope(f: np.ndarray, conn: int) -> np.ndarray:
    h, w = f.shape
    dr, dc, d2 = _offsets(conn)
    ls = np.zeros((h, w))
    for r in range(h):
        for c in range(w):
            best = 0.0
            for k in range(len(dr)):
                rr, cc = r + dr[k], c + dc[k]
                if 0 <= rr < h and 0 <= cc < w:
                    drop = float(f[r, c]) - float(f[rr, cc])
                    if drop > 0:
                        best = max(best, drop / math.sqrt(d2[k]))
            ls[r, c] = best
    return ls


def topographical_distance(
    f: GrayImage, p: tuple[int, int], q: tuple[int, int], conn: int = 4
) -> float:
    """Shortest-path topographical distance between pixels p and q (row, col).

    A step between neighbors u, v of Euclidean length d costs
    ``LS(u) * d`` when descending from u to v, ``LS(v) * d`` when ascending,
    and ``(LS(u) + LS(v)) / 2 * d`` on equal values, where the lower slope
    ``LS(x)`` is the maximal descent rate from x to any neighbor. This is a
    test oracle: images above 64x64 are rejected.
    """
    if f.width * f.height > MAX_ORACLE_PIXELS:
        raise ImageTooLargeForOracle(
            f"oracle capped at {MAX_ORACLE_PIXELS} pixels, got {f.width * f.height}"
        )
    for point in (p, q):
        r, c = point
        if not (0 <= r < f.height and 0 <= c < f.width):
            raise OutOfBounds(f"pixel {point} outside {f.height}x{f.width}")
    dist = topographical_distance_map(f, [p], conn)
    return float(dist[q])


def topographical_distance_map(
    f: GrayImage, sources: list[tuple[int, int]], conn: int = 4
) -> np.ndarray:
    """Lower-slope shortest-path cost from a source set to every pixel.

    Multi-source Dijkstra realization of the point-to-set distance (the
    minimum over the set); shares the cost model of topographical_distance.
    """
    pix = f.pixels.astype(np.int64)
    h, w = pix.shape
    ls = _lower_slope(pix, conn)
    dr, dc, d2 = _offsets(conn)
    steps = [(int(dr[k]), int(dc[k]), math.sqrt(float(d2[k]))) for k in range(len(dr))]

    dist = np.full((h, w), np.inf)
    heap = []
    for r, c in sources:
        dist[r, c] = 0.0
        heapq.heappush(heap, (0.0, r, c))
    while heap:
        d0, r, c = heapq.heappop(heap)
        if d0 > dist[r, c]:
            continue
        for drr, dcc, step in steps:
            rr, cc = r + drr, c + dcc
            if not (0 <= rr < h and 0 <= cc < w):
                continue
            if pix[r, c] > pix[rr, cc]:
                cost = ls[r, c] * step
            elif pix[rr, cc] > pix[r, c]:
                cost = ls[rr, cc] * step
            else:
                cost = 0.5 * (ls[r, c] + ls[rr, cc]) * step
            nd = d0 + cost
            if nd < dist[rr, cc]:
                dist[rr, cc] = nd
                heapq.heappush(heap, (nd, rr, cc))
    return dist


def colorize_labels(l: LabelImage, seed: int = 1) -> ColorImage:
    """Deterministic distinct colors per basin; watershed pixels are black."""
    rng = np.random.default_rng(seed)
    lut = np.zeros((l.basin_count + 1, 3), np.uint8)
    seen = {(0, 0, 0)}
    for i in range(1, l.basin_count + 1):
        while True:
            color = tuple(int(v) for v in rng.integers(0, 256, 3))
            if color not in seen:
                seen.add(color)
                lut[i] = color
                break
    return ColorImage(lut[l.labels])


def labels_to_gray(l: LabelImage) -> GrayImage:
    """Diagnostic view: labels scaled linearly onto 0..255."""
    scaled = (l.labels.astype(np.int64) * 255) // max(l.basin_count, 1)
    return GrayImage(scaled.astype(np.uint8))


def label_summary(l: LabelImage) -> dict:
    """JSON-ready summary: basin count, watershed pixels, per-basin areas."""
    areas = np.bincount(l.labels.ravel(), minlength=l.basin_count + 1)
    return {
        "basin_count": l.basin_count,
        "watershed_pixel_count": l.watershed_pixel_count,
        "basin_areas": [int(a) for a in areas[1:]],
    }
