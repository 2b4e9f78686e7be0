"""Histogram, Otsu threshold, and binarization tests."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from floodseg import (
    DegenerateHistogram,
    GrayImage,
    Histogram,
    apply_threshold,
    binarize_fixed,
    histogram,
    otsu_threshold,
)
from oracles import exhaustive_otsu, naive_histogram

gray_arrays = hnp.arrays(
    np.uint8, hnp.array_shapes(min_dims=2, max_dims=2, min_side=1, max_side=12)
)

# Histograms with at least two populated levels.
histograms = (
    st.dictionaries(st.integers(0, 255), st.integers(1, 1000), min_size=2, max_size=20)
    .map(lambda d: [d.get(v, 0) for v in range(256)])
    .filter(lambda counts: sum(c > 0 for c in counts) >= 2)
)


def _hist(counts) -> Histogram:
    return Histogram(np.array(counts, np.int64))


class TestHistogram:
    def test_all_zero_image(self):
        h = histogram(GrayImage(np.zeros((2, 2), np.uint8)))
        assert h.counts[0] == 4 and h.counts[1:].sum() == 0
        assert h.total == 4

    def test_two_extremes(self):
        h = histogram(GrayImage(np.array([[0, 255]], np.uint8)))
        assert h.counts[0] == 1 and h.counts[255] == 1

    def test_random_matches_naive_tally(self):
        rng = np.random.default_rng(7)
        pixels = rng.integers(0, 256, (8, 8), dtype=np.uint8)
        h = histogram(GrayImage(pixels))
        assert h.counts.tolist() == naive_histogram(pixels)


class TestOtsu:
    def test_bimodal(self):
        counts = [0] * 256
        counts[10], counts[200] = 50, 50
        report = otsu_threshold(_hist(counts))
        # criterion is flat on [10, 199]; tie-break picks the lowest
        assert report.threshold == 10
        assert report.criterion_value == 9025.0  # 0.25 * 190**2

    def test_uniform(self):
        report = otsu_threshold(_hist([4] * 256))
        assert report.threshold == 127
        assert report.criterion_value == 4096.0  # 0.25 * 128**2

    def test_constant_degenerate(self):
        counts = [0] * 256
        counts[42] = 99
        with pytest.raises(DegenerateHistogram):
            otsu_threshold(_hist(counts))

    @settings(max_examples=150)
    @given(counts=histograms)
    def test_matches_exhaustive_search(self, counts):
        report = otsu_threshold(_hist(counts))
        oracle_t, oracle_value = exhaustive_otsu(counts)
        assert report.threshold == oracle_t
        assert report.criterion_value == pytest.approx(float(oracle_value), rel=1e-12)

    @settings(max_examples=60)
    @given(counts=histograms, shift=st.integers(1, 40))
    def test_shift_moves_threshold_exactly(self, counts, shift):
        top = max(v for v in range(256) if counts[v] > 0)
        if top + shift > 255:
            shift = 255 - top
        if shift == 0:
            return
        shifted = [0] * 256
        for v in range(256):
            if counts[v]:
                shifted[v + shift] = counts[v]
        assert (
            otsu_threshold(_hist(shifted)).threshold
            == otsu_threshold(_hist(counts)).threshold + shift
        )

    def test_rejects_bad_histogram(self):
        with pytest.raises(ValueError):
            _hist([0] * 256)
        with pytest.raises(ValueError):
            _hist([1] * 255)


class TestApplyThreshold:
    def test_strict_at_boundary(self):
        img = GrayImage(np.array([[100, 150, 200]], np.uint8))
        out = apply_threshold(img, 150)
        assert out.pixels.tolist() == [[False, False, True]]

    def test_t255_all_background(self):
        img = GrayImage(np.array([[0, 128, 255]], np.uint8))
        assert not apply_threshold(img, 255).pixels.any()

    def test_otsu_of_bimodal_selects_upper_mode(self):
        rng = np.random.default_rng(3)
        pixels = rng.choice(np.array([10, 200], np.uint8), (10, 10))
        report = otsu_threshold(histogram(GrayImage(pixels)))
        assert report.threshold == 10
        out = apply_threshold(GrayImage(pixels), report.threshold)
        assert np.array_equal(out.pixels, pixels == 200)

    @settings(max_examples=60)
    @given(pixels=gray_arrays, t1=st.integers(0, 255), t2=st.integers(0, 255))
    def test_foreground_non_increasing_in_t(self, pixels, t1, t2):
        if t1 > t2:
            t1, t2 = t2, t1
        img = GrayImage(pixels)
        assert apply_threshold(img, t1).pixels.sum() >= apply_threshold(img, t2).pixels.sum()

    @settings(max_examples=60)
    @given(pixels=gray_arrays, t=st.integers(0, 255))
    def test_equals_binarize_fixed(self, pixels, t):
        img = GrayImage(pixels)
        assert apply_threshold(img, t) == binarize_fixed(img, t)


class TestBinarizeFixed:
    def test_all_zero(self):
        assert not binarize_fixed(GrayImage(np.zeros((3, 3), np.uint8))).pixels.any()

    def test_all_255(self):
        assert binarize_fixed(GrayImage(np.full((3, 3), 255, np.uint8))).pixels.all()

    def test_full_ramp_counts(self):
        ramp = GrayImage(np.arange(256, dtype=np.uint8).reshape(16, 16))
        assert binarize_fixed(ramp).pixels.sum() == 128  # values 128..255
