"""Sobel field and binary gradient mask tests."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from floodseg import (
    BinaryImage,
    GrayImage,
    binary_gradient_mask,
    quantize_magnitude,
    sobel,
)
from oracles import connected_components, conv_sobel, exhaustive_otsu, naive_histogram

gray_arrays = hnp.arrays(
    np.uint8, hnp.array_shapes(min_dims=2, max_dims=2, min_side=1, max_side=10)
)


class TestSobel:
    def test_constant_zero_field(self):
        field = sobel(GrayImage(np.full((5, 7), 64, np.uint8)))
        assert not field.gx.any() and not field.gy.any() and not field.magnitude.any()

    def test_transpose_swaps_planes(self):
        rng = np.random.default_rng(11)
        pixels = rng.integers(0, 256, (6, 9), dtype=np.uint8)
        field = sobel(GrayImage(pixels))
        field_t = sobel(GrayImage(pixels.T))
        assert np.array_equal(field_t.gx, field.gy.T)
        assert np.array_equal(field_t.gy, field.gx.T)

    def test_vertical_step(self):
        # step 0 -> 255 between columns 2 and 3: |gx| = 1020 on those two
        # columns, zero elsewhere; no vertical variation so gy = 0
        pixels = np.zeros((6, 6), np.uint8)
        pixels[:, 3:] = 255
        field = sobel(GrayImage(pixels))
        expected = np.zeros((6, 6))
        expected[:, 2:4] = 1020.0
        assert np.array_equal(np.abs(field.gx), expected)
        assert not field.gy.any()
        ogx, ogy = conv_sobel(pixels)
        assert np.array_equal(field.gx, ogx) and np.array_equal(field.gy, ogy)

    @settings(max_examples=40)
    @given(pixels=gray_arrays)
    def test_matches_convolution_oracle(self, pixels):
        field = sobel(GrayImage(pixels))
        ogx, ogy = conv_sobel(pixels)
        assert np.array_equal(field.gx, ogx)
        assert np.array_equal(field.gy, ogy)
        assert np.allclose(field.magnitude, np.hypot(ogx, ogy), rtol=0, atol=0)

    @settings(max_examples=40)
    @given(pixels=gray_arrays)
    def test_magnitude_is_euclidean_norm(self, pixels):
        field = sobel(GrayImage(pixels))
        norm = np.sqrt(field.gx**2 + field.gy**2)
        assert np.allclose(field.magnitude, norm, rtol=1e-9, atol=0)

    def test_binary_input_as_two_level_gray(self):
        fg = np.zeros((5, 5), bool)
        fg[2, 2] = True
        field = sobel(BinaryImage(fg))
        as_gray = sobel(GrayImage(np.where(fg, 255, 0).astype(np.uint8)))
        assert np.array_equal(field.magnitude, as_gray.magnitude)

    def test_shift_equivariance_on_interior(self):
        rng = np.random.default_rng(5)
        canvas = rng.integers(0, 256, (16, 16), dtype=np.uint8)
        a = sobel(GrayImage(canvas[0:12, 0:12]))
        b = sobel(GrayImage(canvas[2:14, 3:15]))
        for plane in ("gx", "gy", "magnitude"):
            assert np.array_equal(
                getattr(a, plane)[3:11, 4:11], getattr(b, plane)[1:9, 1:8]
            )

    def test_rectangle_interior_is_flat(self):
        pixels = np.zeros((20, 24), np.uint8)
        pixels[4:15, 6:19] = 200
        mag = sobel(GrayImage(pixels)).magnitude
        assert not mag[6:13, 8:17].any()  # Chebyshev >= 2 inside the border
        assert mag[3:5, 6:19].any()  # the border itself responds


class TestQuantize:
    def test_zero_plane(self):
        out = quantize_magnitude(np.zeros((3, 3)))
        assert not out.pixels.any()

    def test_peak_maps_to_255(self):
        out = quantize_magnitude(np.array([[0.0, 12.5, 50.0]]))
        assert out.pixels[0, 2] == 255
        assert out.pixels[0, 1] == 64  # floor(12.5 * 255/50 + 0.5)


class TestBinaryGradientMask:
    def test_constant_image(self):
        mask, report = binary_gradient_mask(GrayImage(np.full((6, 6), 9, np.uint8)))
        assert not mask.pixels.any()
        assert report.degenerate

    def test_huge_fudge_all_background(self):
        rng = np.random.default_rng(2)
        img = GrayImage(rng.integers(0, 256, (8, 8), dtype=np.uint8))
        mask, report = binary_gradient_mask(img, fudge=1000.0)
        assert report.threshold == 255
        assert not mask.pixels.any()

    def test_rejects_bad_fudge(self):
        with pytest.raises(ValueError):
            binary_gradient_mask(GrayImage(np.zeros((2, 2), np.uint8)), fudge=0.0)

    def test_filled_square_band(self):
        # expected mask derived through the independent oracle chain:
        # convolution -> linear quantization -> exhaustive Otsu -> strict compare
        fg = np.zeros((12, 12), bool)
        fg[3:9, 3:9] = True
        ogx, ogy = conv_sobel(np.where(fg, 255, 0).astype(np.uint8))
        mag = np.hypot(ogx, ogy)
        quant = np.floor(mag * (255.0 / mag.max()) + 0.5).astype(np.uint8)
        t, _ = exhaustive_otsu(naive_histogram(quant))
        expected = quant > t

        mask, report = binary_gradient_mask(BinaryImage(fg))
        assert np.array_equal(mask.pixels, expected)
        assert report.threshold == t

        # closed band: background inside does not connect to background outside
        bg_components = connected_components(~mask.pixels, conn=4)
        outer = next(comp for comp in bg_components if (0, 0) in comp)
        assert (5, 5) not in outer
        # interior and far background stay background
        assert not mask.pixels[5:7, 5:7].any()
        assert not mask.pixels[0, :].any()

    @settings(max_examples=30)
    @given(
        pixels=hnp.arrays(np.uint8, (9, 9)),
        f1=st.floats(0.1, 4.0),
        f2=st.floats(0.1, 4.0),
    )
    def test_mask_shrinks_as_fudge_grows(self, pixels, f1, f2):
        if f1 > f2:
            f1, f2 = f2, f1
        img = GrayImage(pixels)
        loose, _ = binary_gradient_mask(img, fudge=f1)
        tight, _ = binary_gradient_mask(img, fudge=f2)
        assert (loose.pixels | tight.pixels == loose.pixels).all()
