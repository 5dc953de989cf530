"""Tests for integral images, equalization, resizing, and prep plumbing."""

import numpy as np
import pytest

from emoface.errors import BadShape, DegenerateBox
from emoface.faceprep import (
    BoundingBox,
    crop_resize,
    expand_box,
    histogram_equalize,
    integral_image,
    rect_sum,
    to_gray,
    to_rgb,
)
from emoface.faceprep.image import decode_image, encode_png, round_half_up


class TestIntegralImage:
    def test_two_by_two(self):
        table = integral_image(np.array([[1, 2], [3, 4]], dtype=np.uint8))
        np.testing.assert_array_equal(table, [[1, 3], [4, 10]])

    def test_all_zero(self):
        table = integral_image(np.zeros((4, 5), dtype=np.uint8))
        np.testing.assert_array_equal(table, 0)

    def test_rect_sums_match_brute_force_exhaustively(self):
        rng = np.random.default_rng(12)
        for _ in range(20):
            h, w = rng.integers(1, 6, size=2)
            img = rng.integers(0, 256, size=(h, w)).astype(np.uint8)
            table = integral_image(img)
            for y in range(h):
                for x in range(w):
                    for hh in range(1, h - y + 1):
                        for ww in range(1, w - x + 1):
                            brute = int(img[y : y + hh, x : x + ww].sum())
                            assert rect_sum(table, x, y, ww, hh) == brute

    def test_rejects_multichannel(self):
        with pytest.raises(BadShape):
            integral_image(np.zeros((3, 3, 3), dtype=np.uint8))


def _equalize_oracle_gray(img):
    """Hand-CDF oracle: explicit counting loops, no numpy histogram."""
    flat = list(img.ravel())
    n = len(flat)
    counts = [0] * 256
    for v in flat:
        counts[v] += 1
    cdf = []
    running = 0
    for c in counts:
        running += c
        cdf.append(running)
    cdf_min = next((cdf[v] for v in range(256) if counts[v]), 0)
    if n - cdf_min <= 0:
        return img.copy()
    out = np.empty_like(img)
    for idx, v in enumerate(img.ravel()):
        h = np.floor((cdf[v] - cdf_min) / (n - cdf_min) * 255.0 + 0.5)
        out.ravel()[idx] = int(min(max(h, 0), 255))
    return out


class TestHistogramEqualize:
    def test_worked_example(self):
        img = np.array([[52, 55], [61, 59]], dtype=np.uint8)
        out = histogram_equalize(img)
        np.testing.assert_array_equal(out, [[0, 85], [255, 170]])

    def test_ramp_is_fixed_point(self):
        ramp = np.arange(256, dtype=np.uint8).reshape(16, 16)
        np.testing.assert_array_equal(histogram_equalize(ramp), ramp)

    def test_constant_image_unchanged(self):
        img = np.full((5, 7), 42, dtype=np.uint8)
        np.testing.assert_array_equal(histogram_equalize(img), img)

    def test_matches_oracle_on_random_images(self):
        rng = np.random.default_rng(77)
        for _ in range(100):
            h, w = rng.integers(1, 17, size=2)
            img = rng.integers(0, 256, size=(h, w)).astype(np.uint8)
            np.testing.assert_array_equal(
                histogram_equalize(img), _equalize_oracle_gray(img)
            )

    def test_monotone_and_full_range(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            img = rng.integers(0, 256, size=(12, 12)).astype(np.uint8)
            if len(np.unique(img)) < 2:
                continue
            out = histogram_equalize(img)
            assert out.min() == 0
            assert out.max() == 255
            # monotone: order of distinct input levels is preserved
            levels = np.unique(img)
            mapped = [int(out[img == v][0]) for v in levels]
            assert mapped == sorted(mapped)

    def test_rgb_rescales_channels_by_luminance_ratio(self):
        rng = np.random.default_rng(9)
        img = rng.integers(40, 200, size=(8, 8, 3)).astype(np.uint8)
        out = histogram_equalize(img)
        assert out.shape == img.shape
        y_in = to_gray(img).astype(float)
        mapping_target = histogram_equalize(to_gray(img)).astype(float)
        ratio = mapping_target / np.where(y_in > 0, y_in, 1.0)
        expect = np.clip(np.floor(img * ratio[:, :, None] + 0.5), 0, 255)
        np.testing.assert_array_equal(out, expect.astype(np.uint8))

    def test_black_pixels_untouched(self):
        img = np.zeros((4, 4, 3), dtype=np.uint8)
        img[0, 0] = [200, 100, 50]
        out = histogram_equalize(img)
        np.testing.assert_array_equal(out[1:, :], 0)


def _bilinear_oracle(region, out_size):
    """Scalar bilinear resampling with half-pixel centers, one pixel at a time."""
    h, w = region.shape[:2]
    out = np.zeros((out_size, out_size) + region.shape[2:])
    for i in range(out_size):
        for j in range(out_size):
            sy = min(max((i + 0.5) * h / out_size - 0.5, 0), h - 1)
            sx = min(max((j + 0.5) * w / out_size - 0.5, 0), w - 1)
            y0, x0 = int(np.floor(sy)), int(np.floor(sx))
            y1, x1 = min(y0 + 1, h - 1), min(x0 + 1, w - 1)
            ty, tx = sy - y0, sx - x0
            val = (
                region[y0, x0] * (1 - ty) * (1 - tx)
                + region[y0, x1] * (1 - ty) * tx
                + region[y1, x0] * ty * (1 - tx)
                + region[y1, x1] * ty * tx
            )
            out[i, j] = val
    return np.clip(np.floor(out + 0.5), 0, 255).astype(np.uint8)


class TestCropResize:
    def test_unit_scale_identity(self):
        rng = np.random.default_rng(3)
        img = rng.integers(0, 256, size=(128, 128, 3)).astype(np.uint8)
        out = crop_resize(img, BoundingBox(0, 0, 128, 128), 128)
        np.testing.assert_array_equal(out, img)

    def test_constant_region_stays_constant(self):
        img = np.full((40, 60, 3), 93, dtype=np.uint8)
        out = crop_resize(img, BoundingBox(5, 5, 30, 20), 128)
        np.testing.assert_array_equal(out, 93)

    def test_two_by_two_upsample_matches_oracle(self):
        img = np.zeros((2, 2, 3), dtype=np.uint8)
        img[1, :, :] = 255
        out = crop_resize(img, BoundingBox(0, 0, 2, 2), 4)
        oracle = _bilinear_oracle(img.astype(float), 4)
        np.testing.assert_array_equal(out, oracle)
        # half-pixel centers land at source rows [0, .25, .75, 1.25->clamped]
        np.testing.assert_array_equal(out[:, 0, 0], [0, 64, 191, 255])

    def test_matches_oracle_on_random_crops(self):
        rng = np.random.default_rng(21)
        img = rng.integers(0, 256, size=(30, 30, 3)).astype(np.uint8)
        for _ in range(10):
            x, y = rng.integers(0, 20, size=2)
            w, h = rng.integers(2, 10, size=2)
            out = crop_resize(img, BoundingBox(int(x), int(y), int(w), int(h)), 8)
            region = img[y : y + h, x : x + w].astype(float)
            np.testing.assert_array_equal(out, _bilinear_oracle(region, 8))

    def test_output_range_and_shape(self):
        rng = np.random.default_rng(4)
        img = rng.integers(0, 256, size=(50, 70)).astype(np.uint8)  # grayscale in
        out = crop_resize(img, BoundingBox(-10, -10, 200, 200), 128)
        assert out.shape == (128, 128, 3)
        assert out.dtype == np.uint8

    def test_degenerate_box(self):
        img = np.zeros((10, 10, 3), dtype=np.uint8)
        with pytest.raises(DegenerateBox):
            crop_resize(img, BoundingBox(20, 20, 5, 5), 16)
        with pytest.raises(DegenerateBox):
            crop_resize(img, BoundingBox(0, 0, 0, 3), 16)


class TestBoxHelpers:
    def test_expand_box(self):
        box = expand_box(BoundingBox(10, 20, 100, 50))
        assert box == BoundingBox(0, 15, 120, 60)

    def test_iou_symmetry_and_range(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            a = BoundingBox(*(int(v) for v in rng.integers(0, 30, 2)), *(int(v) for v in rng.integers(1, 30, 2)))
            b = BoundingBox(*(int(v) for v in rng.integers(0, 30, 2)), *(int(v) for v in rng.integers(1, 30, 2)))
            assert a.iou(b) == pytest.approx(b.iou(a))
            assert 0.0 <= a.iou(b) <= 1.0
        box = BoundingBox(3, 4, 10, 12)
        assert box.iou(box) == 1.0


class TestImageHelpers:
    def test_gray_round_trip(self):
        img = np.array([[0, 128, 255]], dtype=np.uint8)
        rgb = to_rgb(img)
        assert rgb.shape == (1, 3, 3)
        np.testing.assert_array_equal(to_gray(rgb), img)

    def test_png_round_trip(self):
        rng = np.random.default_rng(2)
        img = rng.integers(0, 256, size=(9, 7, 3)).astype(np.uint8)
        np.testing.assert_array_equal(decode_image(encode_png(img)), img)

    def test_undecodable(self):
        from emoface.errors import UndecodableImage

        with pytest.raises(UndecodableImage):
            decode_image(b"definitely not an image")

    def test_round_half_up(self):
        np.testing.assert_array_equal(
            round_half_up(np.array([0.5, 1.5, 2.4, -0.5])), [1.0, 2.0, 2.0, 0.0]
        )
