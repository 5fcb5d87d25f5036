import math
from collections import deque

import numpy as np
import pytest
from PIL import Image

from clothbench.errors import MissingScale, NoClothDetected, UnsupportedFormat
from clothbench.masks import (
    BinaryMask,
    GrayImage,
    KeepPolicy,
    Polarity,
    SegmentationConfig,
    area_mm2,
    area_px,
    load_image,
    load_mask,
    save_mask,
    scale_from_plate,
    segment,
)
from tests.conftest import disk_image


def flood_fill_components(bits: np.ndarray) -> list[int]:
    """Independent 4-connected component sizes (BFS oracle)."""
    seen = np.zeros_like(bits, dtype=bool)
    sizes = []
    h, w = bits.shape
    for sy in range(h):
        for sx in range(w):
            if not bits[sy, sx] or seen[sy, sx]:
                continue
            size = 0
            queue = deque([(sy, sx)])
            seen[sy, sx] = True
            while queue:
                y, x = queue.popleft()
                size += 1
                for ny, nx in ((y - 1, x), (y + 1, x), (y, x - 1), (y, x + 1)):
                    if 0 <= ny < h and 0 <= nx < w and bits[ny, nx] and not seen[ny, nx]:
                        seen[ny, nx] = True
                        queue.append((ny, nx))
            sizes.append(size)
    return sorted(sizes, reverse=True)


class TestSegment:
    def test_disk_area_within_two_percent(self):
        mask = segment(disk_image(300, 300, 150, 150, 100))
        analytic = math.pi * 100.0 ** 2
        assert abs(area_px(mask) - analytic) / analytic <= 0.02

    def test_uniform_white_raises(self):
        blank = GrayImage(np.full((50, 50), 255, dtype=np.uint8))
        with pytest.raises(NoClothDetected):
            segment(blank)

    def test_largest_component_survives(self):
        image = disk_image(300, 300, 100, 100, 100)
        pixels = image.pixels.copy()
        yy, xx = np.mgrid[0:300, 0:300]
        pixels[(xx - 260) ** 2 + (yy - 260) ** 2 <= 10 * 10] = 0
        both = GrayImage(pixels)

        kept = segment(both)  # default keeps the largest component
        oracle = flood_fill_components(pixels < 128)
        assert len(oracle) == 2
        assert area_px(kept) == oracle[0]

        everything = segment(both, SegmentationConfig(keep=KeepPolicy.ALL))
        assert area_px(everything) == sum(oracle)

    def test_polarity_flips_selection(self):
        image = disk_image(100, 100, 50, 50, 20, fg=255, bg=0)  # bright cloth
        mask = segment(image, SegmentationConfig(polarity=Polarity.CLOTH_BRIGHTER))
        assert area_px(mask) == area_px(segment(disk_image(100, 100, 50, 50, 20)))

    def test_closing_fills_pinhole(self):
        image = disk_image(200, 200, 100, 100, 60)
        pixels = image.pixels.copy()
        pixels[100, 100] = 255  # one-pixel hole in the disk
        holed = GrayImage(pixels)
        raw = segment(holed, SegmentationConfig(closing_radius=0))
        closed = segment(holed, SegmentationConfig(closing_radius=2))
        assert not raw.bits[100, 100]
        assert closed.bits[100, 100]

    def test_deterministic(self):
        image = disk_image(300, 300, 150, 150, 90)
        a = segment(image, SegmentationConfig(closing_radius=1))
        b = segment(image, SegmentationConfig(closing_radius=1))
        assert np.array_equal(a.bits, b.bits)

    def test_translation_invariant_area(self):
        reference = area_px(segment(disk_image(300, 300, 150, 150, 60)))
        for cx, cy in ((80, 90), (200, 110), (120, 230)):
            moved = area_px(segment(disk_image(300, 300, cx, cy, 60)))
            assert moved == reference

    def test_threshold_bounds_validated(self):
        with pytest.raises(ValueError):
            SegmentationConfig(threshold=300)


class TestAreas:
    def test_empty_mask(self):
        assert area_px(BinaryMask(np.zeros((10, 10), dtype=bool))) == 0

    def test_full_mask(self):
        assert area_px(BinaryMask(np.ones((10, 10), dtype=bool))) == 100

    def test_checkerboard(self):
        yy, xx = np.mgrid[0:10, 0:10]
        board = BinaryMask((xx + yy) % 2 == 0)
        assert area_px(board) == 50

    def test_area_mm2(self):
        bits = np.zeros((20, 20), dtype=bool)
        bits[:10, :10] = True  # 100 px
        assert area_mm2(BinaryMask(bits, scale_mm_per_px=2.0)) == 400.0
        assert area_mm2(BinaryMask(np.zeros((5, 5), dtype=bool), scale_mm_per_px=3.0)) == 0.0

    def test_area_mm2_requires_scale(self):
        with pytest.raises(MissingScale):
            area_mm2(BinaryMask(np.ones((5, 5), dtype=bool)))

    def test_doubling_scale_quadruples_area(self):
        bits = np.ones((7, 11), dtype=bool)
        one = area_mm2(BinaryMask(bits, scale_mm_per_px=1.5))
        two = area_mm2(BinaryMask(bits, scale_mm_per_px=3.0))
        assert two == 4.0 * one

    def test_disk_fixture_mm2(self):
        mask = segment(disk_image(300, 300, 150, 150, 100)).with_scale(1.0)
        assert area_mm2(mask) == pytest.approx(math.pi * 100.0 ** 2, rel=0.02)


class TestCalibration:
    def test_plate_disk(self):
        plate = segment(disk_image(220, 220, 110, 110, 90))
        assert scale_from_plate(plate, 180.0) == pytest.approx(1.0, rel=0.02)

    def test_linear_in_diameter(self):
        plate = segment(disk_image(220, 220, 110, 110, 90))
        assert scale_from_plate(plate, 360.0) == pytest.approx(2.0, rel=0.02)
        assert scale_from_plate(plate, 360.0) == 2.0 * scale_from_plate(plate, 180.0)

    def test_empty_plate_mask(self):
        with pytest.raises(NoClothDetected):
            scale_from_plate(BinaryMask(np.zeros((10, 10), dtype=bool)), 180.0)


class TestRasterIo:
    def test_mask_round_trip(self, tmp_path):
        bits = np.zeros((12, 9), dtype=bool)
        bits[2:7, 3:8] = True
        path = tmp_path / "mask.png"
        save_mask(BinaryMask(bits), path)
        again = load_mask(path, scale_mm_per_px=0.5)
        assert np.array_equal(again.bits, bits)
        assert again.scale_mm_per_px == 0.5

    def test_all_255_is_full_mask(self, tmp_path):
        path = tmp_path / "white.png"
        Image.fromarray(np.full((6, 6), 255, dtype=np.uint8), mode="L").save(path)
        assert area_px(load_mask(path)) == 36

    def test_truncated_file_raises_oserror(self, tmp_path):
        path = tmp_path / "broken.png"
        Image.fromarray(np.zeros((64, 64), dtype=np.uint8), mode="L").save(path)
        path.write_bytes(path.read_bytes()[:60])
        with pytest.raises(OSError):
            load_image(path)

    def test_not_an_image_raises_unsupported(self, tmp_path):
        path = tmp_path / "notes.txt"
        path.write_text("not a raster")
        with pytest.raises(UnsupportedFormat):
            load_image(path)

    def test_rgb_red_luminance_byte_exact(self, tmp_path):
        rgb = np.zeros((4, 4, 3), dtype=np.uint8)
        rgb[:, :, 0] = 255
        path = tmp_path / "red.png"
        Image.fromarray(rgb, mode="RGB").save(path)
        image = load_image(path)
        # fixed-point Rec.601: (299*255 + 500) // 1000 == 76
        assert image.pixels.dtype == np.uint8
        assert np.all(image.pixels == 76)

    def test_rgb_luminance_matches_fixed_point_oracle(self, tmp_path):
        rng = np.random.default_rng(7)
        rgb = rng.integers(0, 256, size=(16, 16, 3), dtype=np.uint8)
        path = tmp_path / "noise.png"
        Image.fromarray(rgb, mode="RGB").save(path)
        image = load_image(path)
        wide = rgb.astype(np.uint64)
        oracle = (299 * wide[:, :, 0] + 587 * wide[:, :, 1] + 114 * wide[:, :, 2] + 500) // 1000
        assert np.array_equal(image.pixels, oracle.astype(np.uint8))
