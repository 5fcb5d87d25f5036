"""Binary-mask substrate: thresholding, component filtering, areas, calibration.

Masks feed two consumers: drape-area measurement (zenithal images of cloth on
a plate) and manipulation metrics (before/after coverage masks).  Everything
here is a pure function over immutable values, deterministic down to the bit,
so batches can run in parallel and outputs can be golden-tested.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path

import numpy as np
from scipy import ndimage

from .errors import MissingScale, NoClothDetected, UnsupportedFormat


@dataclass(frozen=True, eq=False)
class GrayImage:
    """8-bit grayscale raster; ``pixels`` is a (height, width) uint8 array."""

    pixels: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.pixels)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("image must be a 2-D array with positive shape")
        if arr.dtype != np.uint8:
            if arr.min() < 0 or arr.max() > 255:
                raise ValueError("intensities must lie in [0, 255]")
            arr = arr.astype(np.uint8)
        object.__setattr__(self, "pixels", arr)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


@dataclass(frozen=True, eq=False)
class BinaryMask:
    """Boolean pixel grid with optional physical scale in mm per pixel."""

    bits: np.ndarray
    scale_mm_per_px: float | None = None

    def __post_init__(self) -> None:
        arr = np.asarray(self.bits)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("mask must be a 2-D array with positive shape")
        if arr.dtype != bool:
            arr = arr.astype(bool)
        object.__setattr__(self, "bits", arr)
        if self.scale_mm_per_px is not None:
            s = float(self.scale_mm_per_px)
            if not math.isfinite(s) or s <= 0:
                raise ValueError(f"scale must be finite and > 0, got {s}")
            object.__setattr__(self, "scale_mm_per_px", s)

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    @property
    def height(self) -> int:
        return self.bits.shape[0]

    def with_scale(self, scale_mm_per_px: float) -> "BinaryMask":
        return replace(self, scale_mm_per_px=scale_mm_per_px)


class Polarity(Enum):
    CLOTH_DARKER = "cloth_darker"
    CLOTH_BRIGHTER = "cloth_brighter"


class KeepPolicy(Enum):
    LARGEST_COMPONENT = "largest_component"
    ALL = "all"


@dataclass(frozen=True)
class SegmentationConfig:
    """Classical threshold segmentation; the built-in contour detector.

    Pixels strictly on the configured side of ``threshold`` are cloth; a
    morphological closing with a disk of ``closing_radius`` px smooths texture
    speckle before the component filter picks the drape blob.
    """

    threshold: int = 128
    polarity: Polarity = Polarity.CLOTH_DARKER
    closing_radius: int = 0
    keep: KeepPolicy = KeepPolicy.LARGEST_COMPONENT

    def __post_init__(self) -> None:
        if not 0 <= self.threshold <= 255:
            raise ValueError(f"threshold must lie in [0, 255], got {self.threshold}")
        if self.closing_radius < 0:
            raise ValueError("closing radius must be >= 0")


def _disk_footprint(radius: int) -> np.ndarray:
    span = np.arange(-radius, radius + 1)
    yy, xx = np.meshgrid(span, span, indexing="ij")
    return (xx * xx + yy * yy) <= radius * radius


def segment(image: GrayImage, config: SegmentationConfig = SegmentationConfig()) -> BinaryMask:
    """Threshold + close + component-filter an image into a cloth mask.

    Deterministic: identical inputs give bit-identical masks.  Raises
    ``NoClothDetected`` when nothing survives.
    """
    if config.polarity is Polarity.CLOTH_DARKER:
        bits = image.pixels < config.threshold
    else:
        bits = image.pixels > config.threshold

    if config.closing_radius > 0 and bits.any():
        bits = ndimage.binary_closing(bits, structure=_disk_footprint(config.closing_radius))

    if config.keep is KeepPolicy.LARGEST_COMPONENT and bits.any():
        # scipy's default 2-D structure is the 4-connected cross.
        labels, count = ndimage.label(bits)
        if count > 1:
            sizes = np.bincount(labels.ravel())
            sizes[0] = 0
            bits = labels == int(np.argmax(sizes))

    if not bits.any():
        raise NoClothDetected("segmentation produced an empty mask")
    return BinaryMask(bits)


def area_px(mask: BinaryMask) -> int:
    """Exact count of set pixels."""
    return int(np.count_nonzero(mask.bits))


def area_mm2(mask: BinaryMask) -> float:
    """Physical area: pixel count times the squared mm-per-pixel scale."""
    if mask.scale_mm_per_px is None:
        raise MissingScale("mask carries no mm-per-pixel scale")
    return area_px(mask) * mask.scale_mm_per_px ** 2


def scale_from_plate(plate_mask: BinaryMask, plate_diameter_mm: float) -> float:
    """Calibrate mm-per-pixel from a mask of the circular plate.

    Uses the equivalent-circle diameter 2*sqrt(area/pi) of the plate mask,
    which is robust to ragged mask edges.
    """
    if plate_diameter_mm <= 0:
        raise ValueError(f"plate diameter must be > 0 mm, got {plate_diameter_mm}")
    pixels = area_px(plate_mask)
    if pixels == 0:
        raise NoClothDetected("plate mask is empty, cannot calibrate")
    diameter_px = 2.0 * math.sqrt(pixels / math.pi)
    return plate_diameter_mm / diameter_px


# Fixed-point Rec.601 luma weights (x1000), platform-deterministic.
_LUMA_R, _LUMA_G, _LUMA_B = 299, 587, 114

_ACCEPTED_MODES = {"1", "L", "LA", "P", "RGB", "RGBA"}


def _to_gray_array(path) -> np.ndarray:
    from PIL import Image, UnidentifiedImageError

    try:
        with Image.open(path) as im:
            if im.mode not in _ACCEPTED_MODES:
                raise UnsupportedFormat(f"unsupported raster mode {im.mode!r} in {path}")
            if im.mode == "P":
                im = im.convert("RGB")
            arr = np.asarray(im)
    except UnidentifiedImageError as exc:
        raise UnsupportedFormat(f"{path} is not a readable raster file") from exc

    if arr.ndim == 2:
        if arr.dtype == bool:
            return arr.astype(np.uint8) * 255
        return arr.astype(np.uint8)
    # LA / RGB / RGBA: alpha dropped, colour collapsed by integer Rec.601 luma.
    if arr.shape[2] == 2:
        return arr[:, :, 0].astype(np.uint8)
    rgb = arr[:, :, :3].astype(np.uint32)
    luma = (_LUMA_R * rgb[:, :, 0] + _LUMA_G * rgb[:, :, 1]
            + _LUMA_B * rgb[:, :, 2] + 500) // 1000
    return luma.astype(np.uint8)


def load_image(path) -> GrayImage:
    """Read a raster file as a grayscale image (RGB collapsed via Rec.601)."""
    return GrayImage(_to_gray_array(Path(path)))


def load_mask(path, scale_mm_per_px: float | None = None) -> BinaryMask:
    """Read a raster file as a mask: any nonzero pixel is cloth."""
    gray = _to_gray_array(Path(path))
    return BinaryMask(gray > 0, scale_mm_per_px)


def save_mask(mask: BinaryMask, path) -> None:
    """Write a mask as an 8-bit PNG (cloth = 255)."""
    from PIL import Image

    Image.fromarray(mask.bits.astype(np.uint8) * 255, mode="L").save(Path(path))
