"""The full imaging pipeline of the drape test on synthetic photographs.

A zenithal camera sees the draped cloth as a dark blob on a light table.
Segmentation turns the photos into masks, a picture of the bare plate
calibrates mm-per-pixel, and the three areas feed the drape formula.

Run:
    python demos/02_stiffness_imaging.py
"""

import numpy as np

from clothbench import (
    GrayImage,
    PlateSpec,
    SegmentationConfig,
    area_px,
    scale_from_plate,
    segment,
    stiffness_from_images,
)


def photo_of_disk(radius_px: int, canvas: int = 420, noise_seed: int | None = None) -> GrayImage:
    """Dark disk on a light background, optionally with sensor noise."""
    yy, xx = np.mgrid[0:canvas, 0:canvas]
    c = canvas // 2
    pixels = np.full((canvas, canvas), 235, dtype=np.uint8)
    pixels[(xx - c) ** 2 + (yy - c) ** 2 <= radius_px ** 2] = 30
    if noise_seed is not None:
        rng = np.random.default_rng(noise_seed)
        noisy = pixels.astype(np.int16) + rng.integers(-12, 13, pixels.shape)
        pixels = np.clip(noisy, 0, 255).astype(np.uint8)
    return GrayImage(pixels)


config = SegmentationConfig(threshold=128, closing_radius=2)

# calibrate from a photo of the bare 180 mm plate
plate_photo = photo_of_disk(90, noise_seed=1)
plate_mask = segment(plate_photo, config)
scale = scale_from_plate(plate_mask, plate_diameter_mm=180.0)
print(f"plate mask: {area_px(plate_mask)} px -> {scale:.4f} mm/px")

# flat cloth photo and a moderately draped photo
flat_photo = photo_of_disk(150, noise_seed=2)
draped_photo = photo_of_disk(120, noise_seed=3)

record = stiffness_from_images(
    draped_photo,
    PlateSpec(diameter_mm=180.0),
    config,
    flat_image=flat_photo,
    plate_mask=plate_mask,
)
print(f"A1 (flat)   = {record.inputs['a1_mm2']:.0f} mm^2")
print(f"A2 (plate)  = {record.inputs['a2_mm2']:.0f} mm^2")
print(f"A3 (draped) = {record.inputs['a3_mm2']:.0f} mm^2")
print(f"stiffness   = {record.value:.3f}")

# the same cloth photographed flat again would score 1.0
rigid = stiffness_from_images(
    flat_photo, PlateSpec(diameter_mm=180.0), config,
    flat_image=flat_photo, plate_mask=plate_mask,
)
print(f"sanity: draped photo == flat photo -> stiffness {rigid.value:.3f}")
