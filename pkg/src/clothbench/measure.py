"""Mechanical-property formulas and their measurement protocols.

Three properties, three bench protocols:

* stiffness -- Cusick-style drape test: drape coefficient
  ``(A3 - A2) / (A1 - A2)`` from the flat area A1, plate area A2 and the
  zenithal projected area A3 of the draped cloth.  1 = rigid, 0 = fully draped.
* elasticity -- relative elongation ``(l_f - l_i) / l_i`` between clamp marks
  under a fixed tensile load (protocol constant 0.5 kg), per reference line.
* friction -- inclined-plane test: the slide-onset geometry (lifted height h,
  surface length l) gives ``mu = tan(asin(h / l))``, evaluated here in the
  algebraically identical, numerically stabler form ``h / sqrt(l^2 - h^2)``.

Every function is pure and reentrant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import (
    DegeneratePlate,
    DuplicateLine,
    InvalidLengths,
    InvalidRatio,
    MissingScale,
    NoDimensions,
    OutOfRange,
    SlideAngleInvalid,
)
from .masks import BinaryMask, GrayImage, SegmentationConfig, area_mm2, scale_from_plate, segment
from .model import ClothObject, ReferenceLine

# Tensile load of the pull protocol, grams.
PULL_LOAD_G = 500.0

# Drape samples larger than this edge are folded down before the test.
MAX_SAMPLE_EDGE_MM = 500.0

# Fraction of the shortest edge covered by the plate (60/40 drape split).
DEFAULT_COVERAGE_RATIO = 0.6

# Measurement slack on A3 against [A2, A1]: clamp within, reject beyond.
AREA_TOLERANCE = 0.05


@dataclass(frozen=True)
class StiffnessInputs:
    """Areas of the drape test, all mm^2: flat cloth, plate, draped cloth."""

    a1_mm2: float
    a2_mm2: float
    a3_mm2: float

    def __post_init__(self) -> None:
        if self.a2_mm2 <= 0:
            raise DegeneratePlate(f"plate area must be > 0, got {self.a2_mm2}")
        if self.a1_mm2 <= self.a2_mm2:
            raise DegeneratePlate(
                f"flat area {self.a1_mm2} must exceed plate area {self.a2_mm2}"
            )


@dataclass(frozen=True)
class ElasticityInputs:
    """One pull measurement along a reference line; lengths in mm."""

    line: ReferenceLine
    l_i_mm: float
    l_f_mm: float
    load_g: float = PULL_LOAD_G

    def __post_init__(self) -> None:
        if self.l_i_mm <= 0:
            raise InvalidLengths(f"rest length must be > 0, got {self.l_i_mm}")
        if self.l_f_mm < self.l_i_mm:
            raise InvalidLengths(
                f"loaded length {self.l_f_mm} must be >= rest length {self.l_i_mm}"
            )


@dataclass(frozen=True)
class FrictionInputs:
    """Slide-onset geometry: lifted height and surface length, mm."""

    h_mm: float
    l_mm: float

    def __post_init__(self) -> None:
        if self.l_mm <= 0:
            raise SlideAngleInvalid(f"surface length must be > 0, got {self.l_mm}")
        if self.h_mm < 0 or self.h_mm >= self.l_mm:
            raise SlideAngleInvalid(
                f"need 0 <= height < length, got h={self.h_mm}, l={self.l_mm}"
            )


@dataclass(frozen=True)
class PlateSpec:
    """Drape plate: diameter in mm and the coverage ratio that sized it."""

    diameter_mm: float
    coverage_ratio: float = DEFAULT_COVERAGE_RATIO

    def __post_init__(self) -> None:
        if not 0.0 < self.coverage_ratio < 1.0:
            raise InvalidRatio(
                f"coverage ratio must lie in (0, 1), got {self.coverage_ratio}"
            )
        if self.diameter_mm <= 0:
            raise ValueError(f"plate diameter must be > 0 mm, got {self.diameter_mm}")

    @property
    def area_mm2(self) -> float:
        return math.pi * (self.diameter_mm / 2.0) ** 2


@dataclass(frozen=True)
class EffectiveRectangle:
    """Sample footprint after fold normalization."""

    width_mm: float
    height_mm: float
    folds: int

    @property
    def area_mm2(self) -> float:
        return self.width_mm * self.height_mm


def plate_diameter(shortest_edge_mm: float, coverage_ratio: float = DEFAULT_COVERAGE_RATIO) -> float:
    """Plate diameter for a sample: coverage ratio times its shortest edge."""
    if not 0.0 < coverage_ratio < 1.0:
        raise InvalidRatio(f"coverage ratio must lie in (0, 1), got {coverage_ratio}")
    if shortest_edge_mm <= 0:
        raise ValueError(f"shortest edge must be > 0 mm, got {shortest_edge_mm}")
    return coverage_ratio * shortest_edge_mm


def normalize_sample(obj: ClothObject, max_edge_mm: float = MAX_SAMPLE_EDGE_MM) -> EffectiveRectangle:
    """Fold a sample into the rectangle that actually goes on the bench.

    Non-rectangular shapes first map to their bounding line1 x line2 rectangle.
    While either edge exceeds ``max_edge_mm``, the current longest edge is
    halved and the fold count incremented.  Compliant rectangles pass through
    untouched.
    """
    if not obj.dimensions:
        raise NoDimensions(f"object {obj.id!r} has no recorded dimensions")

    lengths = dict(obj.dimensions)
    if ReferenceLine.LINE1 in lengths and ReferenceLine.LINE2 in lengths:
        width, height = lengths[ReferenceLine.LINE1], lengths[ReferenceLine.LINE2]
    else:
        ordered = sorted((mm for _, mm in obj.dimensions), reverse=True)
        width = ordered[0]
        height = ordered[1] if len(ordered) > 1 else ordered[0]

    folds = 0
    while max(width, height) > max_edge_mm:
        if width >= height:
            width /= 2.0
        else:
            height /= 2.0
        folds += 1
    return EffectiveRectangle(width, height, folds)


def drape_stiffness(inputs: StiffnessInputs, tolerance: float = AREA_TOLERANCE) -> float:
    """Drape coefficient (A3 - A2) / (A1 - A2), clamped to [0, 1].

    A3 may exceed the ideal [A2, A1] bracket by up to ``tolerance`` (shadow,
    hem overhang); within the slack it is clamped, beyond it the measurement
    is rejected so gross errors cannot silently corrupt a dataset.
    """
    a1, a2, a3 = inputs.a1_mm2, inputs.a2_mm2, inputs.a3_mm2
    if not a2 * (1.0 - tolerance) <= a3 <= a1 * (1.0 + tolerance):
        raise OutOfRange(
            f"draped area {a3} outside tolerated bracket "
            f"[{a2 * (1.0 - tolerance)}, {a1 * (1.0 + tolerance)}]"
        )
    a3 = min(max(a3, a2), a1)
    return (a3 - a2) / (a1 - a2)


def elasticity(inputs: ElasticityInputs) -> float:
    """Relative elongation (l_f - l_i) / l_i; 0 means no stretch."""
    return (inputs.l_f_mm - inputs.l_i_mm) / inputs.l_i_mm


@dataclass(frozen=True)
class ElasticityProfile:
    """Per-line elongations plus the summary (their maximum)."""

    per_line: tuple[tuple[ReferenceLine, float], ...]
    summary: float


def elasticity_profile(records: list[ElasticityInputs]) -> ElasticityProfile:
    """Combine per-line pull measurements; summary is the largest elongation."""
    if not records:
        raise ValueError("at least one elasticity record is required")
    per_line: list[tuple[ReferenceLine, float]] = []
    seen: set[ReferenceLine] = set()
    for rec in records:
        if rec.line in seen:
            raise DuplicateLine(f"{rec.line.value} measured twice")
        seen.add(rec.line)
        per_line.append((rec.line, elasticity(rec)))
    return ElasticityProfile(tuple(per_line), max(v for _, v in per_line))


def friction_coefficient(inputs: FrictionInputs) -> float:
    """Coefficient of friction mu = tan(asin(h/l)) = h / sqrt(l^2 - h^2)."""
    h, length = inputs.h_mm, inputs.l_mm
    return h / math.sqrt(length * length - h * h)


def critical_height(mu: float, l_mm: float) -> float:
    """Slide-onset height for a known mu: the inverse of the incline formula.

    ``friction_coefficient(FrictionInputs(critical_height(mu, l), l))``
    round-trips to mu.
    """
    if mu < 0:
        raise ValueError(f"mu must be >= 0, got {mu}")
    if l_mm <= 0:
        raise ValueError(f"surface length must be > 0, got {l_mm}")
    return l_mm * mu / math.sqrt(1.0 + mu * mu)


@dataclass(frozen=True)
class MeasurementRecord:
    """One protocol run: raw inputs, derived value, protocol metadata.

    The derived value is stored redundantly with the raw inputs as an audit
    trail; the registry re-derives it on load and rejects mismatches.
    """

    kind: str  # "stiffness" | "elasticity" | "friction"
    inputs: dict
    value: float
    unit: str = "ratio"
    object_id: str | None = None
    timestamp: str = ""
    notes: dict = field(default_factory=dict)


def derive_value(kind: str, inputs: dict) -> float:
    """Recompute a record's value from its raw inputs (tamper detection)."""
    if kind == "stiffness":
        return drape_stiffness(StiffnessInputs(
            float(inputs["a1_mm2"]), float(inputs["a2_mm2"]), float(inputs["a3_mm2"]),
        ))
    if kind == "elasticity":
        return elasticity(ElasticityInputs(
            ReferenceLine(inputs["line"]),
            float(inputs["l_i_mm"]), float(inputs["l_f_mm"]),
            float(inputs.get("load_g", PULL_LOAD_G)),
        ))
    if kind == "friction":
        return friction_coefficient(FrictionInputs(
            float(inputs["h_mm"]), float(inputs["l_mm"]),
        ))
    raise ValueError(f"unknown measurement kind {kind!r}")


def friction_record(inputs: FrictionInputs, object_id: str | None = None,
                    timestamp: str = "", notes: dict | None = None) -> MeasurementRecord:
    return MeasurementRecord(
        kind="friction",
        inputs={"h_mm": float(inputs.h_mm), "l_mm": float(inputs.l_mm)},
        value=friction_coefficient(inputs),
        object_id=object_id,
        timestamp=timestamp,
        notes={"surface": "standard printing paper", **(notes or {})},
    )


def elasticity_record(inputs: ElasticityInputs, object_id: str | None = None,
                      timestamp: str = "", notes: dict | None = None) -> MeasurementRecord:
    return MeasurementRecord(
        kind="elasticity",
        inputs={
            "line": inputs.line.value,
            "l_i_mm": float(inputs.l_i_mm),
            "l_f_mm": float(inputs.l_f_mm),
            "load_g": float(inputs.load_g),
        },
        value=elasticity(inputs),
        object_id=object_id,
        timestamp=timestamp,
        notes={"grip": "clamps", **(notes or {})},
    )


def stiffness_from_images(
    draped_image: GrayImage,
    plate: PlateSpec,
    seg: SegmentationConfig = SegmentationConfig(),
    *,
    flat_image: GrayImage | None = None,
    flat_area_mm2: float | None = None,
    scale_mm_per_px: float | None = None,
    plate_mask: BinaryMask | None = None,
    object_id: str | None = None,
    timestamp: str = "",
    notes: dict | None = None,
) -> MeasurementRecord:
    """Full imaging pipeline of the drape test.

    Calibration comes from an explicit scale or from a mask of the bare plate;
    A1 comes from the flat-cloth image or, when that is absent, from a
    caller-supplied area (e.g. the folded-rectangle footprint).  A2 is the
    analytic plate area.  All intermediates land in the record.
    """
    if scale_mm_per_px is None:
        if plate_mask is None:
            raise MissingScale("need either an explicit scale or a plate mask")
        scale_mm_per_px = scale_from_plate(plate_mask, plate.diameter_mm)

    a3 = area_mm2(segment(draped_image, seg).with_scale(scale_mm_per_px))
    if flat_image is not None:
        a1 = area_mm2(segment(flat_image, seg).with_scale(scale_mm_per_px))
    elif flat_area_mm2 is not None:
        a1 = float(flat_area_mm2)
    else:
        raise ValueError("need either a flat image or an explicit flat area")
    a2 = plate.area_mm2

    value = drape_stiffness(StiffnessInputs(a1, a2, a3))
    return MeasurementRecord(
        kind="stiffness",
        inputs={"a1_mm2": a1, "a2_mm2": a2, "a3_mm2": a3},
        value=value,
        object_id=object_id,
        timestamp=timestamp,
        notes={
            "plate_diameter_mm": plate.diameter_mm,
            "coverage_ratio": plate.coverage_ratio,
            "scale_mm_per_px": scale_mm_per_px,
            **(notes or {}),
        },
    )
