"""Domain model for cloth objects, their properties, and cloth sets.

All types are immutable values; validation reports violations as data rather
than raising, so a half-entered record can be inspected without try/except.
Lengths are millimetres, weights grams.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import ClassVar, Iterable, Mapping

from .errors import NoDimensions


class ReferenceLine(Enum):
    """Standardized measurement directions; size and elasticity share them.

    Rectangular cloth uses LINE1/LINE2 (width/height); garment shapes may
    additionally use LINE3 (sleeve/leg) and LINE4 (fold line).
    """

    LINE1 = "line1"
    LINE2 = "line2"
    LINE3 = "line3"
    LINE4 = "line4"


class ColorLabel(Enum):
    """Plain primary and secondary colours plus the household neutrals."""

    RED = "red"
    ORANGE = "orange"
    YELLOW = "yellow"
    GREEN = "green"
    BLUE = "blue"
    PURPLE = "purple"
    WHITE = "white"
    BLACK = "black"
    GREY = "grey"
    BROWN = "brown"


@dataclass(frozen=True)
class ShapeCategory:
    """Shape category; any name outside the known set acts as an open label."""

    name: str

    KNOWN: ClassVar[tuple[str, ...]] = (
        "rectangular", "shirt", "tshirt", "top", "pants", "skirt",
    )

    def __post_init__(self) -> None:
        normalized = self.name.strip().lower()
        if not normalized:
            raise ValueError("shape category label must not be empty")
        object.__setattr__(self, "name", normalized)

    @property
    def is_other(self) -> bool:
        return self.name not in self.KNOWN


@dataclass(frozen=True)
class MaterialLabel:
    """Fibre material; any name outside the known set acts as an open label."""

    name: str

    KNOWN: ClassVar[tuple[str, ...]] = (
        "cotton", "linen", "silk", "wool", "polyester", "nylon",
        "acrylic", "elastane", "denim",
    )

    def __post_init__(self) -> None:
        normalized = self.name.strip().lower()
        if not normalized:
            raise ValueError("material label must not be empty")
        object.__setattr__(self, "name", normalized)

    @property
    def is_other(self) -> bool:
        return self.name not in self.KNOWN


@dataclass(frozen=True)
class ConstructionTechnique:
    """Fabric construction; woven and knitted are the recognized techniques."""

    name: str

    KNOWN: ClassVar[tuple[str, ...]] = ("woven", "knitted")

    def __post_init__(self) -> None:
        normalized = self.name.strip().lower()
        if not normalized:
            raise ValueError("construction label must not be empty")
        object.__setattr__(self, "name", normalized)

    @property
    def is_other(self) -> bool:
        return self.name not in self.KNOWN


# Tolerance for "summary equals max of per-line values" float comparison.
_SUMMARY_TOL = 1e-9


@dataclass(frozen=True)
class MechanicalProperties:
    """Measured mechanical properties, all dimensionless ratios.

    ``stiffness`` is the drape coefficient in [0, 1] (1 = rigid), ``elasticity``
    the relative elongation under the 0.5 kg pull (>= 0), ``friction`` the
    incline coefficient (>= 0).  ``elasticity_by_line`` holds per-direction
    elongations; when present, the summary elasticity is their maximum.
    Fields are optional so partially measured objects stay representable.
    """

    stiffness: float | None = None
    elasticity: float | None = None
    friction: float | None = None
    elasticity_by_line: tuple[tuple[ReferenceLine, float], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "elasticity_by_line",
            tuple((line, float(v)) for line, v in self.elasticity_by_line),
        )


@dataclass(frozen=True)
class ClothObject:
    """One textile item: identity, physical schema, optional measured values."""

    id: str
    name: str
    shape: ShapeCategory
    dimensions: tuple[tuple[ReferenceLine, float], ...]
    weight_g: float
    colors: frozenset[ColorLabel] = frozenset()
    has_print: bool = False
    materials: frozenset[MaterialLabel] = frozenset()
    construction: ConstructionTechnique = ConstructionTechnique("woven")
    mechanical: MechanicalProperties | None = None

    def __post_init__(self) -> None:
        dims: Iterable
        if isinstance(self.dimensions, Mapping):
            dims = self.dimensions.items()
        else:
            dims = self.dimensions
        object.__setattr__(
            self, "dimensions",
            tuple((line, float(mm)) for line, mm in dims),
        )
        object.__setattr__(self, "colors", frozenset(self.colors))
        object.__setattr__(self, "materials", frozenset(self.materials))

    def dimension(self, line: ReferenceLine) -> float | None:
        for recorded, mm in self.dimensions:
            if recorded is line:
                return mm
        return None


@dataclass(frozen=True)
class ClothSet:
    """A named collection of cloth objects, referenced by id."""

    id: str
    name: str
    source: str = ""
    members: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", tuple(self.members))


class ViolationCode(Enum):
    WEIGHT_NOT_POSITIVE = "weight_not_positive"
    DIMENSION_NOT_POSITIVE = "dimension_not_positive"
    DUPLICATE_DIMENSION_LINE = "duplicate_dimension_line"
    LINE_INVALID_FOR_SHAPE = "line_invalid_for_shape"
    NO_COLORS = "no_colors"
    STIFFNESS_OUT_OF_RANGE = "stiffness_out_of_range"
    ELASTICITY_NEGATIVE = "elasticity_negative"
    FRICTION_NEGATIVE = "friction_negative"
    LINE_ELASTICITY_NEGATIVE = "line_elasticity_negative"
    DUPLICATE_ELASTICITY_LINE = "duplicate_elasticity_line"
    SUMMARY_NOT_MAX = "summary_not_max"


@dataclass(frozen=True)
class Violation:
    """One invariant breach found by validation; data, not an exception."""

    code: ViolationCode
    message: str


_RECTANGULAR_LINES = {ReferenceLine.LINE1, ReferenceLine.LINE2}


def validate_object(obj: ClothObject) -> list[Violation]:
    """Return every invariant violation of ``obj`` (empty list = valid).

    Pure and idempotent: never mutates, always reports the full list.
    """
    out: list[Violation] = []

    if not obj.weight_g > 0:
        out.append(Violation(
            ViolationCode.WEIGHT_NOT_POSITIVE,
            f"weight must be > 0 g, got {obj.weight_g}",
        ))

    seen: set[ReferenceLine] = set()
    for line, mm in obj.dimensions:
        if not mm > 0:
            out.append(Violation(
                ViolationCode.DIMENSION_NOT_POSITIVE,
                f"{line.value} length must be > 0 mm, got {mm}",
            ))
        if line in seen:
            out.append(Violation(
                ViolationCode.DUPLICATE_DIMENSION_LINE,
                f"{line.value} recorded more than once",
            ))
        seen.add(line)
        if obj.shape.name == "rectangular" and line not in _RECTANGULAR_LINES:
            out.append(Violation(
                ViolationCode.LINE_INVALID_FOR_SHAPE,
                f"rectangular objects use line1/line2 only, got {line.value}",
            ))

    if not obj.colors:
        out.append(Violation(ViolationCode.NO_COLORS, "colors must not be empty"))

    if obj.mechanical is not None:
        out.extend(_validate_mechanical(obj.mechanical))
    return out


def _validate_mechanical(mech: MechanicalProperties) -> list[Violation]:
    out: list[Violation] = []
    if mech.stiffness is not None and not 0.0 <= mech.stiffness <= 1.0:
        out.append(Violation(
            ViolationCode.STIFFNESS_OUT_OF_RANGE,
            f"stiffness must lie in [0, 1], got {mech.stiffness}",
        ))
    if mech.elasticity is not None and mech.elasticity < 0:
        out.append(Violation(
            ViolationCode.ELASTICITY_NEGATIVE,
            f"elasticity must be >= 0, got {mech.elasticity}",
        ))
    if mech.friction is not None and mech.friction < 0:
        out.append(Violation(
            ViolationCode.FRICTION_NEGATIVE,
            f"friction must be >= 0, got {mech.friction}",
        ))

    seen: set[ReferenceLine] = set()
    for line, value in mech.elasticity_by_line:
        if value < 0:
            out.append(Violation(
                ViolationCode.LINE_ELASTICITY_NEGATIVE,
                f"{line.value} elasticity must be >= 0, got {value}",
            ))
        if line in seen:
            out.append(Violation(
                ViolationCode.DUPLICATE_ELASTICITY_LINE,
                f"{line.value} elasticity recorded more than once",
            ))
        seen.add(line)

    if mech.elasticity_by_line and mech.elasticity is not None:
        peak = max(v for _, v in mech.elasticity_by_line)
        if abs(mech.elasticity - peak) > _SUMMARY_TOL:
            out.append(Violation(
                ViolationCode.SUMMARY_NOT_MAX,
                f"summary elasticity {mech.elasticity} != max per-line value {peak}",
            ))
    return out


def shortest_edge(obj: ClothObject) -> float:
    """Minimum recorded dimension in mm; sizes the drape plate."""
    if not obj.dimensions:
        raise NoDimensions(f"object {obj.id!r} has no recorded dimensions")
    return min(mm for _, mm in obj.dimensions)


def longest_edge(obj: ClothObject) -> float:
    """Maximum recorded dimension in mm; the size axis of radar profiles."""
    if not obj.dimensions:
        raise NoDimensions(f"object {obj.id!r} has no recorded dimensions")
    return max(mm for _, mm in obj.dimensions)
