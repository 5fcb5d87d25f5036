"""Cloth-set benchmarking: per-property ranges, radar profiles, SVG charts.

A set's variability on each property is the spread between its extreme
members (numeric axes) or the number of distinct categories (categorical
axes).  Profiles of several sets share one radar chart, each axis normalized
independently to the cross-set maximum because the axes carry different units.

The SVG writer is hand-rolled string assembly with fixed float formatting, so
identical inputs give byte-identical documents (golden-file friendly).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .errors import AllMembersMissingProperty, AxisMismatch, EmptySet
from .model import ClothObject, longest_edge


class PropertyAxis(Enum):
    SIZE = "size"
    WEIGHT = "weight"
    SHAPES = "shapes"
    COLORS = "colors"
    MATERIALS = "materials"
    STIFFNESS = "stiffness"
    ELASTICITY = "elasticity"
    FRICTION = "friction"


AXIS_ORDER: tuple[PropertyAxis, ...] = tuple(PropertyAxis)

_UNITS = {
    PropertyAxis.SIZE: "mm",
    PropertyAxis.WEIGHT: "g",
    PropertyAxis.SHAPES: "count",
    PropertyAxis.COLORS: "count",
    PropertyAxis.MATERIALS: "count",
    PropertyAxis.STIFFNESS: "ratio",
    PropertyAxis.ELASTICITY: "ratio",
    PropertyAxis.FRICTION: "ratio",
}

_CATEGORICAL = {PropertyAxis.SHAPES, PropertyAxis.COLORS, PropertyAxis.MATERIALS}


@dataclass(frozen=True)
class AxisStat:
    """Range (numeric axes) or distinct-category count (categorical axes)."""

    axis: PropertyAxis
    unit: str
    minimum: float | None = None
    maximum: float | None = None
    value_range: float | None = None
    count: int | None = None
    skipped: tuple[str, ...] = ()

    @property
    def plotted(self) -> float:
        """The value that lands on the radar chart."""
        return float(self.count) if self.count is not None else float(self.value_range)


@dataclass(frozen=True)
class RadarProfile:
    """One cloth set summarized on the fixed axis order."""

    set_id: str
    name: str
    axes: tuple[AxisStat, ...]
    warnings: tuple[str, ...] = ()


def _numeric_value(obj: ClothObject, axis: PropertyAxis) -> float | None:
    if axis is PropertyAxis.SIZE:
        return longest_edge(obj) if obj.dimensions else None
    if axis is PropertyAxis.WEIGHT:
        return obj.weight_g
    if obj.mechanical is None:
        return None
    if axis is PropertyAxis.STIFFNESS:
        return obj.mechanical.stiffness
    if axis is PropertyAxis.ELASTICITY:
        return obj.mechanical.elasticity
    if axis is PropertyAxis.FRICTION:
        return obj.mechanical.friction
    raise ValueError(f"{axis} is not a numeric axis")


def property_range(objects: Sequence[ClothObject], axis: PropertyAxis) -> AxisStat:
    """Spread (max - min) of a numeric property, or distinct-category count.

    Members missing a value are skipped and recorded in ``skipped``; an axis
    with no valid member at all raises ``AllMembersMissingProperty``.
    """
    if not objects:
        raise EmptySet("cannot profile an empty cloth set")
    unit = _UNITS[axis]

    if axis in _CATEGORICAL:
        if axis is PropertyAxis.SHAPES:
            categories = {obj.shape for obj in objects}
        elif axis is PropertyAxis.COLORS:
            categories = {c for obj in objects for c in obj.colors}
        else:
            categories = {m for obj in objects for m in obj.materials}
        return AxisStat(axis=axis, unit=unit, count=len(categories))

    values: list[float] = []
    skipped: list[str] = []
    for obj in objects:
        v = _numeric_value(obj, axis)
        if v is None:
            skipped.append(obj.id)
        else:
            values.append(v)
    if not values:
        raise AllMembersMissingProperty(f"no member carries {axis.value}")
    lo, hi = min(values), max(values)
    return AxisStat(
        axis=axis, unit=unit,
        minimum=lo, maximum=hi, value_range=hi - lo,
        skipped=tuple(skipped),
    )


def radar_profile(objects: Sequence[ClothObject], set_id: str, name: str | None = None) -> RadarProfile:
    """Evaluate every axis over the set's members."""
    if not objects:
        raise EmptySet("cannot profile an empty cloth set")
    stats = tuple(property_range(objects, axis) for axis in AXIS_ORDER)
    warnings = tuple(
        f"{stat.axis.value}: skipped {', '.join(stat.skipped)}"
        for stat in stats if stat.skipped
    )
    return RadarProfile(set_id=set_id, name=name or set_id, axes=stats, warnings=warnings)


def _check_axis_layout(profiles: Sequence[RadarProfile]) -> None:
    reference = tuple((s.axis, s.unit) for s in profiles[0].axes)
    for profile in profiles[1:]:
        layout = tuple((s.axis, s.unit) for s in profile.axes)
        if layout != reference:
            raise AxisMismatch(
                f"profile {profile.set_id!r} axes differ from {profiles[0].set_id!r}"
            )


def axis_maxima(profiles: Sequence[RadarProfile]) -> list[float]:
    """Per-axis maximum plotted value across all profiles (the axis scale)."""
    _check_axis_layout(profiles)
    return [
        max(profile.axes[k].plotted for profile in profiles)
        for k in range(len(profiles[0].axes))
    ]


def radar_vertex_radii(profiles: Sequence[RadarProfile]) -> list[list[float]]:
    """Normalized vertex radii in [0, 1], one list per profile.

    For each axis exactly one profile sits at radius 1.0 unless every value
    on that axis is zero.
    """
    if not profiles:
        raise ValueError("at least one profile is required")
    maxima = axis_maxima(profiles)
    return [
        [
            0.0 if maxima[k] == 0 else profile.axes[k].plotted / maxima[k]
            for k in range(len(maxima))
        ]
        for profile in profiles
    ]


@dataclass(frozen=True)
class RenderOptions:
    width: int = 680
    height: int = 560
    radius: int = 180
    rings: int = 4
    stroke_width: float = 2.0
    fill_opacity: float = 0.22
    palette: tuple[str, ...] = (
        "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
    )
    font_family: str = "sans-serif"


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _axis_label(stat: AxisStat, axis_max: float) -> str:
    return f"{stat.axis.value} [{stat.unit}] max {axis_max:g}"


def render_radar(profiles: Sequence[RadarProfile], style: RenderOptions = RenderOptions()) -> str:
    """Render profiles as one SVG radar chart; byte-deterministic."""
    if not profiles:
        raise ValueError("at least one profile is required")
    _check_axis_layout(profiles)
    maxima = axis_maxima(profiles)
    radii = radar_vertex_radii(profiles)

    n = len(profiles[0].axes)
    cx, cy, radius = style.width / 2.0, style.height / 2.0 + 10.0, float(style.radius)

    def point(k: int, r: float) -> tuple[float, float]:
        # Axis 0 points up; successive axes advance clockwise.
        angle = -math.pi / 2.0 + 2.0 * math.pi * k / n
        return cx + r * math.cos(angle), cy + r * math.sin(angle)

    out: list[str] = []
    out.append('<?xml version="1.0" encoding="UTF-8"?>')
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{style.width}" height="{style.height}" '
        f'viewBox="0 0 {style.width} {style.height}">'
    )
    out.append(f'<rect width="{style.width}" height="{style.height}" fill="#ffffff"/>')

    # Reference rings (regular polygons at even fractions of the radius).
    for ring in range(1, style.rings + 1):
        r = radius * ring / style.rings
        pts = " ".join(
            f"{_fmt(x)},{_fmt(y)}" for x, y in (point(k, r) for k in range(n))
        )
        out.append(
            f'<polygon points="{pts}" fill="none" stroke="#cccccc" stroke-width="1"/>'
        )

    # Spokes and labels.
    for k in range(n):
        x, y = point(k, radius)
        out.append(
            f'<line x1="{_fmt(cx)}" y1="{_fmt(cy)}" x2="{_fmt(x)}" y2="{_fmt(y)}" '
            f'stroke="#999999" stroke-width="1"/>'
        )
        lx, ly = point(k, radius + 18.0)
        anchor = "middle"
        if lx > cx + 1.0:
            anchor = "start"
        elif lx < cx - 1.0:
            anchor = "end"
        label = _axis_label(profiles[0].axes[k], maxima[k])
        out.append(
            f'<text x="{_fmt(lx)}" y="{_fmt(ly)}" font-family="{style.font_family}" '
            f'font-size="12" text-anchor="{anchor}">{label}</text>'
        )

    # One closed polygon per profile.
    for idx, profile in enumerate(profiles):
        color = style.palette[idx % len(style.palette)]
        pts = " ".join(
            f"{_fmt(x)},{_fmt(y)}"
            for x, y in (point(k, radius * radii[idx][k]) for k in range(n))
        )
        out.append(
            f'<polygon points="{pts}" fill="{color}" fill-opacity="{style.fill_opacity}" '
            f'stroke="{color}" stroke-width="{_fmt(style.stroke_width)}"/>'
        )

    # Legend.
    for idx, profile in enumerate(profiles):
        color = style.palette[idx % len(style.palette)]
        y = 22 + 18 * idx
        out.append(f'<rect x="16" y="{y - 10}" width="12" height="12" fill="{color}"/>')
        out.append(
            f'<text x="34" y="{y}" font-family="{style.font_family}" '
            f'font-size="12">{profile.name}</text>'
        )

    out.append("</svg>")
    return "\n".join(out) + "\n"


def compare_report(profiles: Sequence[RadarProfile]) -> str:
    """Per-axis winner table as RFC-4180 CSV (CRLF, quoted when needed).

    The winner on an axis is the profile with the largest plotted value, i.e.
    the most diverse set on that property; equal values tie.
    """
    if len(profiles) < 2:
        raise ValueError("comparison needs at least two profiles")
    _check_axis_layout(profiles)

    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["axis", "unit"] + [p.name for p in profiles] + ["winner"])
    for k, stat in enumerate(profiles[0].axes):
        values = [p.axes[k].plotted for p in profiles]
        best = max(values)
        winners = [p.name for p, v in zip(profiles, values) if v == best]
        winner = winners[0] if len(winners) == 1 else "tie"
        writer.writerow(
            [stat.axis.value, stat.unit] + [f"{v:g}" for v in values] + [winner]
        )
    return buf.getvalue()
