"""Manipulation-primitive evaluation from before/after coverage masks.

The outcome metric is the Final Ratio (FR): area covered after the action
over area covered before (shape retention, 1 = unchanged), or, for folding,
the aligned fraction ``(A_f - A_b) / A_f`` where A_b is the uncovered part of
the stationary half (1 = perfect fold).  Repeated runs aggregate to
mean +/- population standard deviation.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

from .errors import EmptyReference, EmptyRuns, InconsistentAreas
from .masks import BinaryMask, area_mm2, area_px
from .model import MechanicalProperties

# FRs above this trip a loud warning: almost always a segmentation fault,
# never hidden by clamping.
FR_WARN_THRESHOLD = 1.05


class PrimitiveKind(Enum):
    LIFT = "lift"
    DRAG = "drag"
    FOLD = "fold"
    PULL = "pull"
    PUSH = "push"


@dataclass(frozen=True)
class PrimitiveParams:
    """Canonical quasi-static trajectory of one primitive.

    ``travel_mm`` is the grip displacement (None for fold, whose end point is
    the opposite corner of the cloth); ``grasp_height_mm`` the grasp height
    above the table; ``peak_mm`` the apex of the fold's triangular path.
    """

    kind: PrimitiveKind
    travel_mm: float | None
    grasp_height_mm: float
    peak_mm: float | None = None

    def __post_init__(self) -> None:
        if self.travel_mm is not None and self.travel_mm <= 0:
            raise ValueError("travel must be > 0 mm")
        if self.grasp_height_mm < 0:
            raise ValueError("grasp height must be >= 0 mm")
        if self.peak_mm is not None and self.peak_mm <= 0:
            raise ValueError("fold peak must be > 0 mm")


_CANONICAL: dict[PrimitiveKind, PrimitiveParams] = {
    PrimitiveKind.LIFT: PrimitiveParams(PrimitiveKind.LIFT, 350.0, 30.0),
    PrimitiveKind.DRAG: PrimitiveParams(PrimitiveKind.DRAG, 200.0, 10.0),
    PrimitiveKind.FOLD: PrimitiveParams(PrimitiveKind.FOLD, None, 30.0, peak_mm=110.0),
    PrimitiveKind.PULL: PrimitiveParams(PrimitiveKind.PULL, 50.0, 0.0),
    PrimitiveKind.PUSH: PrimitiveParams(PrimitiveKind.PUSH, 100.0, 0.0),
}


def canonical_params(kind: PrimitiveKind) -> PrimitiveParams:
    """The standard trajectory parameters of a primitive."""
    return _CANONICAL[kind]


def _area(mask: BinaryMask, physical: bool) -> float:
    return area_mm2(mask) if physical else float(area_px(mask))


def final_ratio(mask_before: BinaryMask, mask_after: BinaryMask) -> float:
    """Shape retention FR = area(after) / area(before).

    Uses physical areas when both masks are calibrated, raw pixel counts
    otherwise.  Not clamped: FR > 1.05 warns instead of hiding a bad mask.
    """
    physical = (mask_before.scale_mm_per_px is not None
                and mask_after.scale_mm_per_px is not None)
    a_i = _area(mask_before, physical)
    if a_i == 0:
        raise EmptyReference("before-mask is empty")
    fr = _area(mask_after, physical) / a_i
    if fr > FR_WARN_THRESHOLD:
        warnings.warn(
            f"FR {fr:.3f} exceeds {FR_WARN_THRESHOLD}; check the masks",
            stacklevel=2,
        )
    return fr


def fold_ratio(mask_after: BinaryMask, mask_uncovered_bottom: BinaryMask) -> float:
    """Fold alignment FR = (A_f - A_b) / A_f; 1 = halves perfectly aligned."""
    physical = (mask_after.scale_mm_per_px is not None
                and mask_uncovered_bottom.scale_mm_per_px is not None)
    a_f = _area(mask_after, physical)
    if a_f == 0:
        raise EmptyReference("after-mask is empty")
    a_b = _area(mask_uncovered_bottom, physical)
    if a_b > a_f:
        raise InconsistentAreas(f"uncovered area {a_b} exceeds final area {a_f}")
    return (a_f - a_b) / a_f


def aggregate(runs: Sequence[float]) -> tuple[float, float]:
    """Mean and population standard deviation of repeated FRs."""
    if not runs:
        raise EmptyRuns("no runs to aggregate")
    mean = sum(runs) / len(runs)
    var = sum((r - mean) ** 2 for r in runs) / len(runs)
    return mean, math.sqrt(var)


@dataclass(frozen=True)
class EvalResult:
    """Aggregated outcome of one primitive on one sample."""

    primitive: PrimitiveKind
    repetitions: tuple[float, ...]
    mean: float
    stddev: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "repetitions", tuple(float(r) for r in self.repetitions))
        m, s = aggregate(self.repetitions)
        if abs(m - self.mean) > 1e-9 or abs(s - self.stddev) > 1e-9:
            raise ValueError("mean/stddev inconsistent with repetitions")

    @classmethod
    def from_runs(cls, primitive: PrimitiveKind, runs: Sequence[float]) -> "EvalResult":
        mean, stddev = aggregate(runs)
        return cls(primitive, tuple(runs), mean, stddev)


@dataclass(frozen=True)
class TrendEntry:
    sample_id: str
    mean_fr: float
    stddev: float
    stiffness: float | None
    elasticity: float | None
    friction: float | None


@dataclass(frozen=True)
class PrimitiveTrend:
    """Samples ranked by mean FR for one primitive; ties share the podium."""

    primitive: PrimitiveKind
    ranking: tuple[TrendEntry, ...]  # descending mean FR
    best: tuple[str, ...]
    worst: tuple[str, ...]

    @property
    def tied(self) -> bool:
        return len(self.best) > 1 or len(self.worst) > 1


Sample = tuple[str, MechanicalProperties, Mapping[PrimitiveKind, EvalResult]]


def trend_report(samples: Sequence[Sample]) -> tuple[PrimitiveTrend, ...]:
    """Rank samples by mean FR per primitive, annotated with their properties.

    ``best`` holds the max-FR sample ids (maximum retention / best fold),
    ``worst`` the min-FR ids, mirroring a bold/underline table convention.
    """
    if len(samples) < 2:
        raise ValueError("trend ranking needs at least two samples")

    primitives: list[PrimitiveKind] = []
    for kind in PrimitiveKind:
        if any(kind in results for _, _, results in samples):
            primitives.append(kind)

    trends: list[PrimitiveTrend] = []
    for kind in primitives:
        entries = [
            TrendEntry(
                sample_id=sid,
                mean_fr=results[kind].mean,
                stddev=results[kind].stddev,
                stiffness=mech.stiffness,
                elasticity=mech.elasticity,
                friction=mech.friction,
            )
            for sid, mech, results in samples if kind in results
        ]
        entries.sort(key=lambda e: (-e.mean_fr, e.sample_id))
        top, bottom = entries[0].mean_fr, entries[-1].mean_fr
        trends.append(PrimitiveTrend(
            primitive=kind,
            ranking=tuple(entries),
            best=tuple(e.sample_id for e in entries if e.mean_fr == top),
            worst=tuple(e.sample_id for e in entries if e.mean_fr == bottom),
        ))
    return tuple(trends)


def render_trend_csv(trends: Sequence[PrimitiveTrend]) -> str:
    """CSV table: one ranking row per (primitive, sample), plus extremes."""
    import csv as _csv
    import io as _io

    buf = _io.StringIO()
    writer = _csv.writer(buf)
    writer.writerow([
        "primitive", "rank", "sample", "mean_fr", "stddev",
        "stiffness", "elasticity", "friction", "highlight",
    ])
    for trend in trends:
        for rank, entry in enumerate(trend.ranking, start=1):
            highlight = ""
            if entry.sample_id in trend.best:
                highlight = "best"
            elif entry.sample_id in trend.worst:
                highlight = "worst"
            writer.writerow([
                trend.primitive.value, rank, entry.sample_id,
                f"{entry.mean_fr:g}", f"{entry.stddev:g}",
                "" if entry.stiffness is None else f"{entry.stiffness:g}",
                "" if entry.elasticity is None else f"{entry.elasticity:g}",
                "" if entry.friction is None else f"{entry.friction:g}",
                highlight,
            ])
    return buf.getvalue()
