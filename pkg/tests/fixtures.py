"""Shared six-sample benchmark fixture.

Property triples (stiffness, elasticity, friction, as ratios) and per-primitive
FR results (mean, population deviation) for the samples A..F used across the
radar, evaluation and acceptance tests.  Each result's repetitions are
reconstructed as (mean - dev, mean + dev), which reproduces both statistics
exactly under the population convention.
"""

from __future__ import annotations

from clothbench.evaluation import EvalResult, PrimitiveKind
from clothbench.model import (
    ClothObject,
    ColorLabel,
    ConstructionTechnique,
    MaterialLabel,
    MechanicalProperties,
    ReferenceLine,
    ShapeCategory,
)

# sample -> (stiffness, elasticity, friction)
SAMPLE_PROPERTIES: dict[str, tuple[float, float, float]] = {
    "A": (0.85, 0.43, 0.53),
    "B": (0.34, 0.07, 0.45),
    "C": (0.36, 0.87, 0.52),
    "D": (0.39, 0.35, 0.93),
    "E": (0.59, 1.00, 0.60),
    "F": (0.32, 0.64, 0.52),
}

# sample -> primitive -> (mean FR, population deviation)
SAMPLE_RESULTS: dict[str, dict[PrimitiveKind, tuple[float, float]]] = {
    "A": {
        PrimitiveKind.LIFT: (0.31, 0.01),
        PrimitiveKind.DRAG: (0.97, 0.01),
        PrimitiveKind.FOLD: (1.00, 0.00),
        PrimitiveKind.PULL: (0.94, 0.02),
        PrimitiveKind.PUSH: (0.83, 0.00),
    },
    "B": {
        PrimitiveKind.LIFT: (0.23, 0.00),
        PrimitiveKind.DRAG: (0.96, 0.02),
        PrimitiveKind.FOLD: (0.63, 0.01),
        PrimitiveKind.PULL: (0.97, 0.00),
        PrimitiveKind.PUSH: (0.84, 0.01),
    },
    "C": {
        PrimitiveKind.LIFT: (0.23, 0.02),
        PrimitiveKind.DRAG: (0.90, 0.01),
        PrimitiveKind.FOLD: (0.63, 0.00),
        PrimitiveKind.PULL: (0.72, 0.07),
        PrimitiveKind.PUSH: (0.64, 0.03),
    },
    "D": {
        PrimitiveKind.LIFT: (0.20, 0.00),
        PrimitiveKind.DRAG: (0.84, 0.02),
        PrimitiveKind.FOLD: (0.63, 0.01),
        PrimitiveKind.PULL: (0.90, 0.03),
        PrimitiveKind.PUSH: (0.69, 0.05),
    },
    "E": {
        PrimitiveKind.LIFT: (0.21, 0.01),
        PrimitiveKind.DRAG: (0.93, 0.00),
        PrimitiveKind.FOLD: (0.60, 0.02),
        PrimitiveKind.PULL: (0.91, 0.01),
        PrimitiveKind.PUSH: (0.65, 0.02),
    },
    "F": {
        PrimitiveKind.LIFT: (0.20, 0.00),
        PrimitiveKind.DRAG: (0.79, 0.03),
        PrimitiveKind.FOLD: (0.60, 0.00),
        PrimitiveKind.PULL: (0.88, 0.02),
        PrimitiveKind.PUSH: (0.66, 0.02),
    },
}

_LOOKS = {
    "A": (ColorLabel.BLUE, "polyester", "knitted", 305.0, 12.0),
    "B": (ColorLabel.WHITE, "cotton", "woven", 298.0, 10.0),
    "C": (ColorLabel.RED, "elastane", "knitted", 310.0, 11.0),
    "D": (ColorLabel.GREY, "denim", "woven", 300.0, 16.0),
    "E": (ColorLabel.BLACK, "elastane", "knitted", 295.0, 9.0),
    "F": (ColorLabel.GREEN, "wool", "knitted", 302.0, 14.0),
}


def sample_object(sample_id: str) -> ClothObject:
    stiffness, elasticity, friction = SAMPLE_PROPERTIES[sample_id]
    color, material, construction, size, weight = _LOOKS[sample_id]
    return ClothObject(
        id=sample_id,
        name=f"sample {sample_id}",
        shape=ShapeCategory("rectangular"),
        dimensions=((ReferenceLine.LINE1, size), (ReferenceLine.LINE2, size - 10.0)),
        weight_g=weight,
        colors=frozenset({color}),
        has_print=False,
        materials=frozenset({MaterialLabel(material)}),
        construction=ConstructionTechnique(construction),
        mechanical=MechanicalProperties(
            stiffness=stiffness, elasticity=elasticity, friction=friction,
        ),
    )


def six_samples() -> list[ClothObject]:
    return [sample_object(sid) for sid in sorted(SAMPLE_PROPERTIES)]


def runs_for(sample_id: str, kind: PrimitiveKind) -> tuple[float, float]:
    mean, dev = SAMPLE_RESULTS[sample_id][kind]
    return (mean - dev, mean + dev)


def table_samples():
    """(id, mechanical, {primitive: EvalResult}) rows for trend_report."""
    rows = []
    for sid in sorted(SAMPLE_PROPERTIES):
        results = {
            kind: EvalResult.from_runs(kind, runs_for(sid, kind))
            for kind in SAMPLE_RESULTS[sid]
        }
        rows.append((sid, sample_object(sid).mechanical, results))
    return rows
