"""Mass-spring cloth simulator used as the measurement pipeline's oracle."""

from .core import (
    Cylinder,
    Scene,
    SettleCriteria,
    SimParams,
    SimState,
    project_area,
    project_mask,
    settle,
    step,
    total_energy,
)
from .mesh import ClothMesh, build_mesh
from .scenarios import (
    DrapeResult,
    InclineResult,
    PrimitiveRun,
    PullResult,
    flat_state,
    run_drape,
    run_incline,
    run_primitive,
    run_pull,
)

__all__ = [
    "ClothMesh",
    "Cylinder",
    "DrapeResult",
    "InclineResult",
    "PrimitiveRun",
    "PullResult",
    "Scene",
    "SettleCriteria",
    "SimParams",
    "SimState",
    "build_mesh",
    "flat_state",
    "project_area",
    "project_mask",
    "run_drape",
    "run_incline",
    "run_primitive",
    "run_pull",
    "settle",
    "step",
    "total_energy",
]
