"""Executable bench analogues: drape test, incline test, pull test, and the
five quasi-static primitives (lift, drag, fold, pull, push).

Each scenario builds a scene, drives any grip along its trajectory at the
quasi-static speed, settles, and evaluates the same formulas/metrics the
physical protocols use, so measurement code can be cross-checked end to end
without physical cloth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from ..errors import NoSlide
from ..evaluation import (
    EvalResult,
    PrimitiveKind,
    PrimitiveParams,
    canonical_params,
    final_ratio,
    fold_ratio,
)
from ..masks import BinaryMask
from ..measure import PlateSpec, StiffnessInputs, drape_stiffness
from .core import (
    Cylinder,
    Scene,
    SettleCriteria,
    SimParams,
    SimState,
    _step_inplace,
    initial_state,
    max_speed,
    project_area,
    project_mask,
    rasterize_triangles,
    settle,
)

# Trajectory speed of all primitives (quasi-static).
GRIP_SPEED_M_S = 0.1

# Incline sweep: increment, slide-detection displacement, angle cap.  The cap
# sits below atan(10) so coefficients of 10 and up report NoSlide.
INCLINE_STEP_DEG = 0.25
SLIDE_THRESHOLD_MM = 5.0
INCLINE_MAX_DEG = 84.0

# Default tensile load of the pull test: 0.5 kg under standard gravity.
PULL_FORCE_N = 0.5 * 9.81


def flat_state(params: SimParams, *, z_m: float = 0.0,
               centered: bool = False, scene: Scene = Scene()) -> SimState:
    """Flat cloth; corner at the origin, or centred on it when ``centered``."""
    if centered:
        origin = (-params.width_mm / 2000.0, -params.height_mm / 2000.0)
    else:
        origin = (0.0, 0.0)
    return initial_state(params, origin_xy_m=origin, z_m=z_m, scene=scene)


@dataclass(frozen=True)
class DrapeResult:
    stiffness: float
    a1_mm2: float
    a2_mm2: float
    a3_mm2: float
    state: SimState


def run_drape(params: SimParams, plate: PlateSpec, *,
              drop_height_mm: float = 2.0, plate_height_mm: float = 150.0,
              criteria: SettleCriteria = SettleCriteria(),
              energy_log: list | None = None,
              on_step=None) -> DrapeResult:
    """Drop the cloth centred on the plate, settle, evaluate the drape ratio.

    A1 is the flat cloth area, A2 the plate disk, A3 the settled top-view
    projection; the returned stiffness is (A3 - A2) / (A1 - A2).
    """
    radius_m = plate.diameter_mm / 2000.0
    top_m = plate_height_mm / 1000.0
    scene = Scene(plane=True, cylinder=Cylinder(0.0, 0.0, radius_m, top_m))
    state = flat_state(params, z_m=top_m + drop_height_mm / 1000.0,
                       centered=True, scene=scene)
    state = settle(state, params, criteria, energy_log=energy_log, on_step=on_step)

    a1 = params.width_mm * params.height_mm
    a2 = plate.area_mm2
    a3 = project_area(state)
    return DrapeResult(
        stiffness=drape_stiffness(StiffnessInputs(a1, a2, a3)),
        a1_mm2=a1, a2_mm2=a2, a3_mm2=a3, state=state,
    )


@dataclass(frozen=True)
class InclineResult:
    mu: float
    slide_angle_deg: float
    state: SimState


def run_incline(params: SimParams, *,
                max_angle_deg: float = INCLINE_MAX_DEG,
                step_deg: float = INCLINE_STEP_DEG,
                slide_threshold_mm: float = SLIDE_THRESHOLD_MM,
                window_steps: int = 2500,
                settle_hold_steps: int = 100,
                v_quiet_m_s: float = 1e-3,
                on_step=None) -> InclineResult:
    """Quasi-static incline sweep; returns tan of the slide-onset angle.

    The plane stays at z=0 and gravity rotates instead (identical physics).
    After each angle increment the cloth either goes quiet again (no slide,
    continue) or its centroid travels more than the slide threshold downslope
    (slide detected).  Reaching the angle cap raises ``NoSlide``.
    """
    state = flat_state(params, z_m=0.0, centered=True)
    state = settle(state, params, SettleCriteria(
        v_max_m_s=v_quiet_m_s, hold_steps=settle_hold_steps, max_steps=50_000,
    ), on_step=on_step)

    k = 0
    while True:
        k += 1
        angle_deg = k * step_deg
        if angle_deg > max_angle_deg + 1e-9:
            raise NoSlide(
                f"no slide up to {max_angle_deg} degrees "
                f"(mu >= {math.tan(math.radians(max_angle_deg)):.2f})"
            )
        theta = math.radians(angle_deg)
        state.scene = replace(
            state.scene, gravity_dir=(math.sin(theta), 0.0, -math.cos(theta)),
        )
        start_x = float(state.pos[:, 0].mean())
        quiet = 0
        for _ in range(window_steps):
            _step_inplace(state, params)
            if on_step is not None:
                on_step(state)
            moved_mm = (float(state.pos[:, 0].mean()) - start_x) * 1000.0
            if moved_mm > slide_threshold_mm:
                return InclineResult(
                    mu=math.tan(theta), slide_angle_deg=angle_deg, state=state,
                )
            if max_speed(state) < v_quiet_m_s:
                quiet += 1
                if quiet >= settle_hold_steps:
                    break
            else:
                quiet = 0


@dataclass(frozen=True)
class PullResult:
    elasticity: float
    l_i_mm: float
    l_f_mm: float
    state: SimState


def run_pull(params: SimParams, force_n: float = PULL_FORCE_N, *,
             criteria: SettleCriteria = SettleCriteria(),
             on_step=None) -> PullResult:
    """Pin one edge, load the opposite edge, settle, evaluate the elongation.

    The total force spreads uniformly over the loaded edge's particles; the
    elongation ratio uses the mean edge-to-edge distance along the pull axis.
    """
    if force_n < 0:
        raise ValueError(f"pull force must be >= 0 N, got {force_n}")
    state = flat_state(params, z_m=0.0)
    mesh = state.mesh
    fixed = np.array([mesh.index(0, j) for j in range(mesh.ny)])
    loaded = np.array([mesh.index(mesh.nx - 1, j) for j in range(mesh.ny)])
    state.pinned[fixed] = True
    state.pin_pos[fixed] = state.pos[fixed]
    state.ext_force[loaded, 0] = force_n / mesh.ny

    state = settle(state, params, criteria, on_step=on_step)
    l_i_mm = params.width_mm
    l_f_mm = float(state.pos[loaded, 0].mean() - state.pos[fixed, 0].mean()) * 1000.0
    return PullResult(
        elasticity=(l_f_mm - l_i_mm) / l_i_mm,
        l_i_mm=l_i_mm, l_f_mm=l_f_mm, state=state,
    )


@dataclass(frozen=True)
class PrimitiveRun:
    """One simulated primitive execution with its masks and metric."""

    result: EvalResult
    fr: float
    before_mask: BinaryMask
    after_mask: BinaryMask
    uncovered_mask: BinaryMask | None
    state: SimState


def _drive_grip(state: SimState, params: SimParams, grip: np.ndarray,
                waypoints: list[np.ndarray], speed_m_s: float = GRIP_SPEED_M_S) -> None:
    """Move pinned grip particles through straight segments at fixed speed."""
    current = state.pin_pos[grip].copy()
    for target in waypoints:
        target = np.asarray(target, dtype=np.float64)
        delta = target - current[0]
        dist = float(np.linalg.norm(delta))
        steps = max(1, int(math.ceil(dist / (speed_m_s * params.dt))))
        for s in range(1, steps + 1):
            state.pin_pos[grip] = current + (delta * (s / steps))
            _step_inplace(state, params)
        current = state.pin_pos[grip].copy()


def run_primitive(kind: PrimitiveKind, params: SimParams,
                  prim: PrimitiveParams | None = None, *,
                  criteria: SettleCriteria = SettleCriteria(),
                  px_mm: float = 1.0) -> PrimitiveRun:
    """Execute a primitive from a flattened configuration and score it.

    Corner grip for lift/drag/fold, mid-short-edge grip for pull/push; the
    grip follows the canonical trajectory at the quasi-static speed, the
    cloth settles (fold releases the grip first), and before/after coverage
    masks on a shared canvas feed the FR metric (fold: the constructed
    uncovered-stationary-half mask).
    """
    prim = prim or canonical_params(kind)
    if prim.kind is not kind:
        raise ValueError(f"params are for {prim.kind}, not {kind}")

    state = flat_state(params, z_m=0.0)
    mesh = state.mesh
    w_m = mesh.width_m
    h_m = mesh.height_m
    state0 = state.copy()

    grasp_m = prim.grasp_height_mm / 1000.0
    travel_m = None if prim.travel_mm is None else prim.travel_mm / 1000.0
    release_before_settle = False

    if kind in (PrimitiveKind.LIFT, PrimitiveKind.DRAG, PrimitiveKind.FOLD):
        grip = np.array([mesh.index(0, 0)])
    else:
        # Middle of the shorter edge (the edge whose length is smaller).
        if params.width_mm <= params.height_mm:
            grip = np.array([mesh.index(mesh.nx // 2, 0)])
            inward = np.array([0.0, 1.0, 0.0])
        else:
            grip = np.array([mesh.index(0, mesh.ny // 2)])
            inward = np.array([1.0, 0.0, 0.0])

    state.pinned[grip] = True
    state.pin_pos[grip] = state.pos[grip]
    start = state.pos[grip][0].copy()

    if kind is PrimitiveKind.LIFT:
        waypoints = [
            start + np.array([0.0, 0.0, grasp_m]),
            start + np.array([0.0, 0.0, grasp_m + travel_m]),
        ]
    elif kind is PrimitiveKind.DRAG:
        # Parallel to the table, along the cloth diagonal: the trailing
        # material must either crease and fold over (limp cloth) or push the
        # whole sheet across the surface (stiff cloth).
        direction = np.array([w_m, h_m, 0.0])
        direction /= np.linalg.norm(direction)
        waypoints = [
            start + np.array([0.0, 0.0, grasp_m]),
            start + np.array([0.0, 0.0, grasp_m]) + direction * travel_m,
        ]
    elif kind is PrimitiveKind.FOLD:
        opposite = start + np.array([w_m, h_m, 0.0])
        peak_m = prim.peak_mm / 1000.0
        midpoint = (start + opposite) / 2.0
        waypoints = [
            start + np.array([0.0, 0.0, grasp_m]),
            np.array([midpoint[0], midpoint[1], peak_m]),
            np.array([opposite[0], opposite[1], 0.01]),
        ]
        release_before_settle = True
    elif kind is PrimitiveKind.PULL:
        # The opposite side is held down (the bench uses a heavy object).
        if params.width_mm <= params.height_mm:
            fixed = np.array([mesh.index(i, mesh.ny - 1) for i in range(mesh.nx)])
        else:
            fixed = np.array([mesh.index(mesh.nx - 1, j) for j in range(mesh.ny)])
        state.pinned[fixed] = True
        state.pin_pos[fixed] = state.pos[fixed]
        waypoints = [start - inward * travel_m + np.array([0.0, 0.0, grasp_m])]
    elif kind is PrimitiveKind.PUSH:
        waypoints = [start + inward * travel_m + np.array([0.0, 0.0, grasp_m])]
    else:  # pragma: no cover
        raise ValueError(f"unknown primitive {kind}")

    _drive_grip(state, params, grip, waypoints)
    if release_before_settle:
        state.pinned[grip] = False
    state = settle(state, params, criteria)

    # Shared canvas covering the footprint of both states.
    xy0 = state0.pos[:, 0:2] * 1000.0
    xy1 = state.pos[:, 0:2] * 1000.0
    pad = 5.0
    lo = np.minimum(xy0.min(axis=0), xy1.min(axis=0)) - pad
    hi = np.maximum(xy0.max(axis=0), xy1.max(axis=0)) + pad
    bounds = (float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1]))

    before = project_mask(state0, px_mm=px_mm, bounds_mm=bounds)
    after = project_mask(state, px_mm=px_mm, bounds_mm=bounds)

    uncovered = None
    if kind is PrimitiveKind.FOLD:
        # Stationary half: the triangle beyond the anti-diagonal, which the
        # moving half should land on exactly.
        w_mm, h_mm = w_m * 1000.0, h_m * 1000.0
        half = rasterize_triangles(
            np.array([[w_mm, 0.0], [w_mm, h_mm], [0.0, h_mm]]),
            np.array([[0, 1, 2]]), bounds, px_mm,
        )
        uncovered = BinaryMask(half.bits & ~after.bits, scale_mm_per_px=px_mm)
        fr = fold_ratio(after, uncovered)
    else:
        fr = final_ratio(before, after)

    return PrimitiveRun(
        result=EvalResult.from_runs(kind, [fr]),
        fr=fr,
        before_mask=before,
        after_mask=after,
        uncovered_mask=uncovered,
        state=state,
    )
