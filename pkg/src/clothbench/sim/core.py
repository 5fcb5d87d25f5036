"""Integrator, contacts, settle loop and top-view projection.

One step = semi-implicit Euler over spring + gravity + damping forces,
followed by velocity-level contact resolution against the plane and the
optional plate cylinder.  Contacts are inelastic in the normal direction and
Coulomb-clamped tangentially: the tangential impulse never exceeds mu times
the normal impulse, which reproduces both stick and slide (slide onset at
tan(theta) = mu on an incline, independent of dt).

Determinism: fixed particle/spring iteration order, no randomness, single
threaded numpy; identical inputs give bit-identical trajectories.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import DidNotSettle, NumericalBlowup
from ..masks import BinaryMask
from .mesh import ClothMesh, build_mesh

# Coordinates beyond this (metres) count as a blown-up integration.
BLOWUP_LIMIT_M = 1.0e6


@dataclass(frozen=True)
class SimParams:
    """Cloth and integration parameters.

    Cloth geometry in mm / g (matching the measurement side); spring
    constants in N/m.  ``k_shear`` defaults to ``k_stretch`` (one in-plane
    stiffness knob); ``k_bend`` scales the second-neighbour bending proxy.
    ``damping`` is a velocity-proportional decay rate in 1/s.
    """

    nx: int = 21
    ny: int = 21
    width_mm: float = 300.0
    height_mm: float = 300.0
    mass_area_density_g_mm2: float = 2.5e-4  # 0.25 kg/m^2
    k_stretch: float = 4.0
    k_shear: float | None = None
    k_bend: float = 0.3
    mu: float = 0.3
    damping: float = 10.0
    dt: float = 1e-3
    gravity: float = 9.81

    def __post_init__(self) -> None:
        if self.nx < 2 or self.ny < 2:
            raise ValueError("grid needs at least 2 particles per side")
        if self.width_mm <= 0 or self.height_mm <= 0:
            raise ValueError("cloth size must be positive")
        if self.mass_area_density_g_mm2 <= 0:
            raise ValueError("mass density must be positive")
        if self.k_stretch < 0 or self.k_bend < 0:
            raise ValueError("spring stiffnesses must be >= 0")
        if self.k_shear is not None and self.k_shear < 0:
            raise ValueError("spring stiffnesses must be >= 0")
        if self.mu < 0:
            raise ValueError("friction coefficient must be >= 0")
        if self.damping < 0:
            raise ValueError("damping must be >= 0")
        if self.dt <= 0:
            raise ValueError("dt must be > 0")
        if self.gravity < 0:
            raise ValueError("gravity must be >= 0")

    @property
    def shear_stiffness(self) -> float:
        return self.k_stretch if self.k_shear is None else self.k_shear

    def mesh(self) -> ClothMesh:
        return build_mesh(
            self.nx, self.ny, self.width_mm, self.height_mm,
            self.mass_area_density_g_mm2,
            self.k_stretch, self.shear_stiffness, self.k_bend,
        )


@dataclass(frozen=True)
class Cylinder:
    """Vertical cylinder (the drape plate) standing on the plane."""

    center_x_m: float
    center_y_m: float
    radius_m: float
    top_m: float


@dataclass(frozen=True)
class Scene:
    """Static environment: the table plane at z=0, optional plate, gravity."""

    plane: bool = True
    cylinder: Cylinder | None = None
    gravity_dir: tuple[float, float, float] = (0.0, 0.0, -1.0)


@dataclass
class SimState:
    """Particle state plus the scene it lives in.

    ``pin_pos`` rows are authoritative for pinned particles: they are written
    back verbatim after every step, so pins never drift.  ``ext_force`` is a
    per-particle external load in newtons (used by the pull scenario).
    """

    pos: np.ndarray
    vel: np.ndarray
    pinned: np.ndarray
    pin_pos: np.ndarray
    mesh: ClothMesh
    scene: Scene
    t: float = 0.0
    ext_force: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.ext_force is None:
            self.ext_force = np.zeros_like(self.pos)

    def copy(self) -> "SimState":
        return SimState(
            pos=self.pos.copy(),
            vel=self.vel.copy(),
            pinned=self.pinned.copy(),
            pin_pos=self.pin_pos.copy(),
            mesh=self.mesh,
            scene=self.scene,
            t=self.t,
            ext_force=self.ext_force.copy(),
        )

    def centroid(self) -> np.ndarray:
        return self.pos.mean(axis=0)


@dataclass(frozen=True)
class SettleCriteria:
    """Rest detection: max particle speed below threshold for a hold window."""

    v_max_m_s: float = 1e-3
    hold_steps: int = 200
    max_steps: int = 200_000

    def __post_init__(self) -> None:
        if self.v_max_m_s <= 0 or self.hold_steps <= 0 or self.max_steps <= 0:
            raise ValueError("settle criteria must all be positive")


def initial_state(params: SimParams, *, origin_xy_m: tuple[float, float] = (0.0, 0.0),
                  z_m: float = 0.0, scene: Scene = Scene()) -> SimState:
    """Flat cloth at rest, (0, 0) particle at ``origin_xy_m``."""
    mesh = params.mesh()
    pos = mesh.rest_positions(origin_xy_m, z_m)
    return SimState(
        pos=pos,
        vel=np.zeros_like(pos),
        pinned=np.zeros(mesh.particle_count, dtype=bool),
        pin_pos=pos.copy(),
        mesh=mesh,
        scene=scene,
    )


def _spring_forces(pos: np.ndarray, mesh: ClothMesh, out: np.ndarray) -> None:
    d = pos[mesh.spring_j] - pos[mesh.spring_i]
    length = np.sqrt(np.einsum("ij,ij->i", d, d))
    safe = np.maximum(length, 1e-12)
    coef = mesh.stiffness * (length - mesh.rest_m) / safe
    f = coef[:, None] * d
    np.add.at(out, mesh.spring_i, f)
    np.subtract.at(out, mesh.spring_j, f)


def _horizontal_face_contact(pos: np.ndarray, vel: np.ndarray, idx: np.ndarray,
                             mu: float, dt: float, plane_z: float) -> None:
    """Inelastic landing on a horizontal face plus Coulomb tangential clamp.

    ``idx`` selects the particles whose predicted position falls below
    ``plane_z``.  The normal velocity is set so the particle lands exactly on
    the face; the tangential speed loses at most mu times the normal impulse.
    """
    target_vz = (plane_z - pos[idx, 2]) / dt
    jn = target_vz - vel[idx, 2]  # upward normal impulse per unit mass, > 0
    vt = vel[idx, 0:2]
    speed = np.sqrt(np.einsum("ij,ij->i", vt, vt))
    scale = np.maximum(0.0, 1.0 - mu * jn / np.maximum(speed, 1e-300))
    vel[idx, 0:2] = vt * scale[:, None]
    vel[idx, 2] = target_vz


def _plane_contact(pos: np.ndarray, vel: np.ndarray, mu: float, dt: float) -> None:
    pen = pos[:, 2] + dt * vel[:, 2] < 0.0
    if pen.any():
        _horizontal_face_contact(pos, vel, np.flatnonzero(pen), mu, dt, 0.0)


def _cylinder_contact(pos: np.ndarray, vel: np.ndarray, cyl: Cylinder,
                      mu: float, dt: float) -> None:
    rel = pos[:, 0:2] - np.array([cyl.center_x_m, cyl.center_y_m])
    pred_xy = rel + dt * vel[:, 0:2]
    pred_r = np.sqrt(np.einsum("ij,ij->i", pred_xy, pred_xy))
    pred_z = pos[:, 2] + dt * vel[:, 2]
    inside = (pred_r < cyl.radius_m) & (pred_z < cyl.top_m) & (pred_z > 0.0)
    if not inside.any():
        return

    # Approaching from above: treat the top disk as a local plane.
    from_above = inside & (pos[:, 2] >= cyl.top_m)
    if from_above.any():
        _horizontal_face_contact(pos, vel, np.flatnonzero(from_above),
                                 mu, dt, cyl.top_m)

    # Side wall: push out radially, clamp the tangential (z + circumferential)
    # velocity by the Coulomb cone.
    side = inside & ~from_above
    if side.any():
        idx = np.flatnonzero(side)
        r = np.sqrt(np.einsum("ij,ij->i", rel[idx], rel[idx]))
        ok = r > 1e-12
        idx = idx[ok]
        if idx.size == 0:
            return
        n = rel[idx] / r[ok, None]  # outward radial normal (xy)
        v = vel[idx]
        v_r = np.einsum("ij,ij->i", v[:, 0:2], n)
        target_vr = (cyl.radius_m - r[ok]) / dt
        jn = target_vr - v_r
        push = jn > 0.0
        if not push.any():
            return
        idx, n, v, v_r = idx[push], n[push], v[push], v_r[push]
        jn, target_vr = jn[push], target_vr[push]
        vt = v.copy()
        vt[:, 0:2] -= v_r[:, None] * n
        speed = np.sqrt(np.einsum("ij,ij->i", vt, vt))
        scale = np.maximum(0.0, 1.0 - mu * jn / np.maximum(speed, 1e-300))
        v_new = vt * scale[:, None]
        v_new[:, 0:2] += target_vr[:, None] * n
        vel[idx] = v_new


def _project_out(pos: np.ndarray, scene: Scene) -> None:
    """Backup positional projection; velocity handling keeps this a no-op."""
    if scene.plane:
        np.maximum(pos[:, 2], 0.0, out=pos[:, 2])
    cyl = scene.cylinder
    if cyl is not None:
        rel = pos[:, 0:2] - np.array([cyl.center_x_m, cyl.center_y_m])
        r = np.sqrt(np.einsum("ij,ij->i", rel, rel))
        inside = (r < cyl.radius_m) & (pos[:, 2] < cyl.top_m) & (pos[:, 2] > 0.0)
        if inside.any():
            idx = np.flatnonzero(inside)
            d_top = cyl.top_m - pos[idx, 2]
            d_side = cyl.radius_m - r[idx]
            to_top = d_top <= d_side
            pos[idx[to_top], 2] = cyl.top_m
            side = idx[~to_top]
            rs = r[side]
            ok = rs > 1e-12
            side = side[ok]
            if side.size:
                pos[side, 0:2] = (rel[side] / rs[ok, None]) * cyl.radius_m \
                    + np.array([cyl.center_x_m, cyl.center_y_m])


def _step_inplace(state: SimState, params: SimParams) -> None:
    mesh = state.mesh
    dt = params.dt
    m = mesh.particle_mass_kg

    force = np.zeros_like(state.pos)
    _spring_forces(state.pos, mesh, force)
    gdir = np.asarray(state.scene.gravity_dir, dtype=np.float64)
    force += (m * params.gravity) * gdir
    force -= (params.damping * m) * state.vel
    force += state.ext_force

    state.vel += (dt / m) * force
    if state.scene.plane:
        _plane_contact(state.pos, state.vel, params.mu, dt)
    if state.scene.cylinder is not None:
        _cylinder_contact(state.pos, state.vel, state.scene.cylinder, params.mu, dt)
    state.pos += dt * state.vel
    _project_out(state.pos, state.scene)

    if state.pinned.any():
        state.pos[state.pinned] = state.pin_pos[state.pinned]
        state.vel[state.pinned] = 0.0
    state.t += dt

    if not np.isfinite(state.pos).all() or np.abs(state.pos).max() > BLOWUP_LIMIT_M:
        raise NumericalBlowup(f"integration diverged at t={state.t:.4f}s")


def step(state: SimState, params: SimParams) -> SimState:
    """One integration step as a pure function (input state untouched)."""
    out = state.copy()
    _step_inplace(out, params)
    return out


def total_energy(state: SimState, params: SimParams) -> float:
    """Kinetic + gravitational + elastic energy, joules.

    Gravitational potential is measured against the gravity direction, so the
    value is meaningful for tilted gravity too.
    """
    mesh = state.mesh
    m = mesh.particle_mass_kg
    kinetic = 0.5 * m * float(np.einsum("ij,ij->", state.vel, state.vel))
    gdir = np.asarray(state.scene.gravity_dir, dtype=np.float64)
    potential = -m * params.gravity * float(np.einsum("ij,j->", state.pos, gdir))
    d = state.pos[mesh.spring_j] - state.pos[mesh.spring_i]
    length = np.sqrt(np.einsum("ij,ij->i", d, d))
    elastic = 0.5 * float(np.sum(mesh.stiffness * (length - mesh.rest_m) ** 2))
    return kinetic + potential + elastic


def max_speed(state: SimState) -> float:
    v = state.vel
    return float(np.sqrt(np.einsum("ij,ij->i", v, v).max()))


def settle(state: SimState, params: SimParams,
           criteria: SettleCriteria = SettleCriteria(),
           energy_log: list | None = None,
           on_step=None) -> SimState:
    """Integrate until quiet: max speed below threshold for the hold window.

    ``energy_log`` (if given) collects total energy every 100 steps, first
    sample before stepping.  Raises ``DidNotSettle`` at the step cap.
    """
    st = state.copy()
    if energy_log is not None:
        energy_log.append(total_energy(st, params))
    quiet = 0
    for k in range(criteria.max_steps):
        _step_inplace(st, params)
        if energy_log is not None and (k + 1) % 100 == 0:
            energy_log.append(total_energy(st, params))
        if on_step is not None:
            on_step(st)
        if max_speed(st) < criteria.v_max_m_s:
            quiet += 1
            if quiet >= criteria.hold_steps:
                return st
        else:
            quiet = 0
    raise DidNotSettle(
        f"still moving after {criteria.max_steps} steps "
        f"(max speed {max_speed(st):.2e} m/s)"
    )


def rasterize_triangles(vertices_mm: np.ndarray, triangles: np.ndarray,
                        bounds_mm: tuple[float, float, float, float],
                        px_mm: float = 1.0) -> BinaryMask:
    """Fill 2-D triangles onto a pixel grid; a pixel is covered when its
    centre lies inside (inclusive) any triangle.

    ``bounds_mm`` = (xmin, ymin, xmax, ymax) fixes the canvas so several
    states can be rasterized onto aligned masks.
    """
    xmin, ymin, xmax, ymax = bounds_mm
    width = max(1, int(math.ceil((xmax - xmin) / px_mm)))
    height = max(1, int(math.ceil((ymax - ymin) / px_mm)))
    bits = np.zeros((height, width), dtype=bool)

    # Vertex coordinates in pixel units relative to the canvas origin.
    pts = (vertices_mm - np.array([xmin, ymin])) / px_mm
    eps = 1e-9
    for tri in triangles:
        a, b, c = pts[tri[0]], pts[tri[1]], pts[tri[2]]
        lo = np.floor(np.minimum(np.minimum(a, b), c)).astype(int)
        hi = np.ceil(np.maximum(np.maximum(a, b), c)).astype(int)
        x0, y0 = max(lo[0], 0), max(lo[1], 0)
        x1, y1 = min(hi[0] + 1, width), min(hi[1] + 1, height)
        if x0 >= x1 or y0 >= y1:
            continue
        v0 = b - a
        v1 = c - a
        den = v0[0] * v1[1] - v0[1] * v1[0]
        if abs(den) < 1e-12:
            continue
        xs = (np.arange(x0, x1) + 0.5) - a[0]
        ys = (np.arange(y0, y1) + 0.5) - a[1]
        px, py = np.meshgrid(xs, ys)
        s = (px * v1[1] - py * v1[0]) / den
        t = (v0[0] * py - v0[1] * px) / den
        bits[y0:y1, x0:x1] |= (s >= -eps) & (t >= -eps) & (s + t <= 1.0 + eps)

    return BinaryMask(bits, scale_mm_per_px=px_mm)


def project_mask(state: SimState, *, px_mm: float = 1.0,
                 bounds_mm: tuple[float, float, float, float] | None = None,
                 pad_mm: float = 2.0) -> BinaryMask:
    """Top-view coverage mask of the cloth mesh at 1 mm/px by default."""
    xy_mm = state.pos[:, 0:2] * 1000.0
    if bounds_mm is None:
        xmin, ymin = xy_mm.min(axis=0) - pad_mm
        xmax, ymax = xy_mm.max(axis=0) + pad_mm
        bounds_mm = (float(xmin), float(ymin), float(xmax), float(ymax))
    return rasterize_triangles(xy_mm, state.mesh.triangles, bounds_mm, px_mm)


def project_area(state: SimState, px_mm: float = 1.0) -> float:
    """Vertically projected cloth area in mm^2 (pixel-counted)."""
    mask = project_mask(state, px_mm=px_mm)
    return float(np.count_nonzero(mask.bits)) * px_mm * px_mm
