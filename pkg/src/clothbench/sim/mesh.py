"""Cloth mesh topology: particle grid, spring network, projection triangles.

The grid is nx x ny particles; index(i, j) = j * nx + i.  Three spring
families connect it:

* structural -- grid neighbours (dx=1 or dy=1), in-plane stretch resistance;
* shear      -- cell diagonals, in-plane shear resistance;
* bend       -- second neighbours (dx=2 or dy=2), an out-of-plane bending
  proxy: the chord shortens when the sheet curves, so these springs resist
  curvature with a single force law.

Everything is SI internally (metres, kilograms); the public parameter surface
speaks mm and grams.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class ClothMesh:
    nx: int
    ny: int
    spacing_x_m: float
    spacing_y_m: float
    particle_mass_kg: float
    spring_i: np.ndarray  # (M,) int32
    spring_j: np.ndarray  # (M,) int32
    rest_m: np.ndarray    # (M,) float64
    stiffness: np.ndarray  # (M,) float64, N/m
    triangles: np.ndarray  # (T, 3) int32

    @property
    def particle_count(self) -> int:
        return self.nx * self.ny

    @property
    def width_m(self) -> float:
        return (self.nx - 1) * self.spacing_x_m

    @property
    def height_m(self) -> float:
        return (self.ny - 1) * self.spacing_y_m

    def index(self, i: int, j: int) -> int:
        return j * self.nx + i

    def rest_positions(self, origin_xy_m: tuple[float, float] = (0.0, 0.0),
                       z_m: float = 0.0) -> np.ndarray:
        """Flat rest layout with the (0, 0) particle at ``origin_xy_m``."""
        xs = origin_xy_m[0] + np.arange(self.nx) * self.spacing_x_m
        ys = origin_xy_m[1] + np.arange(self.ny) * self.spacing_y_m
        xx, yy = np.meshgrid(xs, ys)  # row j varies y
        pos = np.empty((self.particle_count, 3), dtype=np.float64)
        pos[:, 0] = xx.ravel()
        pos[:, 1] = yy.ravel()
        pos[:, 2] = z_m
        return pos


def build_mesh(nx: int, ny: int, width_mm: float, height_mm: float,
               mass_area_density_g_mm2: float, k_stretch: float,
               k_shear: float, k_bend: float) -> ClothMesh:
    """Assemble the spring network in a fixed, reproducible order."""
    sx = width_mm / 1000.0 / (nx - 1)
    sy = height_mm / 1000.0 / (ny - 1)
    total_mass_kg = mass_area_density_g_mm2 * width_mm * height_mm / 1000.0
    particle_mass = total_mass_kg / (nx * ny)

    def idx(i: int, j: int) -> int:
        return j * nx + i

    si: list[int] = []
    sj: list[int] = []
    ks: list[float] = []

    def add(a: int, b: int, k: float) -> None:
        si.append(a)
        sj.append(b)
        ks.append(k)

    for j in range(ny):
        for i in range(nx):
            a = idx(i, j)
            if i + 1 < nx:
                add(a, idx(i + 1, j), k_stretch)
            if j + 1 < ny:
                add(a, idx(i, j + 1), k_stretch)
            if i + 1 < nx and j + 1 < ny:
                add(a, idx(i + 1, j + 1), k_shear)
                add(idx(i + 1, j), idx(i, j + 1), k_shear)
            if i + 2 < nx:
                add(a, idx(i + 2, j), k_bend)
            if j + 2 < ny:
                add(a, idx(i, j + 2), k_bend)

    triangles: list[tuple[int, int, int]] = []
    for j in range(ny - 1):
        for i in range(nx - 1):
            a, b = idx(i, j), idx(i + 1, j)
            c, d = idx(i, j + 1), idx(i + 1, j + 1)
            triangles.append((a, b, c))
            triangles.append((b, d, c))

    spring_i = np.asarray(si, dtype=np.int32)
    spring_j = np.asarray(sj, dtype=np.int32)

    # Rest lengths come from the rest layout through the same distance code the
    # integrator uses, so an undisturbed grid is a bit-exact equilibrium.
    xs = np.arange(nx) * sx
    ys = np.arange(ny) * sy
    xx, yy = np.meshgrid(xs, ys)
    flat = np.column_stack([xx.ravel(), yy.ravel()])
    d = flat[spring_j] - flat[spring_i]
    rest = np.sqrt(np.einsum("ij,ij->i", d, d))

    return ClothMesh(
        nx=nx,
        ny=ny,
        spacing_x_m=sx,
        spacing_y_m=sy,
        particle_mass_kg=particle_mass,
        spring_i=spring_i,
        spring_j=spring_j,
        rest_m=rest,
        stiffness=np.asarray(ks, dtype=np.float64),
        triangles=np.asarray(triangles, dtype=np.int32),
    )
