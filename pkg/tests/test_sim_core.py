import numpy as np
import pytest

from clothbench.errors import DidNotSettle, NumericalBlowup
from clothbench.sim import (
    Scene,
    SettleCriteria,
    SimParams,
    flat_state,
    project_area,
    project_mask,
    settle,
    step,
    total_energy,
)

FREE_FALL = Scene(plane=False)


def small(**kw) -> SimParams:
    base = dict(nx=7, ny=7, width_mm=120.0, height_mm=120.0)
    base.update(kw)
    return SimParams(**base)


class TestStep:
    def test_equilibrium_without_gravity(self):
        params = small(gravity=0.0)
        state = flat_state(params, z_m=0.05, scene=FREE_FALL)
        after = step(state, params)
        assert np.array_equal(after.pos, state.pos)
        assert np.array_equal(after.vel, state.vel)

    def test_free_fall_hand_integration(self):
        # springs at rest cancel; every particle integrates like a point mass:
        # v' = -g dt, z' = z + v' dt (semi-implicit order)
        params = small()
        state = flat_state(params, z_m=0.1, scene=FREE_FALL)
        after = step(state, params)
        g, dt = params.gravity, params.dt
        assert after.vel[:, 2] == pytest.approx(-g * dt, abs=1e-15)
        assert after.pos[:, 2] == pytest.approx(0.1 - g * dt * dt, abs=1e-15)

    def test_input_state_untouched(self):
        params = small()
        state = flat_state(params, z_m=0.1, scene=FREE_FALL)
        before = state.pos.copy()
        step(state, params)
        assert np.array_equal(state.pos, before)

    def test_blowup_detected(self):
        params = small(k_stretch=100.0, dt=1.0)
        state = flat_state(params, z_m=0.1, scene=FREE_FALL)
        state.pos[0, 2] += 0.01  # perturb a spring so forces act
        with pytest.raises(NumericalBlowup):
            settle(state, params, SettleCriteria(max_steps=500))

    def test_determinism_bit_identical(self):
        params = small()
        runs = []
        for _ in range(2):
            state = flat_state(params, z_m=0.003)
            for _ in range(400):
                state = step(state, params)
            runs.append(state)
        assert runs[0].pos.tobytes() == runs[1].pos.tobytes()
        assert runs[0].vel.tobytes() == runs[1].vel.tobytes()


class TestPinsAndContacts:
    def test_pinned_drift_exactly_zero(self):
        params = small()
        state = flat_state(params, z_m=0.2, scene=FREE_FALL)
        mesh = state.mesh
        top = np.array([mesh.index(i, mesh.ny - 1) for i in range(mesh.nx)])
        state.pinned[top] = True
        state.pin_pos[top] = state.pos[top]
        anchored = state.pin_pos[top].copy()
        settled = settle(state, params, SettleCriteria(max_steps=100_000))
        assert np.array_equal(settled.pos[top], anchored)
        assert np.all(settled.vel[top] == 0.0)

    def test_no_plane_penetration_after_settle(self):
        params = small()
        state = flat_state(params, z_m=0.005)
        settled = settle(state, params)
        assert settled.pos[:, 2].min() >= -1e-4  # 0.1 mm

    def test_drop_settles_under_cap(self):
        params = small()
        state = flat_state(params, z_m=0.005)
        settled = settle(state, params)
        assert settled.pos[:, 2].max() <= 1e-4

    def test_undamped_oscillation_never_settles(self):
        # free swing with no dissipation: kinetic energy persists
        params = small(damping=0.0, mu=0.0)
        state = flat_state(params, z_m=0.2, scene=FREE_FALL)
        mesh = state.mesh
        top = np.array([mesh.index(i, mesh.ny - 1) for i in range(mesh.nx)])
        state.pinned[top] = True
        state.pin_pos[top] = state.pos[top]
        state.pos[: mesh.nx, 2] += 0.01  # pluck the bottom row
        with pytest.raises(DidNotSettle):
            settle(state, params, SettleCriteria(max_steps=5000))


class TestEnergy:
    def test_non_increasing_during_damped_settle(self):
        params = small()
        state = flat_state(params, z_m=0.01)
        log: list[float] = []
        settle(state, params, energy_log=log)
        assert len(log) >= 2
        for before, after in zip(log, log[1:]):
            assert after <= before + 1e-9 * abs(before) + 1e-15

    def test_energy_components_finite(self):
        params = small()
        state = flat_state(params, z_m=0.01)
        assert np.isfinite(total_energy(state, params))


class TestProjection:
    def test_flat_square(self):
        params = SimParams()
        area = project_area(flat_state(params))
        assert area == pytest.approx(300.0 * 300.0, rel=0.01)

    def test_half_fold(self):
        params = SimParams()
        state = flat_state(params)
        mesh = state.mesh
        x = state.pos[:, 0]
        w = mesh.width_m
        over = x > w / 2.0
        state.pos[over, 2] = 0.001
        state.pos[over, 0] = w - x[over]
        assert project_area(state) == pytest.approx(45_000.0, rel=0.02)

    def test_degenerate_state(self):
        params = small()
        state = flat_state(params)
        state.pos[:] = np.array([0.05, 0.05, 0.0])
        assert project_area(state) <= 16.0  # collapses to (near) zero

    def test_shared_canvas_alignment(self):
        params = small()
        a = flat_state(params)
        b = flat_state(params)
        bounds = (-10.0, -10.0, 140.0, 140.0)
        mask_a = project_mask(a, bounds_mm=bounds)
        mask_b = project_mask(b, bounds_mm=bounds)
        assert mask_a.bits.shape == mask_b.bits.shape
        assert np.array_equal(mask_a.bits, mask_b.bits)


class TestParams:
    @pytest.mark.parametrize("kw", [
        dict(nx=1), dict(dt=0.0), dict(k_stretch=-1.0), dict(mu=-0.5),
        dict(damping=-1.0), dict(width_mm=0.0), dict(mass_area_density_g_mm2=0.0),
    ])
    def test_invalid_params_rejected(self, kw):
        with pytest.raises(ValueError):
            small(**kw)

    def test_shear_defaults_to_stretch(self):
        assert small(k_stretch=7.0).shear_stiffness == 7.0
        assert small(k_stretch=7.0, k_shear=1.5).shear_stiffness == 1.5

    def test_settle_criteria_validated(self):
        with pytest.raises(ValueError):
            SettleCriteria(v_max_m_s=0.0)
