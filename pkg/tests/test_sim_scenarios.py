import warnings

import numpy as np
import pytest

from clothbench.errors import NoSlide
from clothbench.evaluation import PrimitiveKind
from clothbench.measure import PlateSpec
from clothbench.sim import (
    SimParams,
    run_drape,
    run_incline,
    run_primitive,
    run_pull,
)

pytestmark = pytest.mark.filterwarnings("ignore::UserWarning")


class TestDrape:
    def test_floppy_limit(self):
        params = SimParams(k_bend=0.0)
        result = run_drape(params, PlateSpec(diameter_mm=180.0))
        assert result.stiffness <= 0.4
        assert result.a2_mm2 <= result.a3_mm2 <= result.a1_mm2

    def test_rigid_limit(self):
        params = SimParams(k_stretch=1500.0, k_bend=1500.0, damping=15.0, dt=3e-5)
        result = run_drape(params, PlateSpec(diameter_mm=180.0))
        assert result.stiffness >= 0.9

    def test_five_point_sweep_nondecreasing(self):
        values = []
        for k_bend in (0.1, 0.5, 1.0, 5.0, 10.0):
            params = SimParams(k_bend=k_bend)
            values.append(run_drape(params, PlateSpec(diameter_mm=180.0)).stiffness)
        assert all(a <= b + 1e-9 for a, b in zip(values, values[1:]))


class TestIncline:
    def test_frictionless(self):
        params = SimParams(nx=9, ny=9, width_mm=150.0, height_mm=150.0, mu=0.0)
        assert run_incline(params).mu <= 0.02

    def test_recovers_half(self):
        params = SimParams(nx=9, ny=9, width_mm=150.0, height_mm=150.0, mu=0.5)
        recovered = run_incline(params).mu
        assert 0.45 <= recovered <= 0.55

    def test_no_slide_for_extreme_mu(self):
        params = SimParams(nx=9, ny=9, width_mm=150.0, height_mm=150.0, mu=10.0)
        with pytest.raises(NoSlide):
            run_incline(params)


class TestPull:
    def test_zero_force(self):
        params = SimParams(nx=6, ny=5, width_mm=250.0, height_mm=200.0,
                           k_shear=0.0, k_bend=0.0, gravity=0.0, damping=8.0)
        assert abs(run_pull(params, 0.0).elasticity) <= 1e-6

    def hookean_params(self, k_stretch):
        return SimParams(nx=6, ny=5, width_mm=250.0, height_mm=200.0,
                         k_stretch=k_stretch, k_shear=0.0, k_bend=0.0,
                         gravity=0.0, damping=8.0)

    def test_matches_series_parallel_composition(self):
        force = 4.905
        for k_stretch in (20.0, 40.0):
            params = self.hookean_params(k_stretch)
            # ny parallel chains of (nx - 1) identical springs in series
            k_eff = k_stretch * params.ny / (params.nx - 1)
            predicted = force / k_eff / (params.width_mm / 1000.0)
            simulated = run_pull(params, force).elasticity
            assert simulated == pytest.approx(predicted, rel=0.10)

    def test_doubling_stiffness_halves_elasticity(self):
        force = 4.905
        one = run_pull(self.hookean_params(20.0), force).elasticity
        two = run_pull(self.hookean_params(40.0), force).elasticity
        assert two == pytest.approx(one / 2.0, rel=0.10)


def trend_cloth(k_bend, mu=0.3, **kw) -> SimParams:
    base = dict(nx=17, ny=17, width_mm=300.0, height_mm=300.0,
                k_bend=k_bend, mu=mu, damping=10.0)
    base.update(kw)
    return SimParams(**base)


class TestPrimitives:
    def test_lift_rigid_beats_floppy(self):
        floppy = run_primitive(PrimitiveKind.LIFT, trend_cloth(0.0, mu=0.9)).fr
        stiff = run_primitive(PrimitiveKind.LIFT, trend_cloth(0.3, mu=0.9)).fr
        assert stiff >= floppy

    def test_push_low_friction_retains_more(self):
        slick = run_primitive(PrimitiveKind.PUSH, trend_cloth(0.3, mu=0.1)).fr
        grippy = run_primitive(PrimitiveKind.PUSH, trend_cloth(0.3, mu=0.8)).fr
        assert slick >= grippy

    def test_pull_near_inextensible(self):
        params = SimParams(nx=17, ny=17, width_mm=300.0, height_mm=300.0,
                           k_stretch=400.0, k_bend=2.0, mu=0.3,
                           damping=12.0, dt=1e-4)
        assert run_primitive(PrimitiveKind.PULL, params).fr >= 0.95

    def test_fold_produces_half_footprint(self):
        run = run_primitive(PrimitiveKind.FOLD, trend_cloth(0.3))
        before = np.count_nonzero(run.before_mask.bits)
        after = np.count_nonzero(run.after_mask.bits)
        assert after == pytest.approx(before / 2.0, rel=0.15)
        assert run.uncovered_mask is not None
        assert 0.0 <= run.fr <= 1.0

    def test_masks_share_canvas(self):
        run = run_primitive(PrimitiveKind.DRAG, trend_cloth(0.3))
        assert run.before_mask.bits.shape == run.after_mask.bits.shape

    def test_result_records_single_run(self):
        run = run_primitive(PrimitiveKind.PUSH, trend_cloth(0.3, mu=0.1))
        assert run.result.primitive is PrimitiveKind.PUSH
        assert run.result.repetitions == (run.fr,)
        assert run.result.stddev == 0.0
