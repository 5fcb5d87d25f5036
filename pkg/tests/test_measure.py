import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from clothbench.errors import (
    DegeneratePlate,
    DuplicateLine,
    InvalidLengths,
    InvalidRatio,
    MissingScale,
    OutOfRange,
    SlideAngleInvalid,
)
from clothbench.masks import SegmentationConfig
from clothbench.measure import (
    ElasticityInputs,
    FrictionInputs,
    PlateSpec,
    StiffnessInputs,
    critical_height,
    derive_value,
    drape_stiffness,
    elasticity,
    elasticity_profile,
    elasticity_record,
    friction_coefficient,
    friction_record,
    normalize_sample,
    plate_diameter,
    stiffness_from_images,
)
from clothbench.model import ClothObject, ColorLabel, ReferenceLine, ShapeCategory
from tests.conftest import disk_image

L1, L2, L3, L4 = ReferenceLine


class TestPlateDiameter:
    def test_default_coverage(self):
        assert plate_diameter(300.0) == pytest.approx(180.0, abs=1e-9)

    def test_half_coverage(self):
        assert plate_diameter(300.0, 0.5) == pytest.approx(150.0, abs=1e-9)

    def test_ratio_out_of_bounds(self):
        with pytest.raises(InvalidRatio):
            plate_diameter(300.0, 1.2)
        with pytest.raises(InvalidRatio):
            PlateSpec(diameter_mm=100.0, coverage_ratio=0.0)


def rect_object(dims, shape="rectangular") -> ClothObject:
    return ClothObject(
        id="x", name="x", shape=ShapeCategory(shape), dimensions=dims,
        weight_g=100.0, colors=frozenset({ColorLabel.WHITE}),
    )


class TestNormalizeSample:
    def test_compliant_rectangle_passes_through(self):
        eff = normalize_sample(rect_object(((L1, 300.0), (L2, 500.0))))
        assert (eff.width_mm, eff.height_mm, eff.folds) == (300.0, 500.0, 0)

    def test_bedsheet_halving_trace(self):
        # 1400x2000 -> 1400x1000 -> 700x1000 -> 700x500 -> 350x500: 4 folds,
        # always halving the current longest edge.
        eff = normalize_sample(rect_object(((L1, 1400.0), (L2, 2000.0))))
        assert (eff.width_mm, eff.height_mm, eff.folds) == (350.0, 500.0, 4)

    def test_tshirt_bounding_rectangle_then_fold(self):
        eff = normalize_sample(rect_object(((L1, 450.0), (L2, 600.0)), shape="tshirt"))
        assert (eff.width_mm, eff.height_mm, eff.folds) == (450.0, 300.0, 1)

    def test_never_exceeds_max_edge(self):
        for dims in (((L1, 501.0), (L2, 100.0)), ((L1, 3000.0), (L2, 2600.0))):
            eff = normalize_sample(rect_object(dims))
            assert max(eff.width_mm, eff.height_mm) <= 500.0
            assert eff.folds > 0


class TestDrapeStiffness:
    # areas in any consistent unit; these fixtures use cm^2
    def test_rigid_limit(self):
        assert drape_stiffness(StiffnessInputs(900.0, 324.0, 900.0)) == 1.0

    def test_fully_draped_limit(self):
        assert drape_stiffness(StiffnessInputs(900.0, 324.0, 324.0)) == 0.0

    def test_midpoint(self):
        assert drape_stiffness(StiffnessInputs(900.0, 324.0, 612.0)) == 0.5

    def test_degenerate_plate(self):
        with pytest.raises(DegeneratePlate):
            StiffnessInputs(324.0, 324.0, 300.0)

    def test_out_of_range_rejected(self):
        with pytest.raises(OutOfRange):
            drape_stiffness(StiffnessInputs(900.0, 324.0, 900.0 * 1.06))
        with pytest.raises(OutOfRange):
            drape_stiffness(StiffnessInputs(900.0, 324.0, 324.0 * 0.94))

    def test_within_tolerance_clamped(self):
        assert drape_stiffness(StiffnessInputs(900.0, 324.0, 900.0 * 1.04)) == 1.0
        assert drape_stiffness(StiffnessInputs(900.0, 324.0, 324.0 * 0.96)) == 0.0

    @given(
        a1=st.floats(min_value=100.0, max_value=1e6),
        ratio=st.floats(min_value=0.05, max_value=0.95),
        t=st.floats(min_value=0.0, max_value=1.0),
        scale=st.floats(min_value=1e-3, max_value=1e3),
    )
    def test_scale_invariance(self, a1, ratio, t, scale):
        a2 = a1 * ratio
        a3 = a2 + t * (a1 - a2)
        base = drape_stiffness(StiffnessInputs(a1, a2, a3))
        scaled = drape_stiffness(StiffnessInputs(a1 * scale, a2 * scale, a3 * scale))
        assert scaled == pytest.approx(base, abs=1e-12)

    @given(
        t1=st.floats(min_value=0.0, max_value=1.0),
        t2=st.floats(min_value=0.0, max_value=1.0),
    )
    def test_monotone_in_a3(self, t1, t2):
        a1, a2 = 900.0, 324.0
        lo, hi = sorted((t1, t2))
        f = lambda t: drape_stiffness(StiffnessInputs(a1, a2, a2 + t * (a1 - a2)))
        assert f(lo) <= f(hi)


class TestElasticity:
    def test_no_stretch(self):
        assert elasticity(ElasticityInputs(L1, 200.0, 200.0)) == 0.0

    def test_half_stretch(self):
        assert elasticity(ElasticityInputs(L1, 100.0, 150.0)) == 0.5

    def test_sample_c_value(self):
        # 87% elongation realized by the 100 -> 187 mm pair
        assert elasticity(ElasticityInputs(L1, 100.0, 187.0)) == pytest.approx(0.87, abs=1e-9)

    def test_invalid_lengths(self):
        with pytest.raises(InvalidLengths):
            ElasticityInputs(L1, 100.0, 90.0)
        with pytest.raises(InvalidLengths):
            ElasticityInputs(L1, 0.0, 90.0)

    @given(
        l_i=st.floats(min_value=1.0, max_value=1e4),
        stretch1=st.floats(min_value=0.0, max_value=5.0),
        stretch2=st.floats(min_value=0.0, max_value=5.0),
    )
    def test_zero_at_rest_and_monotone(self, l_i, stretch1, stretch2):
        assert elasticity(ElasticityInputs(L1, l_i, l_i)) == 0.0
        lo, hi = sorted((stretch1, stretch2))
        assert (elasticity(ElasticityInputs(L1, l_i, l_i * (1 + lo)))
                <= elasticity(ElasticityInputs(L1, l_i, l_i * (1 + hi))))

    def test_profile_single_line(self):
        profile = elasticity_profile([ElasticityInputs(L1, 100.0, 130.0)])
        assert profile.summary == pytest.approx(0.3, abs=1e-12)

    def test_profile_summary_is_max(self):
        profile = elasticity_profile([
            ElasticityInputs(L1, 100.0, 110.0),
            ElasticityInputs(L2, 100.0, 140.0),
        ])
        assert dict(profile.per_line)[L1] == pytest.approx(0.1, abs=1e-12)
        assert profile.summary == pytest.approx(0.4, abs=1e-12)
        assert profile.summary == max(v for _, v in profile.per_line)

    def test_profile_duplicate_line(self):
        with pytest.raises(DuplicateLine):
            elasticity_profile([
                ElasticityInputs(L1, 100.0, 110.0),
                ElasticityInputs(L1, 100.0, 120.0),
            ])


class TestFriction:
    def test_flat_incline(self):
        assert friction_coefficient(FrictionInputs(0.0, 60.0)) == 0.0

    def test_forty_five_degrees(self):
        h = 100.0 / math.sqrt(2.0)
        assert friction_coefficient(FrictionInputs(h, 100.0)) == pytest.approx(1.0, abs=1e-12)

    def test_closed_form_example(self):
        mu = friction_coefficient(FrictionInputs(30.0, 60.0))
        assert mu == pytest.approx(0.5 / math.sqrt(0.75), abs=1e-9)

    def test_invalid_geometry(self):
        with pytest.raises(SlideAngleInvalid):
            FrictionInputs(60.0, 60.0)
        with pytest.raises(SlideAngleInvalid):
            FrictionInputs(-1.0, 60.0)
        with pytest.raises(SlideAngleInvalid):
            FrictionInputs(10.0, 0.0)

    def test_matches_paper_form_over_range(self):
        # h / sqrt(l^2 - h^2) vs tan(asin(h/l)), 1000 samples
        length = 1.0
        for k in range(1000):
            ratio = 0.999 * k / 999.0
            mine = friction_coefficient(FrictionInputs(ratio * length, length))
            reference = math.tan(math.asin(ratio))
            assert abs(mine - reference) <= 1e-12 * max(1.0, abs(reference))

    @given(
        h1=st.floats(min_value=0.0, max_value=0.99),
        h2=st.floats(min_value=0.0, max_value=0.99),
    )
    def test_monotone_in_height(self, h1, h2):
        lo, hi = sorted((h1, h2))
        assert (friction_coefficient(FrictionInputs(lo, 1.0))
                <= friction_coefficient(FrictionInputs(hi, 1.0)))


class TestCriticalHeight:
    def test_zero_mu(self):
        assert critical_height(0.0, 100.0) == 0.0

    def test_unit_mu(self):
        assert critical_height(1.0, 100.0) == pytest.approx(100.0 / math.sqrt(2.0), abs=1e-9)

    def test_round_trip_example(self):
        h = critical_height(0.577350, 60.0)
        assert h == pytest.approx(30.0, abs=1e-4)
        assert friction_coefficient(FrictionInputs(h, 60.0)) == pytest.approx(0.577350, abs=1e-9)

    @given(mu=st.floats(min_value=0.0, max_value=10.0))
    def test_round_trip_property(self, mu):
        h = critical_height(mu, 60.0)
        assert friction_coefficient(FrictionInputs(h, 60.0)) == pytest.approx(mu, abs=1e-9)


class TestStiffnessFromImages:
    def test_draped_equals_plate_is_zero(self):
        flat = disk_image(400, 400, 200, 200, 150)
        draped = disk_image(400, 400, 200, 200, 90)
        record = stiffness_from_images(
            draped, PlateSpec(diameter_mm=180.0), SegmentationConfig(),
            flat_image=flat, scale_mm_per_px=1.0,
        )
        assert record.value == pytest.approx(0.0, abs=0.02)
        assert record.inputs["a2_mm2"] == pytest.approx(math.pi * 90.0 ** 2)

    def test_draped_equals_flat_is_one(self):
        flat = disk_image(400, 400, 200, 200, 150)
        record = stiffness_from_images(
            flat, PlateSpec(diameter_mm=180.0), SegmentationConfig(),
            flat_image=flat, scale_mm_per_px=1.0,
        )
        assert record.value == pytest.approx(1.0, abs=0.02)

    def test_plate_mask_calibration_path(self):
        from clothbench.masks import segment

        flat = disk_image(400, 400, 200, 200, 150)
        draped = disk_image(400, 400, 200, 200, 90)
        plate_mask = segment(disk_image(400, 400, 200, 200, 90))
        record = stiffness_from_images(
            draped, PlateSpec(diameter_mm=180.0), SegmentationConfig(),
            flat_image=flat, plate_mask=plate_mask,
        )
        assert record.value == pytest.approx(0.0, abs=0.02)
        assert record.notes["scale_mm_per_px"] == pytest.approx(1.0, rel=0.02)

    def test_missing_calibration(self):
        draped = disk_image(400, 400, 200, 200, 90)
        with pytest.raises(MissingScale):
            stiffness_from_images(draped, PlateSpec(diameter_mm=180.0))

    def test_flat_area_fallback(self):
        draped = disk_image(400, 400, 200, 200, 90)
        record = stiffness_from_images(
            draped, PlateSpec(diameter_mm=180.0),
            flat_area_mm2=math.pi * 150.0 ** 2, scale_mm_per_px=1.0,
        )
        assert record.value == pytest.approx(0.0, abs=0.02)


class TestRecords:
    def test_friction_record_rederives(self):
        record = friction_record(FrictionInputs(30.0, 60.0), object_id="a")
        assert derive_value(record.kind, record.inputs) == record.value
        assert record.notes["surface"] == "standard printing paper"

    def test_elasticity_record_rederives(self):
        record = elasticity_record(ElasticityInputs(L3, 120.0, 150.0))
        assert derive_value(record.kind, record.inputs) == record.value
        assert record.inputs["load_g"] == 500.0

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            derive_value("sheen", {})
