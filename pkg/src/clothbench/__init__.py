"""clothbench: cloth property measurement, benchmarking and evaluation.

Library layout mirrors the bench protocols:

* ``model``      -- cloth objects, property schema, cloth sets, validation
* ``masks``      -- binary-mask substrate for all area measurement
* ``measure``    -- stiffness / elasticity / friction formulas and protocols
* ``radar``      -- cloth-set radar profiles, SVG charts, comparison tables
* ``evaluation`` -- manipulation-primitive metrics (final ratios)
* ``sim``        -- mass-spring simulator: the verification oracle
* ``registry``   -- persistent JSON registry
* ``cli``        -- the ``clothbench`` command
"""

from . import errors
from .evaluation import (
    EvalResult,
    PrimitiveKind,
    aggregate,
    canonical_params,
    final_ratio,
    fold_ratio,
    trend_report,
)
from .masks import (
    BinaryMask,
    GrayImage,
    KeepPolicy,
    Polarity,
    SegmentationConfig,
    area_mm2,
    area_px,
    load_image,
    load_mask,
    scale_from_plate,
    segment,
)
from .measure import (
    ElasticityInputs,
    FrictionInputs,
    MeasurementRecord,
    PlateSpec,
    StiffnessInputs,
    critical_height,
    drape_stiffness,
    elasticity,
    elasticity_profile,
    friction_coefficient,
    normalize_sample,
    plate_diameter,
    stiffness_from_images,
)
from .model import (
    ClothObject,
    ClothSet,
    ColorLabel,
    ConstructionTechnique,
    MaterialLabel,
    MechanicalProperties,
    ReferenceLine,
    ShapeCategory,
    longest_edge,
    shortest_edge,
    validate_object,
)
from .radar import (
    PropertyAxis,
    RadarProfile,
    RenderOptions,
    compare_report,
    property_range,
    radar_profile,
    render_radar,
)
from .registry import Registry, load, save

__version__ = "0.1.0"
