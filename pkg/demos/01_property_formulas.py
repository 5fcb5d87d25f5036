"""Walk through the three mechanical-property formulas on bench numbers.

Stiffness is the drape coefficient of a Cusick-style test, elasticity the
relative elongation under a 0.5 kg pull, friction the tangent of the incline
angle at slide onset.

Run:
    python demos/01_property_formulas.py
"""

from clothbench import (
    ElasticityInputs,
    FrictionInputs,
    ReferenceLine,
    StiffnessInputs,
    critical_height,
    drape_stiffness,
    elasticity,
    elasticity_profile,
    friction_coefficient,
    normalize_sample,
    plate_diameter,
    shortest_edge,
)
from clothbench.model import ClothObject, ColorLabel, ShapeCategory

# --- sizing the drape plate for a 300 x 500 mm napkin -------------------------

napkin = ClothObject(
    id="napkin", name="cotton napkin", shape=ShapeCategory("rectangular"),
    dimensions={ReferenceLine.LINE1: 300.0, ReferenceLine.LINE2: 500.0},
    weight_g=50.0, colors=frozenset({ColorLabel.WHITE}),
)
edge = shortest_edge(napkin)
plate = plate_diameter(edge)
print(f"napkin shortest edge: {edge:.0f} mm -> plate diameter {plate:.0f} mm "
      "(60% coverage, 40% hanging)")

# a bedsheet must be folded below 500 mm before it fits the bench
sheet = ClothObject(
    id="sheet", name="bedsheet", shape=ShapeCategory("rectangular"),
    dimensions={ReferenceLine.LINE1: 1400.0, ReferenceLine.LINE2: 2000.0},
    weight_g=520.0, colors=frozenset({ColorLabel.BLUE}),
)
eff = normalize_sample(sheet)
print(f"bedsheet 1400x2000 -> {eff.width_mm:.0f}x{eff.height_mm:.0f} mm "
      f"after {eff.folds} folds")

# --- stiffness from three areas ------------------------------------------------

# flat cloth 900 cm^2, plate 324 cm^2, draped projection 612 cm^2
value = drape_stiffness(StiffnessInputs(900.0, 324.0, 612.0))
print(f"\ndrape stiffness for areas 900/324/612: {value:.2f} "
      "(1 = rigid, 0 = fully draped)")

# --- elasticity along reference lines -------------------------------------------

pulls = [
    ElasticityInputs(ReferenceLine.LINE1, l_i_mm=200.0, l_f_mm=224.0),
    ElasticityInputs(ReferenceLine.LINE2, l_i_mm=200.0, l_f_mm=286.0),
]
profile = elasticity_profile(pulls)
for line, ratio in profile.per_line:
    print(f"elasticity along {line.value}: {ratio:.2f}")
print(f"summary elasticity (max over lines): {profile.summary:.2f}")

# --- friction from the incline geometry ------------------------------------------

mu = friction_coefficient(FrictionInputs(h_mm=30.0, l_mm=60.0))
print(f"\nincline slide onset at h=30 of l=60 -> mu = {mu:.6f}")
print(f"inverse check: lifting height for that mu is "
      f"{critical_height(mu, 60.0):.1f} mm")
