"""Score manipulation outcomes from coverage masks, then rank samples.

The Final Ratio compares cloth coverage before and after an action (1 =
shape fully retained); folding instead scores the alignment of the two
halves.  The second part feeds a six-sample result table through the trend
ranking to see which properties go with which outcomes.

Run:
    python demos/04_primitive_metrics.py
"""

import numpy as np

from clothbench import (
    EvalResult,
    MechanicalProperties,
    PrimitiveKind,
    aggregate,
    final_ratio,
    fold_ratio,
    trend_report,
)
from clothbench.evaluation import render_trend_csv
from clothbench.masks import BinaryMask

# --- masks from a pretend drag that lost a third of the footprint -------------

before = np.zeros((60, 90), dtype=bool)
before[10:50, 10:70] = True
after = before.copy()
after[:, 50:] = False

fr = final_ratio(BinaryMask(before), BinaryMask(after))
print(f"drag retention FR: {fr:.3f}")

# --- a fold where a strip of the bottom half stayed uncovered ------------------

folded = np.zeros((60, 90), dtype=bool)
folded[10:50, 10:40] = True
uncovered = np.zeros((60, 90), dtype=bool)
uncovered[10:50, 36:40] = True
print(f"fold alignment FR: {fold_ratio(BinaryMask(folded), BinaryMask(uncovered)):.3f}")

# --- repetitions aggregate to mean +/- population deviation ---------------------

mean, dev = aggregate([0.30, 0.32, 0.31])
print(f"three lift repetitions -> {mean:.3f} +/- {dev:.3f}")

# --- rank a result table by outcome per primitive -------------------------------

samples = [
    ("stiff", MechanicalProperties(stiffness=0.85, elasticity=0.43, friction=0.53)),
    ("slack", MechanicalProperties(stiffness=0.34, elasticity=0.07, friction=0.45)),
    ("stretchy", MechanicalProperties(stiffness=0.36, elasticity=0.87, friction=0.52)),
]
lift_runs = {"stiff": [0.30, 0.32], "slack": [0.23, 0.23], "stretchy": [0.21, 0.25]}
rows = [
    (name, mech, {PrimitiveKind.LIFT: EvalResult.from_runs(PrimitiveKind.LIFT, lift_runs[name])})
    for name, mech in samples
]
trends = trend_report(rows)
print("\nranking CSV:\n")
print(render_trend_csv(trends))
