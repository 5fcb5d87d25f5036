"""Benchmark three cloth sets on one radar chart.

Loads the bundled fixture registry (three literature-style sets), profiles
each set's per-property variability, prints the comparison table and writes
the radar chart SVG next to this script.

Run:
    python demos/03_radar_benchmark.py
"""

from pathlib import Path

from clothbench import compare_report, load, radar_profile, render_radar

HERE = Path(__file__).parent
REGISTRY = HERE.parent / "tests" / "data" / "cloth_sets.json"

registry = load(REGISTRY)
profiles = [
    radar_profile(registry.resolve_set(set_id), set_id, registry.sets[set_id].name)
    for set_id in ("EOS", "HCOS", "DOS")
]

for profile in profiles:
    print(f"\n{profile.name}")
    for stat in profile.axes:
        if stat.count is not None:
            print(f"  {stat.axis.value:<10} {stat.count} distinct")
        else:
            print(f"  {stat.axis.value:<10} {stat.minimum:g} .. {stat.maximum:g} "
                  f"{stat.unit} (range {stat.value_range:g})")

print("\nper-axis winners (most diverse set):\n")
print(compare_report(profiles))

out = HERE / "radar_chart.svg"
out.write_text(render_radar(profiles), encoding="utf-8")
print(f"radar chart written to {out}")
