"""Command-line interface and registry plumbing.

Exit codes: 0 success, 1 domain error (measurement/registry/simulation), 2
usage error.  The registry path comes from ``--registry``, falling back to the
``CLOTHBENCH_REGISTRY`` environment variable, then ``./clothbench.json``.
Mutating commands hold an advisory lock on ``<registry>.lock`` while they
load-modify-save; identical invocations on identical registries print
byte-identical stdout (timestamps go to the file, never to stdout).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from contextlib import contextmanager
from dataclasses import replace
from datetime import datetime, timezone
from pathlib import Path

from .errors import ClothBenchError
from .evaluation import PrimitiveKind, aggregate, final_ratio, fold_ratio
from .masks import KeepPolicy, Polarity, SegmentationConfig, load_image, load_mask
from .measure import (
    ElasticityInputs,
    FrictionInputs,
    PlateSpec,
    elasticity_record,
    friction_record,
    normalize_sample,
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
    validate_object,
)
from .radar import compare_report, radar_profile, render_radar
from .registry import Registry, load, save
from .sim import SettleCriteria, SimParams, run_drape, run_incline, run_primitive, run_pull

DEFAULT_REGISTRY = "clothbench.json"


def _registry_path(args) -> Path:
    if args.registry:
        return Path(args.registry)
    env = os.environ.get("CLOTHBENCH_REGISTRY")
    return Path(env) if env else Path(DEFAULT_REGISTRY)


def _load_registry(path: Path) -> Registry:
    return load(path) if path.exists() else Registry()


@contextmanager
def _registry_for_write(path: Path):
    from filelock import FileLock

    lock = FileLock(str(path) + ".lock")
    with lock:
        registry = _load_registry(path)
        yield registry
        save(registry, path)


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


# --- argparse argument types --------------------------------------------------

def _line_arg(text: str) -> ReferenceLine:
    try:
        return ReferenceLine(text.strip().lower())
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"unknown reference line {text!r} (line1..line4)"
        ) from None


def _dim_arg(text: str) -> tuple[ReferenceLine, float]:
    if "=" not in text:
        raise argparse.ArgumentTypeError("dimension must look like line1=450")
    line, _, mm = text.partition("=")
    try:
        return _line_arg(line), float(mm)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad dimension length {mm!r}") from None


def _color_arg(text: str) -> ColorLabel:
    try:
        return ColorLabel(text.strip().lower())
    except ValueError:
        names = ", ".join(c.value for c in ColorLabel)
        raise argparse.ArgumentTypeError(
            f"unknown color {text!r} (one of: {names})"
        ) from None


def _primitive_arg(text: str) -> PrimitiveKind:
    try:
        return PrimitiveKind(text.strip().lower())
    except ValueError:
        names = ", ".join(k.value for k in PrimitiveKind)
        raise argparse.ArgumentTypeError(
            f"unknown primitive {text!r} (one of: {names})"
        ) from None


def _seg_config(args) -> SegmentationConfig:
    return SegmentationConfig(
        threshold=args.threshold,
        polarity=Polarity.CLOTH_BRIGHTER if args.cloth_brighter else Polarity.CLOTH_DARKER,
        closing_radius=args.closing_radius,
        keep=KeepPolicy.ALL if args.keep_all else KeepPolicy.LARGEST_COMPONENT,
    )


# --- object / set commands ------------------------------------------------------

def _cmd_object_add(args) -> int:
    mechanical = None
    if args.stiffness is not None or args.elasticity is not None or args.friction is not None:
        mechanical = MechanicalProperties(
            stiffness=args.stiffness,
            elasticity=args.elasticity,
            friction=args.friction,
        )
    obj = ClothObject(
        id=args.id,
        name=args.name,
        shape=ShapeCategory(args.shape),
        dimensions=tuple(args.dim or ()),
        weight_g=args.weight_g,
        colors=frozenset(args.color or ()),
        has_print=args.has_print,
        materials=frozenset(MaterialLabel(m) for m in (args.material or ())),
        construction=ConstructionTechnique(args.construction),
        mechanical=mechanical,
    )
    violations = validate_object(obj)
    if violations:
        for violation in violations:
            print(f"invalid: {violation.message}", file=sys.stderr)
        return 1
    path = _registry_path(args)
    with _registry_for_write(path) as registry:
        registry.add_object(obj)
    print(f"added object {obj.id}")
    return 0


def _cmd_object_list(args) -> int:
    registry = _load_registry(_registry_path(args))
    for object_id in sorted(registry.objects):
        obj = registry.objects[object_id]
        print(f"{obj.id}\t{obj.name}\t{obj.shape.name}\t{obj.weight_g:g} g")
    return 0


def _cmd_object_show(args) -> int:
    registry = _load_registry(_registry_path(args))
    obj = registry.object(args.id)
    print(f"id: {obj.id}")
    print(f"name: {obj.name}")
    print(f"shape: {obj.shape.name}")
    for line, mm in obj.dimensions:
        print(f"dimension {line.value}: {mm:g} mm")
    print(f"weight: {obj.weight_g:g} g")
    print(f"colors: {', '.join(sorted(c.value for c in obj.colors))}")
    print(f"has_print: {str(obj.has_print).lower()}")
    print(f"materials: {', '.join(sorted(m.name for m in obj.materials))}")
    print(f"construction: {obj.construction.name}")
    if obj.mechanical is not None:
        mech = obj.mechanical
        if mech.stiffness is not None:
            print(f"stiffness: {mech.stiffness:.6f}")
        if mech.elasticity is not None:
            print(f"elasticity: {mech.elasticity:.6f}")
        if mech.friction is not None:
            print(f"friction: {mech.friction:.6f}")
        for line, value in mech.elasticity_by_line:
            print(f"elasticity {line.value}: {value:.6f}")
    return 0


def _cmd_set_create(args) -> int:
    path = _registry_path(args)
    with _registry_for_write(path) as registry:
        registry.add_set(ClothSet(
            id=args.id, name=args.name, source=args.source,
            members=tuple(args.member or ()),
        ))
    print(f"created set {args.id}")
    return 0


def _cmd_set_add_member(args) -> int:
    path = _registry_path(args)
    with _registry_for_write(path) as registry:
        registry.add_member(args.set_id, args.object_id)
    print(f"added {args.object_id} to {args.set_id}")
    return 0


def _cmd_set_list(args) -> int:
    registry = _load_registry(_registry_path(args))
    for set_id in sorted(registry.sets):
        cloth_set = registry.sets[set_id]
        print(f"{cloth_set.id}\t{cloth_set.name}\t{len(cloth_set.members)} members")
    return 0


# --- measure commands ---------------------------------------------------------

def _update_mechanical(registry: Registry, object_id: str, **values) -> None:
    obj = registry.object(object_id)
    mech = obj.mechanical or MechanicalProperties()
    registry.replace_object(replace(obj, mechanical=replace(mech, **values)))


def _cmd_measure_stiffness(args) -> int:
    plate = PlateSpec(diameter_mm=args.plate_diameter)
    plate_mask = load_mask(args.plate_mask) if args.plate_mask else None
    path = _registry_path(args)
    with _registry_for_write(path) as registry:
        flat_area = args.flat_area_mm2
        notes = {}
        if args.flat is None and flat_area is None and args.object:
            # no flat photo: fall back to the folded-rectangle footprint of
            # the object's recorded dimensions
            effective = normalize_sample(registry.object(args.object))
            flat_area = effective.area_mm2
            notes["fold_count"] = effective.folds
        record = stiffness_from_images(
            load_image(args.draped),
            plate,
            _seg_config(args),
            flat_image=load_image(args.flat) if args.flat else None,
            flat_area_mm2=flat_area,
            scale_mm_per_px=args.scale,
            plate_mask=plate_mask,
            object_id=args.object,
            timestamp=_now(),
            notes=notes,
        )
        registry.add_measurement(record)
        if args.object:
            _update_mechanical(registry, args.object, stiffness=record.value)
    print(f"{record.value:.6f}")
    return 0


def _cmd_measure_elasticity(args) -> int:
    inputs = ElasticityInputs(args.line, args.li, args.lf, args.load_g)
    record = elasticity_record(inputs, object_id=args.object, timestamp=_now())
    path = _registry_path(args)
    with _registry_for_write(path) as registry:
        registry.add_measurement(record)
        if args.object:
            obj = registry.object(args.object)
            mech = obj.mechanical or MechanicalProperties()
            per_line = dict(mech.elasticity_by_line)
            per_line[args.line] = record.value
            ordered = tuple(sorted(per_line.items(), key=lambda kv: kv[0].value))
            registry.replace_object(replace(obj, mechanical=replace(
                mech,
                elasticity=max(v for _, v in ordered),
                elasticity_by_line=ordered,
            )))
    print(f"{record.value:.6f}")
    return 0


def _cmd_measure_friction(args) -> int:
    inputs = FrictionInputs(args.height, args.length)
    record = friction_record(inputs, object_id=args.object, timestamp=_now())
    path = _registry_path(args)
    with _registry_for_write(path) as registry:
        registry.add_measurement(record)
        if args.object:
            _update_mechanical(registry, args.object, friction=record.value)
    print(f"{record.value:.6f}")
    return 0


# --- radar commands -------------------------------------------------------------

def _profiles(registry: Registry, set_ids) -> list:
    return [
        radar_profile(registry.resolve_set(set_id), set_id,
                      registry.sets[set_id].name)
        for set_id in set_ids
    ]


def _cmd_radar_profile(args) -> int:
    registry = _load_registry(_registry_path(args))
    profile = _profiles(registry, [args.set_id])[0]
    lines = ["axis,unit,min,max,range,count"]
    for stat in profile.axes:
        lines.append(",".join([
            stat.axis.value,
            stat.unit,
            "" if stat.minimum is None else f"{stat.minimum:g}",
            "" if stat.maximum is None else f"{stat.maximum:g}",
            "" if stat.value_range is None else f"{stat.value_range:g}",
            "" if stat.count is None else str(stat.count),
        ]))
    text = "\n".join(lines) + "\n"
    if args.csv:
        Path(args.csv).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    for warning in profile.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    return 0


def _cmd_radar_compare(args) -> int:
    if len(args.set_ids) < 2:
        print("error: radar compare needs at least two set ids", file=sys.stderr)
        return 2
    registry = _load_registry(_registry_path(args))
    profiles = _profiles(registry, args.set_ids)
    if args.svg:
        Path(args.svg).write_text(render_radar(profiles), encoding="utf-8")
    table = compare_report(profiles)
    if args.csv:
        Path(args.csv).write_text(table, encoding="utf-8", newline="")
    else:
        sys.stdout.write(table)
    return 0


# --- eval commands ---------------------------------------------------------------

def _cmd_eval_fr(args) -> int:
    fr = final_ratio(load_mask(args.before), load_mask(args.after))
    print(f"{fr:.6f}")
    return 0


def _cmd_eval_fold(args) -> int:
    fr = fold_ratio(load_mask(args.after), load_mask(args.uncovered))
    print(f"{fr:.6f}")
    return 0


def _cmd_eval_aggregate(args) -> int:
    mean, stddev = aggregate(args.values)
    print(f"mean={mean:.6f} stddev={stddev:.6f}")
    return 0


# --- sim commands -----------------------------------------------------------------

def _load_config(path) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ClothBenchError(f"{path} is not valid JSON: {exc}") from exc


def _sim_params(config: dict) -> SimParams:
    try:
        return SimParams(**config.get("params", {}))
    except TypeError as exc:
        raise ClothBenchError(f"bad simulation params: {exc}") from exc


def _settle_criteria(config: dict) -> SettleCriteria:
    if "settle" not in config:
        return SettleCriteria()
    return SettleCriteria(**config["settle"])


def _trace_writer(path):
    handle = open(path, "w", encoding="utf-8")
    handle.write("step,t_s,centroid_x_m,centroid_y_m,centroid_z_m,v_max_m_s\n")
    counter = {"step": 0}

    def on_step(state) -> None:
        from .sim.core import max_speed

        counter["step"] += 1
        c = state.centroid()
        handle.write(
            f"{counter['step']},{state.t:.6f},{c[0]:.9f},{c[1]:.9f},{c[2]:.9f},"
            f"{max_speed(state):.9f}\n"
        )

    return handle, on_step


def _plate_from_config(config: dict, params: SimParams) -> PlateSpec:
    plate = config.get("plate", {})
    if "diameter_mm" in plate:
        return PlateSpec(
            diameter_mm=plate["diameter_mm"],
            coverage_ratio=plate.get("coverage_ratio", 0.6),
        )
    ratio = plate.get("coverage_ratio", 0.6)
    shortest = min(params.width_mm, params.height_mm)
    return PlateSpec(diameter_mm=ratio * shortest, coverage_ratio=ratio)


def _run_one(scenario: str, config: dict, params: SimParams, on_step=None) -> str:
    criteria = _settle_criteria(config)
    if scenario == "drape":
        result = run_drape(
            params, _plate_from_config(config, params),
            drop_height_mm=config.get("drop_height_mm", 2.0),
            plate_height_mm=config.get("plate_height_mm", 150.0),
            criteria=criteria, on_step=on_step,
        )
        return (f"stiffness={result.stiffness:.6f} a1_mm2={result.a1_mm2:.1f} "
                f"a2_mm2={result.a2_mm2:.1f} a3_mm2={result.a3_mm2:.1f}")
    if scenario == "incline":
        result = run_incline(params, on_step=on_step)
        return f"mu={result.mu:.6f} slide_angle_deg={result.slide_angle_deg:.2f}"
    if scenario == "pull":
        result = run_pull(params, config.get("force_n", 0.5 * 9.81),
                          criteria=criteria, on_step=on_step)
        return (f"elasticity={result.elasticity:.6f} "
                f"l_i_mm={result.l_i_mm:.1f} l_f_mm={result.l_f_mm:.1f}")
    if scenario == "primitive":
        kind = _primitive_arg(config.get("primitive", ""))
        run = run_primitive(kind, params, criteria=criteria)
        return f"primitive={kind.value} fr={run.fr:.6f}"
    raise ClothBenchError(f"unknown scenario {scenario!r}")


def _cmd_sim(args) -> int:
    config = _load_config(args.config)
    params = _sim_params(config)
    handle = on_step = None
    if getattr(args, "trace", None):
        handle, on_step = _trace_writer(args.trace)
    try:
        print(_run_one(args.scenario, config, params, on_step))
    finally:
        if handle is not None:
            handle.close()
    return 0


def _cmd_sim_sweep(args) -> int:
    config = _load_config(args.config)
    sweep = config.get("sweep")
    if not sweep or "field" not in sweep or "values" not in sweep:
        raise ClothBenchError('sweep config needs {"field": ..., "values": [...]}')
    scenario = config.get("scenario")
    if not scenario:
        raise ClothBenchError('sweep config needs a "scenario" entry')
    base = config.get("params", {})
    for value in sweep["values"]:
        merged = dict(base)
        merged[sweep["field"]] = value
        params = _sim_params({"params": merged})
        line = _run_one(scenario, config, params)
        print(f"{sweep['field']}={value:g} {line}")
    return 0


# --- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clothbench",
        description="Cloth property measurement, benchmarking and evaluation bench.",
    )
    parser.add_argument("--registry", help="registry JSON path "
                        "(default: $CLOTHBENCH_REGISTRY or ./clothbench.json)")
    sub = parser.add_subparsers(dest="command", required=True)

    # object
    p_object = sub.add_parser("object", help="manage cloth objects")
    object_sub = p_object.add_subparsers(dest="subcommand", required=True)
    p_add = object_sub.add_parser("add", help="add a cloth object")
    p_add.add_argument("--id", required=True)
    p_add.add_argument("--name", required=True)
    p_add.add_argument("--shape", required=True)
    p_add.add_argument("--weight-g", type=float, required=True, dest="weight_g")
    p_add.add_argument("--dim", action="append", type=_dim_arg,
                       help="dimension as lineN=MM, repeatable")
    p_add.add_argument("--color", action="append", type=_color_arg)
    p_add.add_argument("--material", action="append")
    p_add.add_argument("--construction", default="woven")
    p_add.add_argument("--has-print", action="store_true", dest="has_print")
    p_add.add_argument("--stiffness", type=float)
    p_add.add_argument("--elasticity", type=float)
    p_add.add_argument("--friction", type=float)
    p_add.set_defaults(func=_cmd_object_add)
    object_sub.add_parser("list", help="list objects").set_defaults(func=_cmd_object_list)
    p_show = object_sub.add_parser("show", help="show one object")
    p_show.add_argument("id")
    p_show.set_defaults(func=_cmd_object_show)

    # set
    p_set = sub.add_parser("set", help="manage cloth sets")
    set_sub = p_set.add_subparsers(dest="subcommand", required=True)
    p_create = set_sub.add_parser("create", help="create a cloth set")
    p_create.add_argument("--id", required=True)
    p_create.add_argument("--name", required=True)
    p_create.add_argument("--source", default="")
    p_create.add_argument("--member", action="append")
    p_create.set_defaults(func=_cmd_set_create)
    p_addm = set_sub.add_parser("add-member", help="add an object to a set")
    p_addm.add_argument("set_id")
    p_addm.add_argument("object_id")
    p_addm.set_defaults(func=_cmd_set_add_member)
    set_sub.add_parser("list", help="list sets").set_defaults(func=_cmd_set_list)

    # measure
    p_measure = sub.add_parser("measure", help="run a measurement protocol")
    measure_sub = p_measure.add_subparsers(dest="subcommand", required=True)

    p_st = measure_sub.add_parser("stiffness", help="drape-test stiffness from images")
    p_st.add_argument("--draped", required=True, help="zenithal image of the draped cloth")
    p_st.add_argument("--flat", help="zenithal image of the flat cloth")
    p_st.add_argument("--flat-area-mm2", type=float, dest="flat_area_mm2",
                      help="flat area when no flat image is available")
    p_st.add_argument("--plate-diameter", type=float, required=True, dest="plate_diameter")
    p_st.add_argument("--scale", type=float, help="mm per pixel")
    p_st.add_argument("--plate-mask", dest="plate_mask",
                      help="mask image of the bare plate, for calibration")
    p_st.add_argument("--threshold", type=int, default=128)
    p_st.add_argument("--cloth-brighter", action="store_true", dest="cloth_brighter")
    p_st.add_argument("--closing-radius", type=int, default=0, dest="closing_radius")
    p_st.add_argument("--keep-all", action="store_true", dest="keep_all")
    p_st.add_argument("--object", help="object id to attach the measurement to")
    p_st.set_defaults(func=_cmd_measure_stiffness)

    p_el = measure_sub.add_parser("elasticity", help="pull-test elasticity")
    p_el.add_argument("--line", type=_line_arg, required=True)
    p_el.add_argument("--li", type=float, required=True, help="rest length, mm")
    p_el.add_argument("--lf", type=float, required=True, help="loaded length, mm")
    p_el.add_argument("--load-g", type=float, default=500.0, dest="load_g")
    p_el.add_argument("--object")
    p_el.set_defaults(func=_cmd_measure_elasticity)

    p_fr = measure_sub.add_parser("friction", help="incline-test friction")
    p_fr.add_argument("--height", type=float, required=True, help="lifted height, mm")
    p_fr.add_argument("--length", type=float, required=True, help="surface length, mm")
    p_fr.add_argument("--object")
    p_fr.set_defaults(func=_cmd_measure_friction)

    # radar
    p_radar = sub.add_parser("radar", help="cloth-set benchmarking")
    radar_sub = p_radar.add_subparsers(dest="subcommand", required=True)
    p_profile = radar_sub.add_parser("profile", help="per-property ranges of one set")
    p_profile.add_argument("set_id")
    p_profile.add_argument("--csv", help="write the table here instead of stdout")
    p_profile.set_defaults(func=_cmd_radar_profile)
    p_compare = radar_sub.add_parser("compare", help="compare sets on one radar chart")
    p_compare.add_argument("set_ids", nargs="+")
    p_compare.add_argument("--svg", help="write the radar chart here")
    p_compare.add_argument("--csv", help="write the comparison table here")
    p_compare.set_defaults(func=_cmd_radar_compare)

    # eval
    p_eval = sub.add_parser("eval", help="manipulation-outcome metrics")
    eval_sub = p_eval.add_subparsers(dest="subcommand", required=True)
    p_evfr = eval_sub.add_parser("fr", help="shape-retention final ratio")
    p_evfr.add_argument("--before", required=True)
    p_evfr.add_argument("--after", required=True)
    p_evfr.set_defaults(func=_cmd_eval_fr)
    p_evfold = eval_sub.add_parser("fold", help="fold-alignment final ratio")
    p_evfold.add_argument("--after", required=True)
    p_evfold.add_argument("--uncovered", required=True)
    p_evfold.set_defaults(func=_cmd_eval_fold)
    p_evagg = eval_sub.add_parser("aggregate", help="mean and deviation of runs")
    p_evagg.add_argument("values", nargs="+", type=float)
    p_evagg.set_defaults(func=_cmd_eval_aggregate)

    # sim
    p_sim = sub.add_parser("sim", help="verification simulator")
    sim_sub = p_sim.add_subparsers(dest="subcommand", required=True)
    for scenario in ("drape", "incline", "pull", "primitive"):
        p_s = sim_sub.add_parser(scenario, help=f"simulated {scenario} scenario")
        p_s.add_argument("--config", required=True, help="scenario JSON file")
        p_s.add_argument("--trace", help="per-step trajectory CSV dump")
        p_s.set_defaults(func=_cmd_sim, scenario=scenario)
    p_sweep = sim_sub.add_parser("sweep", help="run a scenario over a parameter sweep")
    p_sweep.add_argument("--config", required=True)
    p_sweep.set_defaults(func=_cmd_sim_sweep)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ClothBenchError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
