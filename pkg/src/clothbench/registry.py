"""Persistent registry of cloth objects, sets and measurements.

One human-readable JSON document (schema version 1, explicit unit-suffixed
keys) holds everything, chosen for diff-ability in lab version control.
Derived measurement values are stored redundantly next to their raw inputs;
loading re-derives each one and rejects mismatches beyond 1e-9, so a tampered
or drifted file cannot slip through.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import (
    CorruptRegistry,
    DerivationMismatch,
    ReferentialIntegrity,
    SchemaVersionMismatch,
    UnknownId,
)
from .measure import MeasurementRecord, derive_value
from .model import (
    ClothObject,
    ClothSet,
    ColorLabel,
    ConstructionTechnique,
    MaterialLabel,
    MechanicalProperties,
    ReferenceLine,
    ShapeCategory,
)

SCHEMA_VERSION = 1
DERIVATION_TOLERANCE = 1e-9


@dataclass
class Registry:
    """In-memory registry; the single mutation point of the package."""

    version: int = SCHEMA_VERSION
    objects: dict[str, ClothObject] = field(default_factory=dict)
    sets: dict[str, ClothSet] = field(default_factory=dict)
    measurements: list[MeasurementRecord] = field(default_factory=list)

    def add_object(self, obj: ClothObject) -> None:
        if obj.id in self.objects:
            raise ReferentialIntegrity(f"object id {obj.id!r} already exists")
        self.objects[obj.id] = obj

    def replace_object(self, obj: ClothObject) -> None:
        if obj.id not in self.objects:
            raise UnknownId(f"no object with id {obj.id!r}")
        self.objects[obj.id] = obj

    def add_set(self, cloth_set: ClothSet) -> None:
        if cloth_set.id in self.sets:
            raise ReferentialIntegrity(f"set id {cloth_set.id!r} already exists")
        for member in cloth_set.members:
            if member not in self.objects:
                raise ReferentialIntegrity(f"set member {member!r} is not a known object")
        self.sets[cloth_set.id] = cloth_set

    def add_member(self, set_id: str, object_id: str) -> None:
        if set_id not in self.sets:
            raise UnknownId(f"no set with id {set_id!r}")
        if object_id not in self.objects:
            raise UnknownId(f"no object with id {object_id!r}")
        current = self.sets[set_id]
        if object_id not in current.members:
            self.sets[set_id] = ClothSet(
                id=current.id, name=current.name, source=current.source,
                members=current.members + (object_id,),
            )

    def add_measurement(self, record: MeasurementRecord) -> None:
        if record.object_id is not None and record.object_id not in self.objects:
            raise UnknownId(f"no object with id {record.object_id!r}")
        self.measurements.append(record)

    def object(self, object_id: str) -> ClothObject:
        try:
            return self.objects[object_id]
        except KeyError:
            raise UnknownId(f"no object with id {object_id!r}") from None

    def resolve_set(self, set_id: str) -> list[ClothObject]:
        if set_id not in self.sets:
            raise UnknownId(f"no set with id {set_id!r}")
        return [self.objects[m] for m in self.sets[set_id].members]


# --- serialization -----------------------------------------------------------

def _mechanical_to_dict(mech: MechanicalProperties) -> dict:
    out: dict = {}
    if mech.stiffness is not None:
        out["stiffness"] = mech.stiffness
    if mech.elasticity is not None:
        out["elasticity"] = mech.elasticity
    if mech.friction is not None:
        out["friction"] = mech.friction
    if mech.elasticity_by_line:
        out["elasticity_by_line"] = [
            {"line": line.value, "ratio": value}
            for line, value in mech.elasticity_by_line
        ]
    return out


def _mechanical_from_dict(data: dict) -> MechanicalProperties:
    return MechanicalProperties(
        stiffness=data.get("stiffness"),
        elasticity=data.get("elasticity"),
        friction=data.get("friction"),
        elasticity_by_line=tuple(
            (ReferenceLine(entry["line"]), float(entry["ratio"]))
            for entry in data.get("elasticity_by_line", [])
        ),
    )


def _object_to_dict(obj: ClothObject) -> dict:
    out = {
        "id": obj.id,
        "name": obj.name,
        "shape": obj.shape.name,
        "dimensions": [
            {"line": line.value, "length_mm": mm} for line, mm in obj.dimensions
        ],
        "weight_g": obj.weight_g,
        "colors": sorted(c.value for c in obj.colors),
        "has_print": obj.has_print,
        "materials": sorted(m.name for m in obj.materials),
        "construction": obj.construction.name,
    }
    if obj.mechanical is not None:
        out["mechanical"] = _mechanical_to_dict(obj.mechanical)
    return out


def _object_from_dict(data: dict) -> ClothObject:
    return ClothObject(
        id=data["id"],
        name=data["name"],
        shape=ShapeCategory(data["shape"]),
        dimensions=tuple(
            (ReferenceLine(d["line"]), float(d["length_mm"]))
            for d in data["dimensions"]
        ),
        weight_g=float(data["weight_g"]),
        colors=frozenset(ColorLabel(c) for c in data["colors"]),
        has_print=bool(data["has_print"]),
        materials=frozenset(MaterialLabel(m) for m in data["materials"]),
        construction=ConstructionTechnique(data["construction"]),
        mechanical=(
            _mechanical_from_dict(data["mechanical"])
            if "mechanical" in data else None
        ),
    )


def _set_to_dict(cloth_set: ClothSet) -> dict:
    return {
        "id": cloth_set.id,
        "name": cloth_set.name,
        "source": cloth_set.source,
        "members": list(cloth_set.members),
    }


def _record_to_dict(record: MeasurementRecord) -> dict:
    return {
        "kind": record.kind,
        "object_id": record.object_id,
        "inputs": dict(record.inputs),
        "value": record.value,
        "unit": record.unit,
        "timestamp": record.timestamp,
        "notes": dict(record.notes),
    }


def _record_from_dict(data: dict) -> MeasurementRecord:
    return MeasurementRecord(
        kind=data["kind"],
        inputs=dict(data["inputs"]),
        value=float(data["value"]),
        unit=data.get("unit", "ratio"),
        object_id=data.get("object_id"),
        timestamp=data.get("timestamp", ""),
        notes=dict(data.get("notes", {})),
    )


def to_document(registry: Registry) -> dict:
    return {
        "version": registry.version,
        "objects": [_object_to_dict(o) for o in registry.objects.values()],
        "sets": [_set_to_dict(s) for s in registry.sets.values()],
        "measurements": [_record_to_dict(r) for r in registry.measurements],
    }


def save(registry: Registry, path) -> None:
    """Write the registry as pretty-printed UTF-8 JSON."""
    document = to_document(registry)
    Path(path).write_text(
        json.dumps(document, indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )


def verify(registry: Registry) -> None:
    """Check referential integrity and re-derive every measurement value."""
    for cloth_set in registry.sets.values():
        for member in cloth_set.members:
            if member not in registry.objects:
                raise ReferentialIntegrity(
                    f"set {cloth_set.id!r} references missing object {member!r}"
                )
    for record in registry.measurements:
        if record.object_id is not None and record.object_id not in registry.objects:
            raise ReferentialIntegrity(
                f"measurement references missing object {record.object_id!r}"
            )
        try:
            derived = derive_value(record.kind, record.inputs)
        except Exception as exc:
            raise DerivationMismatch(
                f"cannot re-derive {record.kind} measurement: {exc}"
            ) from exc
        if abs(derived - record.value) > DERIVATION_TOLERANCE:
            raise DerivationMismatch(
                f"stored {record.kind} value {record.value!r} does not re-derive "
                f"from its inputs (got {derived!r})"
            )


def load(path) -> Registry:
    """Read, structurally validate, and verify a registry file."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorruptRegistry(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(document, dict):
        raise CorruptRegistry(f"{path} does not hold a JSON object")

    version = document.get("version")
    if version != SCHEMA_VERSION:
        raise SchemaVersionMismatch(
            f"schema version {version!r}, this build speaks {SCHEMA_VERSION}"
        )

    registry = Registry(version=SCHEMA_VERSION)
    try:
        for entry in document.get("objects", []):
            obj = _object_from_dict(entry)
            if obj.id in registry.objects:
                raise ReferentialIntegrity(f"duplicate object id {obj.id!r}")
            registry.objects[obj.id] = obj
        for entry in document.get("sets", []):
            cloth_set = ClothSet(
                id=entry["id"], name=entry["name"],
                source=entry.get("source", ""),
                members=tuple(entry.get("members", [])),
            )
            if cloth_set.id in registry.sets:
                raise ReferentialIntegrity(f"duplicate set id {cloth_set.id!r}")
            registry.sets[cloth_set.id] = cloth_set
        for entry in document.get("measurements", []):
            registry.measurements.append(_record_from_dict(entry))
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptRegistry(f"{path} does not match the schema: {exc}") from exc

    verify(registry)
    return registry
