"""Domain error hierarchy.

Every failure that is part of a documented contract raises a subclass of
:class:`ClothBenchError`, so callers (and the CLI) can tell domain errors apart
from programming errors.  Plain file-system failures surface as the built-in
``OSError``.
"""


class ClothBenchError(Exception):
    """Base class for all domain errors raised by clothbench."""


# --- cloth model -----------------------------------------------------------

class NoDimensions(ClothBenchError):
    """The object has no recorded dimension lines."""


# --- masks -----------------------------------------------------------------

class NoClothDetected(ClothBenchError):
    """Segmentation produced an empty mask."""


class MissingScale(ClothBenchError):
    """A physical-area operation needs a mm-per-pixel scale that is absent."""


class UnsupportedFormat(ClothBenchError):
    """The raster file is not a format/mode this package reads."""


# --- measurement protocols ---------------------------------------------------

class InvalidRatio(ClothBenchError):
    """Plate coverage ratio outside (0, 1)."""


class DegeneratePlate(ClothBenchError):
    """Plate area is not strictly smaller than the flat cloth area."""


class OutOfRange(ClothBenchError):
    """Draped area falls outside the tolerated bracket around [A2, A1]."""


class InvalidLengths(ClothBenchError):
    """Elongation lengths violate 0 < rest length <= loaded length."""


class DuplicateLine(ClothBenchError):
    """The same reference line was supplied twice."""


class SlideAngleInvalid(ClothBenchError):
    """Incline geometry violates 0 <= height < surface length."""


# --- radar benchmarking ------------------------------------------------------

class EmptySet(ClothBenchError):
    """A benchmarking operation was asked to profile an empty cloth set."""


class AllMembersMissingProperty(ClothBenchError):
    """No member of the set carries the property needed for an axis."""


class AxisMismatch(ClothBenchError):
    """Profiles being combined do not share the same axis layout."""


# --- manipulation evaluation -------------------------------------------------

class EmptyReference(ClothBenchError):
    """The reference mask (denominator of a ratio) is empty."""


class InconsistentAreas(ClothBenchError):
    """Uncovered area exceeds the total final area."""


class EmptyRuns(ClothBenchError):
    """Aggregation over zero repetitions."""


# --- simulator ---------------------------------------------------------------

class NumericalBlowup(ClothBenchError):
    """Integration diverged (non-finite or absurdly large coordinates)."""


class DidNotSettle(ClothBenchError):
    """The step cap was reached before motion fell below threshold."""


class NoSlide(ClothBenchError):
    """The incline sweep reached its angle cap without slide onset."""


# --- registry ----------------------------------------------------------------

class CorruptRegistry(ClothBenchError):
    """Registry file is not parseable as the documented JSON document."""


class SchemaVersionMismatch(ClothBenchError):
    """Registry file declares a schema version this code does not speak."""


class DerivationMismatch(ClothBenchError):
    """A stored measurement value does not re-derive from its raw inputs."""


class ReferentialIntegrity(ClothBenchError):
    """An id reference points at a missing record, or ids collide."""


class UnknownId(ClothBenchError):
    """Lookup of an object or set id that is not in the registry."""
