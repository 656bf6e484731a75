"""Exception hierarchy for the EAD-to-IIIF pipeline.

Every error that crosses a module boundary lives here so callers (and the
CLI) can catch one family per failure class instead of chasing module-local
types.
"""

from __future__ import annotations


class Ead2IiifError(Exception):
    """Base class for all pipeline errors."""


# --- archival model ---------------------------------------------------------


class InventoryOnNonItem(Ead2IiifError):
    """A media inventory entry points at a unit that is not item-level."""

    def __init__(self, unit_id: str, level: str):
        self.unit_id = unit_id
        self.level = level
        super().__init__(
            f"inventory entry for {unit_id!r} resolves to a {level}-level unit; "
            "only items carry media"
        )


# --- EAD parsing / emission -------------------------------------------------


class MalformedXml(Ead2IiifError):
    """Input is not well-formed XML or lacks required structure."""


class WrongNamespace(Ead2IiifError):
    """Document root is not in the EAD3 namespace."""


class MissingUnitId(Ead2IiifError):
    """A component has no <unitid> (or an empty one)."""


class UnmappedLevel(Ead2IiifError):
    """An @level value has no entry in the level mapping table."""


class BadDurationFormat(Ead2IiifError):
    """Duration text does not match H+:MM:SS with MM, SS < 60."""


class SchemaViolation(Ead2IiifError):
    """A structured input file breaks its schema.

    ``row`` is the 1-based line/record position when known (header = row 1
    for tabular inputs).
    """

    def __init__(self, message: str, row: int | None = None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class MissingRequiredExtent(SchemaViolation):
    """An asset row lacks the extent its kind requires (e.g. video duration)."""


# --- enrichment -------------------------------------------------------------


class ResolverUnavailable(Ead2IiifError):
    """A remote authority resolver could not be reached or answered badly."""


# --- IIIF build -------------------------------------------------------------


class BuildError(Ead2IiifError):
    """Base for resource-graph construction failures; carries the unit."""

    def __init__(self, unit_id: str, message: str):
        self.unit_id = unit_id
        super().__init__(f"unit {unit_id!r}: {message}")


class SlugCollision(BuildError):
    """Two distinct unit ids produce the same URI slug."""


class MissingMedia(BuildError):
    """An item has no media and no placeholder is available."""


class MediaExtentMissing(BuildError):
    """An asset lacks the spatial/temporal extent its canvas needs."""


class EmptyFile(BuildError):
    """A file-level unit contributes no canvases at all."""


# --- serialization / export -------------------------------------------------


class UnserializableResource(Ead2IiifError):
    """Resource breaks a structural rule that makes JSON-LD emission unsafe."""


class IoFailure(Ead2IiifError):
    """Filesystem write failed during site export."""


class UriOutsideBase(Ead2IiifError):
    """A resource id does not live under the set's base URI."""


# --- publisher --------------------------------------------------------------


class BindFailure(Ead2IiifError):
    """The HTTP listener could not bind its address."""


class RootMissing(Ead2IiifError):
    """Server root directory is absent or not an exported site."""


# --- CLI --------------------------------------------------------------------


class UnreadableInput(Ead2IiifError):
    """A path given to the CLI cannot be read as the expected kind of input."""
