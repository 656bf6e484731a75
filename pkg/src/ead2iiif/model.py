"""Archival tree model: units, levels, access terms, media assets.

The tree is built of immutable value objects. Operations that "modify" a
tree (attaching media, merging terms) return a new tree and leave the input
untouched, so trees can be shared freely across threads.
"""

from __future__ import annotations

import enum
import functools
import logging
from dataclasses import dataclass, replace
from typing import Callable, Iterator, Mapping, Sequence
from urllib.parse import urlparse

from .exceptions import InventoryOnNonItem

logger = logging.getLogger(__name__)

#: Thesaurus names a normalized access term may cite out of the box.
DEFAULT_ALLOWED_SOURCES = frozenset({"nuovo soggettario", "viaf"})


@functools.total_ordering
class ArchivalLevel(enum.Enum):
    """The five description strata, totally ordered from broadest to narrowest."""

    FONDS = "fonds"
    SERIES = "series"
    SUBSERIES = "subseries"
    FILE = "file"
    ITEM = "item"

    @property
    def rank(self) -> int:
        return _LEVEL_RANK[self]

    def __lt__(self, other: object) -> bool:
        if not isinstance(other, ArchivalLevel):
            return NotImplemented
        return self.rank < other.rank


_LEVEL_RANK = {level: rank for rank, level in enumerate(ArchivalLevel)}


class TermCategory(enum.Enum):
    """Index-term categories; values match the interchange spelling."""

    SUBJECT = "subject"
    PLACE = "place"
    PERSON = "person"
    CORPORATE_BODY = "corporate"


class MediaKind(enum.Enum):
    IMAGE = "image"
    VIDEO = "video"
    AUDIO = "audio"


@dataclass(frozen=True)
class AccessTerm:
    """One index term, optionally normalized against an authority file."""

    category: TermCategory
    part: str
    source: str | None = None
    identifier: str | None = None
    normal_form: str | None = None


@dataclass(frozen=True)
class MediaAsset:
    """A digitized representation of an item.

    Images must carry pixel extents; video and audio must carry a duration
    (seconds). ``location`` is either an absolute URI or a path relative to
    the served site root.
    """

    asset_id: str
    kind: MediaKind
    location: str
    media_format: str
    width: int | None = None
    height: int | None = None
    duration: float | None = None
    thumbnail: str | None = None


@dataclass(frozen=True)
class Extent:
    quantity: int
    unit_type: str
    note: str = ""


@dataclass(frozen=True)
class ArchivalUnit:
    """One node of the archival tree.

    ``descriptive_pairs`` holds institution-specific (label, value) fields in
    source order; ``source_order`` is the node's position among its siblings
    in the finding aid.
    """

    unit_id: str
    level: ArchivalLevel
    title: str
    date_display: str = ""
    date_normal: str | None = None
    country_code: str | None = None
    extent: Extent | None = None
    scope_note: str | None = None
    repository: str | None = None
    descriptive_pairs: tuple[tuple[str, str], ...] = ()
    access_terms: tuple[AccessTerm, ...] = ()
    media: tuple[MediaAsset, ...] = ()
    children: tuple[ArchivalUnit, ...] = ()
    source_order: int = 0

    def walk(self) -> Iterator[ArchivalUnit]:
        """Depth-first iteration over this unit and its descendants."""
        yield self
        for child in self.children:
            yield from child.walk()


@dataclass(frozen=True)
class Violation:
    """One integrity-rule breach, naming the offending unit and rule code."""

    unit_id: str
    rule: str
    message: str = ""


# Rule codes emitted by validate_tree (closed set).
RULE_EMPTY_UNIT_ID = "empty-unit-id"
RULE_DUPLICATE_UNIT_ID = "duplicate-unit-id"
RULE_BAD_NESTING = "bad-nesting"
RULE_MEDIA_ON_NON_ITEM = "media-on-non-item"
RULE_BAD_CHILD_ORDER = "bad-child-order"
RULE_BAD_TERM_IDENTIFIER = "bad-term-identifier"
RULE_UNKNOWN_TERM_SOURCE = "unknown-term-source"
RULE_MEDIA_MISSING_EXTENT = "media-missing-extent"
RULE_BAD_DURATION = "bad-duration"


def _is_absolute_uri(value: str) -> bool:
    parsed = urlparse(value)
    return bool(parsed.scheme) and bool(parsed.netloc)


def validate_tree(
    tree: ArchivalUnit,
    *,
    allowed_sources: frozenset[str] = DEFAULT_ALLOWED_SOURCES,
) -> list[Violation]:
    """Check every unit invariant; violations are data, not failures.

    The root must be fonds-level (a caller error, hence ValueError rather
    than a violation).
    """
    if tree.level is not ArchivalLevel.FONDS:
        raise ValueError(f"tree root must be fonds-level, got {tree.level.value!r}")

    violations: list[Violation] = []
    seen_ids: set[str] = set()

    for unit in tree.walk():
        uid = unit.unit_id
        if not uid.strip():
            violations.append(Violation(uid, RULE_EMPTY_UNIT_ID, "unit_id is empty"))
        elif uid in seen_ids:
            violations.append(
                Violation(uid, RULE_DUPLICATE_UNIT_ID, "unit_id appears more than once")
            )
        else:
            seen_ids.add(uid)

        if unit.media and unit.level is not ArchivalLevel.ITEM:
            violations.append(
                Violation(
                    uid,
                    RULE_MEDIA_ON_NON_ITEM,
                    f"{unit.level.value}-level unit carries media",
                )
            )

        for index, child in enumerate(unit.children):
            if child.level <= unit.level:
                violations.append(
                    Violation(
                        child.unit_id,
                        RULE_BAD_NESTING,
                        f"{child.level.value} nested under {unit.level.value}",
                    )
                )
            if child.source_order != index:
                violations.append(
                    Violation(
                        child.unit_id,
                        RULE_BAD_CHILD_ORDER,
                        f"source_order {child.source_order} at position {index}",
                    )
                )

        for term in unit.access_terms:
            if term.identifier is not None and not _is_absolute_uri(term.identifier):
                violations.append(
                    Violation(
                        uid,
                        RULE_BAD_TERM_IDENTIFIER,
                        f"term {term.part!r} identifier {term.identifier!r} is not absolute",
                    )
                )
            if (term.identifier is not None or term.normal_form is not None) and (
                term.source not in allowed_sources
            ):
                violations.append(
                    Violation(
                        uid,
                        RULE_UNKNOWN_TERM_SOURCE,
                        f"term {term.part!r} cites source {term.source!r}",
                    )
                )

        for asset in unit.media:
            violations.extend(_check_asset(uid, asset))

    return violations


def _check_asset(unit_id: str, asset: MediaAsset) -> list[Violation]:
    violations = []
    if asset.kind is MediaKind.IMAGE and (asset.width is None or asset.height is None):
        violations.append(
            Violation(
                unit_id,
                RULE_MEDIA_MISSING_EXTENT,
                f"image asset {asset.asset_id!r} lacks width/height",
            )
        )
    if asset.kind in (MediaKind.VIDEO, MediaKind.AUDIO) and asset.duration is None:
        violations.append(
            Violation(
                unit_id,
                RULE_MEDIA_MISSING_EXTENT,
                f"{asset.kind.value} asset {asset.asset_id!r} lacks a duration",
            )
        )
    if asset.duration is not None and asset.duration <= 0:
        violations.append(
            Violation(
                unit_id,
                RULE_BAD_DURATION,
                f"asset {asset.asset_id!r} duration {asset.duration} is not positive",
            )
        )
    return violations


def find_unit(tree: ArchivalUnit, unit_id: str) -> ArchivalUnit | None:
    """Depth-first search by unit id."""
    for unit in tree.walk():
        if unit.unit_id == unit_id:
            return unit
    return None


def map_units(
    tree: ArchivalUnit, fn: Callable[[ArchivalUnit], ArchivalUnit]
) -> ArchivalUnit:
    """Rebuild the tree bottom-up, applying ``fn`` to every unit.

    ``fn`` must not touch ``children``; child identity is managed here.
    """
    new_children = tuple(map_units(child, fn) for child in tree.children)
    node = tree if new_children == tree.children else replace(tree, children=new_children)
    return fn(node)


def attach_media(
    tree: ArchivalUnit,
    inventory: Mapping[str, Sequence[MediaAsset]],
    on_warning: Callable[[str], None] | None = None,
) -> ArchivalUnit:
    """Populate item media lists from the inventory.

    Units present in the inventory get their media replaced (making the
    operation idempotent); units absent from it are left as they are.
    Inventory keys that match no unit are reported through ``on_warning``.
    Raises InventoryOnNonItem when a key resolves to a non-item unit.
    """
    warn = on_warning if on_warning is not None else logger.warning

    for unit_id in inventory:
        unit = find_unit(tree, unit_id)
        if unit is None:
            warn(f"inventory entry {unit_id!r} matches no unit in the tree")
        elif unit.level is not ArchivalLevel.ITEM:
            raise InventoryOnNonItem(unit_id, unit.level.value)

    def attach(unit: ArchivalUnit) -> ArchivalUnit:
        assets = inventory.get(unit.unit_id)
        if assets is None:
            return unit
        return replace(unit, media=tuple(assets))

    return map_units(tree, attach)
