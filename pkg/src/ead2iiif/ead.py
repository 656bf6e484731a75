"""EAD3 finding-aid input/output and the media-inventory reader.

Parsing accepts any well-formed EAD3 subset document; emission produces a
canonical form (2-space indentation, alphabetically ordered attributes,
fixed element order) so golden files can be compared byte for byte. The
``<control>`` header is carried through opaquely: parsing stores the literal
source span and emission replays it verbatim.
"""

from __future__ import annotations

import csv
import io
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from typing import Mapping
from xml.sax.saxutils import escape

from .exceptions import (
    BadDurationFormat,
    MalformedXml,
    MissingRequiredExtent,
    MissingUnitId,
    SchemaViolation,
    UnmappedLevel,
    WrongNamespace,
)
from .model import (
    AccessTerm,
    ArchivalLevel,
    ArchivalUnit,
    Extent,
    MediaAsset,
    MediaKind,
    TermCategory,
)

EAD3_NAMESPACE = "http://ead3.archivists.org/schema/"

#: EAD @level strings accepted out of the box. Values outside this table
#: raise UnmappedLevel; extend via the ``level_map`` parameter.
DEFAULT_LEVEL_MAP: Mapping[str, ArchivalLevel] = {
    "fonds": ArchivalLevel.FONDS,
    "collection": ArchivalLevel.FONDS,
    "recordgrp": ArchivalLevel.SERIES,
    "series": ArchivalLevel.SERIES,
    "subgrp": ArchivalLevel.SUBSERIES,
    "subseries": ArchivalLevel.SUBSERIES,
    "file": ArchivalLevel.FILE,
    "item": ArchivalLevel.ITEM,
}

# <did> children with dedicated model fields; everything else becomes a
# descriptive pair keyed by its element name.
_MAPPED_DID_TAGS = frozenset(
    {"unitid", "unittitle", "unitdate", "physdescstructured", "didnote", "repository"}
)

_TERM_TAG_BY_CATEGORY = {
    TermCategory.SUBJECT: "subject",
    TermCategory.PLACE: "geogname",
    TermCategory.CORPORATE_BODY: "corpname",
    TermCategory.PERSON: "persname",
}
_CATEGORY_BY_TERM_TAG = {tag: cat for cat, tag in _TERM_TAG_BY_CATEGORY.items()}

# Grouping order inside an emitted <controlaccess>.
_EMIT_CATEGORY_ORDER = (
    TermCategory.SUBJECT,
    TermCategory.PLACE,
    TermCategory.CORPORATE_BODY,
    TermCategory.PERSON,
)

_CONTROL_SPAN_RE = re.compile(
    r"<control(?:\s[^>]*)?(?:/>|>.*?</control>)", re.DOTALL
)

_INVENTORY_REQUIRED = ("unit_id", "asset_id", "kind", "format", "location")
_INVENTORY_OPTIONAL = ("width_px", "height_px", "duration_s", "thumbnail")

_DURATION_RE = re.compile(r"^(\d+):([0-5]\d):([0-5]\d)$")


@dataclass(frozen=True)
class EadDocument:
    """A parsed finding aid: opaque control header plus the archival tree."""

    control_header: str
    root: ArchivalUnit
    namespace: str = EAD3_NAMESPACE


def _qname(tag: str) -> str:
    return f"{{{EAD3_NAMESPACE}}}{tag}"


def _localname(element: ET.Element) -> str:
    tag = element.tag
    return tag.rsplit("}", 1)[-1] if "}" in tag else tag


def _text(element: ET.Element | None) -> str:
    """All text beneath the element with whitespace runs collapsed."""
    if element is None:
        return ""
    return " ".join("".join(element.itertext()).split())


# --- parsing -----------------------------------------------------------------


def parse_ead(
    xml_text: str,
    level_map: Mapping[str, ArchivalLevel] = DEFAULT_LEVEL_MAP,
) -> EadDocument:
    """Parse one EAD3 finding aid into an archival tree."""
    try:
        root = ET.fromstring(xml_text)
    except ET.ParseError as exc:
        raise MalformedXml(f"not well-formed XML: {exc}") from exc

    if root.tag != _qname("ead"):
        raise WrongNamespace(
            f"expected <ead> in namespace {EAD3_NAMESPACE!r}, got {root.tag!r}"
        )

    archdesc = root.find(_qname("archdesc"))
    if archdesc is None:
        raise MalformedXml("document has no <archdesc>")

    match = _CONTROL_SPAN_RE.search(xml_text)
    control_header = match.group(0) if match else ""

    return EadDocument(
        control_header=control_header,
        root=_parse_component(archdesc, level_map, source_order=0),
    )


def _parse_component(
    element: ET.Element,
    level_map: Mapping[str, ArchivalLevel],
    source_order: int,
) -> ArchivalUnit:
    level_attr = element.get("level")
    if level_attr is None or level_attr not in level_map:
        raise UnmappedLevel(
            f"component <{_localname(element)}> has unmapped level {level_attr!r}"
        )
    level = level_map[level_attr]

    did = element.find(_qname("did"))
    if did is None:
        raise MissingUnitId(f"{level.value}-level component has no <did>")
    fields = _parse_did(did, level)

    children: list[ArchivalUnit] = []
    for child in element:
        if child.tag == _qname("c"):
            children.append(_parse_component(child, level_map, len(children)))
        elif child.tag == _qname("dsc"):
            for sub in child.findall(_qname("c")):
                children.append(_parse_component(sub, level_map, len(children)))

    terms: list[AccessTerm] = []
    for block in element.findall(_qname("controlaccess")):
        for entry in block:
            category = _CATEGORY_BY_TERM_TAG.get(_localname(entry))
            if category is None:
                continue
            part_el = entry.find(_qname("part"))
            terms.append(
                AccessTerm(
                    category=category,
                    part=_text(part_el) if part_el is not None else _text(entry),
                    source=entry.get("source"),
                    identifier=entry.get("identifier"),
                    normal_form=entry.get("normal"),
                )
            )

    return ArchivalUnit(
        level=level,
        children=tuple(children),
        access_terms=tuple(terms),
        source_order=source_order,
        **fields,
    )


def _parse_did(did: ET.Element, level: ArchivalLevel) -> dict:
    unitid = did.find(_qname("unitid"))
    unit_id = _text(unitid)
    if not unit_id:
        title_hint = _text(did.find(_qname("unittitle"))) or "(untitled)"
        raise MissingUnitId(
            f"{level.value}-level component {title_hint!r} has no <unitid>"
        )

    unitdate = did.find(_qname("unitdate"))
    extent = _parse_extent(did.find(_qname("physdescstructured")))
    didnote = did.find(_qname("didnote"))
    repository = did.find(_qname("repository"))

    pairs: list[tuple[str, str]] = []
    for child in did:
        name = _localname(child)
        if name not in _MAPPED_DID_TAGS:
            pairs.append((name, _text(child)))

    return {
        "unit_id": unit_id,
        "country_code": unitid.get("countrycode") if unitid is not None else None,
        "title": _text(did.find(_qname("unittitle"))),
        "date_display": _text(unitdate),
        "date_normal": unitdate.get("normal") if unitdate is not None else None,
        "extent": extent,
        "scope_note": _text(didnote) if didnote is not None else None,
        "repository": _text(repository) if repository is not None else None,
        "descriptive_pairs": tuple(pairs),
    }


def _parse_extent(element: ET.Element | None) -> Extent | None:
    if element is None:
        return None
    quantity_text = _text(element.find(_qname("quantity")))
    try:
        quantity = int(quantity_text)
    except ValueError:
        raise MalformedXml(
            f"<quantity> holds {quantity_text!r}, expected an integer"
        ) from None
    if quantity <= 0:
        raise MalformedXml(f"<quantity> must be positive, got {quantity}")
    return Extent(
        quantity=quantity,
        unit_type=_text(element.find(_qname("unittype"))),
        note=_text(element.find(_qname("descriptivenote"))),
    )


# --- emission ----------------------------------------------------------------


class _Writer:
    """Canonical XML writer: 2-space indent, alphabetical attributes."""

    def __init__(self) -> None:
        self._lines: list[str] = []
        self._depth = 0

    def _attrs(self, attrs: Mapping[str, str]) -> str:
        return "".join(
            f' {name}="{escape(value, {chr(34): "&quot;"})}"'
            for name, value in sorted(attrs.items())
        )

    def open(self, tag: str, attrs: Mapping[str, str] | None = None) -> None:
        self._lines.append(f"{'  ' * self._depth}<{tag}{self._attrs(attrs or {})}>")
        self._depth += 1

    def close(self, tag: str) -> None:
        self._depth -= 1
        self._lines.append(f"{'  ' * self._depth}</{tag}>")

    def leaf(self, tag: str, text: str, attrs: Mapping[str, str] | None = None) -> None:
        self._lines.append(
            f"{'  ' * self._depth}<{tag}{self._attrs(attrs or {})}>{escape(text)}</{tag}>"
        )

    def raw(self, block: str) -> None:
        self._lines.append(f"{'  ' * self._depth}{block}")

    def text(self) -> str:
        return "\n".join(self._lines) + "\n"


def emit_ead(doc: EadDocument) -> str:
    """Serialize a finding aid to canonical EAD3 XML.

    The output re-parses to a tree equal to ``doc.root`` on every modeled
    field (media lists excepted; those live in the inventory).
    """
    w = _Writer()
    w.raw('<?xml version="1.0" encoding="UTF-8"?>')
    w.open(
        "ead",
        {
            "xmlns": EAD3_NAMESPACE,
            "xmlns:xsi": "http://www.w3.org/2001/XMLSchema-instance",
            "xsi:schemaLocation": f"{EAD3_NAMESPACE} ead3.xsd",
        },
    )
    if doc.control_header:
        w.raw(doc.control_header)
    _emit_component(w, doc.root, tag="archdesc")
    w.close("ead")
    return w.text()


def _emit_component(w: _Writer, unit: ArchivalUnit, tag: str) -> None:
    w.open(tag, {"level": unit.level.value})
    _emit_did(w, unit)
    if unit.children:
        if tag == "archdesc":
            w.open("dsc")
        for child in unit.children:
            _emit_component(w, child, tag="c")
        if tag == "archdesc":
            w.close("dsc")
    if unit.access_terms:
        _emit_controlaccess(w, unit)
    w.close(tag)


def _emit_did(w: _Writer, unit: ArchivalUnit) -> None:
    w.open("did")
    unitid_attrs = {"identifier": unit.unit_id}
    if unit.country_code is not None:
        unitid_attrs["countrycode"] = unit.country_code
    w.leaf("unitid", unit.unit_id, unitid_attrs)
    w.leaf("unittitle", unit.title)
    if unit.date_display or unit.date_normal is not None:
        attrs = {"normal": unit.date_normal} if unit.date_normal is not None else {}
        w.leaf("unitdate", unit.date_display, attrs)
    if unit.extent is not None:
        w.open(
            "physdescstructured",
            {"coverage": "whole", "physdescstructuredtype": "materialtype"},
        )
        w.leaf("quantity", str(unit.extent.quantity))
        w.leaf("unittype", unit.extent.unit_type)
        if unit.extent.note:
            w.open("descriptivenote")
            w.leaf("p", unit.extent.note)
            w.close("descriptivenote")
        w.close("physdescstructured")
    if unit.scope_note is not None:
        w.leaf("didnote", unit.scope_note)
    if unit.repository is not None:
        w.open("repository", {"label": "Repository:"})
        w.open("corpname")
        w.leaf("part", unit.repository)
        w.close("corpname")
        w.close("repository")
    for label, value in unit.descriptive_pairs:
        w.leaf(label, value)
    w.close("did")


def _emit_controlaccess(w: _Writer, unit: ArchivalUnit) -> None:
    w.open("controlaccess")
    for category in _EMIT_CATEGORY_ORDER:
        for term in unit.access_terms:
            if term.category is not category:
                continue
            attrs: dict[str, str] = {}
            if term.identifier is not None:
                attrs["identifier"] = term.identifier
            if term.normal_form is not None:
                attrs["normal"] = term.normal_form
            if term.source is not None:
                attrs["source"] = term.source
            tag = _TERM_TAG_BY_CATEGORY[category]
            w.open(tag, attrs)
            w.leaf("part", term.part)
            w.close(tag)
    w.close("controlaccess")


def make_control_header(unit: ArchivalUnit) -> str:
    """Mint a minimal <control> block for a generated per-unit export."""
    w = _Writer()
    w.open("control")
    w.leaf("recordid", unit.unit_id)
    w.open("filedesc")
    w.open("titlestmt")
    w.leaf("titleproper", unit.title)
    w.close("titlestmt")
    w.close("filedesc")
    w.close("control")
    # The block is replayed at depth 1 inside <ead>; indent inner lines now.
    lines = w.text().splitlines()
    return "\n".join([lines[0]] + [f"  {line}" for line in lines[1:]])


# --- media inventory ---------------------------------------------------------


def parse_media_inventory(text: str) -> dict[str, list[MediaAsset]]:
    """Read the CSV media inventory into unit_id -> assets (file order kept).

    Columns: unit_id, asset_id, kind, format, location are required;
    width_px, height_px, duration_s, thumbnail apply per kind. Asset
    invariants are enforced here so downstream code can trust the map.
    """
    if not text.strip():
        return {}

    reader = csv.DictReader(io.StringIO(text))
    header = reader.fieldnames or []
    missing = [col for col in _INVENTORY_REQUIRED if col not in header]
    if missing:
        raise SchemaViolation(f"missing required columns: {', '.join(missing)}", row=1)
    unknown = [
        col for col in header if col not in _INVENTORY_REQUIRED + _INVENTORY_OPTIONAL
    ]
    if unknown:
        raise SchemaViolation(f"unknown columns: {', '.join(unknown)}", row=1)

    inventory: dict[str, list[MediaAsset]] = {}
    for row_number, row in enumerate(reader, start=2):
        asset = _parse_inventory_row(row, row_number)
        inventory.setdefault(row["unit_id"].strip(), []).append(asset)
    return inventory


def _parse_inventory_row(row: Mapping[str, str | None], row_number: int) -> MediaAsset:
    def cell(name: str) -> str:
        return (row.get(name) or "").strip()

    for name in _INVENTORY_REQUIRED:
        if not cell(name):
            raise SchemaViolation(f"{name} is empty", row=row_number)

    kind_text = cell("kind")
    try:
        kind = MediaKind(kind_text)
    except ValueError:
        raise SchemaViolation(
            f"kind must be image|video|audio, got {kind_text!r}", row=row_number
        ) from None

    def int_cell(name: str) -> int | None:
        value = cell(name)
        if not value:
            return None
        try:
            parsed = int(value)
        except ValueError:
            raise SchemaViolation(
                f"{name} must be an integer, got {value!r}", row=row_number
            ) from None
        if parsed <= 0:
            raise SchemaViolation(f"{name} must be positive, got {parsed}", row=row_number)
        return parsed

    width = int_cell("width_px")
    height = int_cell("height_px")

    duration: float | None = None
    if cell("duration_s"):
        try:
            duration = float(cell("duration_s"))
        except ValueError:
            raise SchemaViolation(
                f"duration_s must be a number, got {cell('duration_s')!r}",
                row=row_number,
            ) from None
        if duration <= 0:
            raise SchemaViolation(
                f"duration_s must be positive, got {duration}", row=row_number
            )

    if kind is MediaKind.IMAGE and (width is None or height is None):
        raise MissingRequiredExtent("image asset needs width_px and height_px", row=row_number)
    if kind in (MediaKind.VIDEO, MediaKind.AUDIO) and duration is None:
        raise MissingRequiredExtent(
            f"{kind.value} asset needs duration_s", row=row_number
        )

    return MediaAsset(
        asset_id=cell("asset_id"),
        kind=kind,
        location=cell("location"),
        media_format=cell("format"),
        width=width,
        height=height,
        duration=duration,
        thumbnail=cell("thumbnail") or None,
    )


# --- durations ---------------------------------------------------------------


def parse_duration(text: str) -> float:
    """Convert "HH:MM:SS" (hours unbounded) to seconds."""
    match = _DURATION_RE.match(text)
    if not match:
        raise BadDurationFormat(f"expected H+:MM:SS with MM,SS < 60, got {text!r}")
    hours, minutes, seconds = (int(part) for part in match.groups())
    return float(3600 * hours + 60 * minutes + seconds)


def format_duration(seconds: float) -> str:
    """Render whole seconds as canonical "HH:MM:SS"."""
    if seconds < 0 or seconds != int(seconds):
        raise BadDurationFormat(f"expected a non-negative whole number, got {seconds!r}")
    total = int(seconds)
    return f"{total // 3600:02d}:{total % 3600 // 60:02d}:{total % 60:02d}"
