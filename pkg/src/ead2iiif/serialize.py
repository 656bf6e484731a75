"""Canonical Presentation 3 JSON-LD output, structural validation, export.

Serialization is deterministic down to the byte: fixed property order
(@context, id, type, label, metadata, homepage, seeAlso, items, then
type-specific), 2-space indentation, UTF-8, language-map values always
arrays, and integral numbers written without a decimal point. Equal
resources therefore yield identical text, which the golden tests rely on.

Validation covers the closed rule set below; everything the builder can
emit is checked, full Presentation 3 conformance is left to community
validators.

Error rules:   missing-id, relative-id, missing-label, collection-item-kind,
               manifest-item-kind, manifest-no-canvas, canvas-no-extent,
               extent-kind-mismatch, duplicate-id, dangling-reference
Warning rules: empty-metadata, missing-see-also, empty-collection
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable
from urllib.parse import urlparse

from .ead import EadDocument, emit_ead, make_control_header
from .exceptions import IoFailure, UnserializableResource, UriOutsideBase
from .build import (
    BODY_TYPE,
    CANVAS,
    COLLECTION,
    MANIFEST,
    PRESENTATION_CONTEXT,
    Homepage,
    IiifResource,
    MetadataPair,
    PaintedMedia,
    ResourceRef,
    ResourceSet,
    SeeAlso,
)
from .model import MediaKind, find_unit

_KIND_BY_BODY_TYPE = {name: kind for kind, name in BODY_TYPE.items()}


class Severity(enum.Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class ValidationIssue:
    resource_id: str
    severity: Severity
    rule: str
    message: str = ""


def _error(resource_id: str, rule: str, message: str = "") -> ValidationIssue:
    return ValidationIssue(resource_id, Severity.ERROR, rule, message)


def _warning(resource_id: str, rule: str, message: str = "") -> ValidationIssue:
    return ValidationIssue(resource_id, Severity.WARNING, rule, message)


# --- serialization -------------------------------------------------------------


def _num(value: float | int):
    """Integral values serialize as integers (1920, not 1920.0)."""
    if isinstance(value, float) and value.is_integer():
        return int(value)
    return value


def _language_map(lm: dict) -> dict:
    return {tag: list(values) for tag, values in lm.items()}


def _metadata_json(pairs: Iterable[MetadataPair]) -> list[dict]:
    return [
        {"label": _language_map(p.label), "value": _language_map(p.value)}
        for p in pairs
    ]


def _see_also_json(entries: Iterable[SeeAlso]) -> list[dict]:
    return [
        {
            "id": e.id,
            "type": e.kind,
            "format": e.format,
            "label": _language_map(e.label),
        }
        for e in entries
    ]


def _homepage_json(homepage: Homepage) -> list[dict]:
    return [
        {
            "id": homepage.id,
            "type": "Text",
            "label": _language_map(homepage.label),
            "format": "text/html",
        }
    ]


def _body_json(content: PaintedMedia, canvas: IiifResource) -> dict:
    body = {
        "id": content.location,
        "type": BODY_TYPE[content.kind],
        "format": content.format,
    }
    if canvas.width is not None:
        body["width"] = canvas.width
    if canvas.height is not None:
        body["height"] = canvas.height
    if canvas.duration is not None:
        body["duration"] = _num(canvas.duration)
    return body


def _canvas_json(canvas: IiifResource) -> dict:
    if canvas.content is None:
        raise UnserializableResource(f"canvas {canvas.id!r} has no painted body")
    obj: dict = {
        "id": canvas.id,
        "type": CANVAS,
        "label": _language_map(canvas.label),
    }
    obj["items"] = [
        {
            "id": f"{canvas.id}/page/0",
            "type": "AnnotationPage",
            "items": [
                {
                    "id": f"{canvas.id}/annotation/0",
                    "type": "Annotation",
                    "motivation": "painting",
                    "body": _body_json(canvas.content, canvas),
                    "target": canvas.id,
                }
            ],
        }
    ]
    if canvas.width is not None:
        obj["width"] = canvas.width
    if canvas.height is not None:
        obj["height"] = canvas.height
    if canvas.duration is not None:
        obj["duration"] = _num(canvas.duration)
    return obj


def _resource_json(resource: IiifResource, top_level: bool) -> dict:
    if resource.kind == CANVAS:
        obj = _canvas_json(resource)
        if top_level:
            obj = {"@context": PRESENTATION_CONTEXT, **obj}
        return obj

    obj = {}
    if top_level:
        obj["@context"] = PRESENTATION_CONTEXT
    obj["id"] = resource.id
    obj["type"] = resource.kind
    obj["label"] = _language_map(resource.label)
    if resource.metadata:
        obj["metadata"] = _metadata_json(resource.metadata)
    if resource.homepage is not None:
        obj["homepage"] = _homepage_json(resource.homepage)
    if resource.see_also:
        obj["seeAlso"] = _see_also_json(resource.see_also)

    if resource.kind == COLLECTION:
        items = []
        for child in resource.items:
            if not isinstance(child, ResourceRef):
                raise UnserializableResource(
                    f"collection {resource.id!r} holds an inline resource; "
                    "collections serialize typed references only"
                )
            items.append(
                {"id": child.id, "type": child.kind, "label": _language_map(child.label)}
            )
        obj["items"] = items
    elif resource.kind == MANIFEST:
        canvases = []
        for child in resource.items:
            if not isinstance(child, IiifResource) or child.kind != CANVAS:
                raise UnserializableResource(
                    f"manifest {resource.id!r} items must be inline canvases"
                )
            canvases.append(_canvas_json(child))
        obj["items"] = canvases
    else:
        raise UnserializableResource(f"unknown resource kind {resource.kind!r}")
    return obj


def serialize(resource: IiifResource) -> str:
    """Render one resource as canonical Presentation 3 JSON-LD text."""
    obj = _resource_json(resource, top_level=True)
    return json.dumps(obj, ensure_ascii=False, indent=2) + "\n"


# --- parse-back ------------------------------------------------------------------


def parse_resource(text: str) -> IiifResource:
    """Inverse of serialize for all modeled fields (used by the validate
    command and the round-trip tests)."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UnserializableResource(f"not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise UnserializableResource("resource document must be a JSON object")
    return _resource_from_json(obj)


def _lm_from_json(obj: object) -> dict:
    if not isinstance(obj, dict):
        return {}
    return {tag: [str(v) for v in values] for tag, values in obj.items()}


def _resource_from_json(obj: dict) -> IiifResource:
    kind = obj.get("type", "")
    if kind == CANVAS:
        return _canvas_from_json(obj)

    metadata = tuple(
        MetadataPair(label=_lm_from_json(p.get("label")), value=_lm_from_json(p.get("value")))
        for p in obj.get("metadata", [])
        if isinstance(p, dict)
    )
    see_also = tuple(
        SeeAlso(
            id=e.get("id", ""),
            kind=e.get("type", ""),
            format=e.get("format", ""),
            label=_lm_from_json(e.get("label")),
        )
        for e in obj.get("seeAlso", [])
        if isinstance(e, dict)
    )
    homepage = None
    for e in obj.get("homepage", []):
        if isinstance(e, dict):
            homepage = Homepage(id=e.get("id", ""), label=_lm_from_json(e.get("label")))
            break

    items: list = []
    for child in obj.get("items", []):
        if not isinstance(child, dict):
            continue
        if kind == COLLECTION:
            items.append(
                ResourceRef(
                    id=child.get("id", ""),
                    kind=child.get("type", ""),
                    label=_lm_from_json(child.get("label")),
                )
            )
        else:
            items.append(_resource_from_json(child))

    return IiifResource(
        id=obj.get("id", ""),
        kind=kind,
        label=_lm_from_json(obj.get("label")),
        metadata=metadata,
        see_also=see_also,
        homepage=homepage,
        items=tuple(items),
    )


def _canvas_from_json(obj: dict) -> IiifResource:
    content = None
    for page in obj.get("items", []):
        for annotation in page.get("items", []) if isinstance(page, dict) else []:
            body = annotation.get("body") if isinstance(annotation, dict) else None
            if isinstance(body, dict):
                kind = _KIND_BY_BODY_TYPE.get(body.get("type", ""))
                if kind is not None:
                    content = PaintedMedia(
                        location=body.get("id", ""),
                        kind=kind,
                        format=body.get("format", ""),
                    )
                break
        break
    duration = obj.get("duration")
    return IiifResource(
        id=obj.get("id", ""),
        kind=CANVAS,
        label=_lm_from_json(obj.get("label")),
        content=content,
        width=obj.get("width"),
        height=obj.get("height"),
        duration=float(duration) if duration is not None else None,
    )


# --- validation -------------------------------------------------------------------


def _is_absolute(uri: str) -> bool:
    parsed = urlparse(uri)
    return bool(parsed.scheme) and bool(parsed.netloc)


def _label_empty(lm: dict) -> bool:
    return not any(value for values in lm.values() for value in values)


def validate_resource(resource: IiifResource) -> list[ValidationIssue]:
    """Apply the structural rules to a resource and its inline subtree."""
    issues: list[ValidationIssue] = []
    seen_ids: set[str] = set()
    _validate_walk(resource, issues, seen_ids)
    return issues


def _validate_walk(
    resource: IiifResource, issues: list[ValidationIssue], seen_ids: set[str]
) -> None:
    rid = resource.id
    if not rid:
        issues.append(_error(rid, "missing-id"))
    elif not _is_absolute(rid):
        issues.append(_error(rid, "relative-id", f"{rid!r} is not an absolute URI"))
    if rid:
        if rid in seen_ids:
            issues.append(_error(rid, "duplicate-id"))
        seen_ids.add(rid)

    if _label_empty(resource.label):
        issues.append(_error(rid, "missing-label"))

    if resource.kind == COLLECTION:
        if not resource.metadata:
            issues.append(_warning(rid, "empty-metadata"))
        if not resource.see_also:
            issues.append(_warning(rid, "missing-see-also"))
        if not resource.items:
            issues.append(_warning(rid, "empty-collection"))
        for child in resource.items:
            kind = child.kind if isinstance(child, (ResourceRef, IiifResource)) else ""
            if kind not in (COLLECTION, MANIFEST):
                issues.append(
                    _error(rid, "collection-item-kind", f"item of kind {kind!r}")
                )
    elif resource.kind == MANIFEST:
        if not resource.metadata:
            issues.append(_warning(rid, "empty-metadata"))
        if not resource.see_also:
            issues.append(_warning(rid, "missing-see-also"))
        if not resource.items:
            issues.append(_error(rid, "manifest-no-canvas"))
        for child in resource.items:
            if not isinstance(child, IiifResource) or child.kind != CANVAS:
                issues.append(_error(rid, "manifest-item-kind"))
            else:
                _validate_walk(child, issues, seen_ids)
    elif resource.kind == CANVAS:
        spatial = resource.width is not None and resource.height is not None
        temporal = resource.duration is not None
        if not spatial and not temporal:
            issues.append(_error(rid, "canvas-no-extent"))
        if resource.content is not None:
            body_kind = resource.content.kind
            if body_kind is MediaKind.IMAGE and not spatial:
                issues.append(
                    _error(rid, "extent-kind-mismatch", "image body without width/height")
                )
            if body_kind in (MediaKind.VIDEO, MediaKind.AUDIO) and not temporal:
                issues.append(
                    _error(rid, "extent-kind-mismatch", f"{body_kind.value} body without duration")
                )


def validate_set(resource_set: ResourceSet) -> list[ValidationIssue]:
    """Validate every resource in a built set plus cross-resource rules."""
    issues: list[ValidationIssue] = []
    seen_ids: set[str] = set()
    for resource in resource_set.by_id.values():
        if resource.kind == CANVAS:
            continue  # canvases are validated inline within their manifest
        _validate_walk(resource, issues, seen_ids)
    for resource in resource_set.by_id.values():
        for child in resource.items:
            if isinstance(child, ResourceRef) and child.id not in resource_set.by_id:
                issues.append(
                    _error(resource.id, "dangling-reference", f"-> {child.id}")
                )
    return issues


# --- site export --------------------------------------------------------------------


def _uri_to_relative_path(uri: str, base_uri: str) -> str:
    if not uri.startswith(base_uri + "/"):
        raise UriOutsideBase(f"{uri!r} is outside base {base_uri!r}")
    return uri[len(base_uri) + 1 :]


def write_site(resource_set: ResourceSet, out_dir: str | Path) -> list[str]:
    """Write collections, manifests and per-unit EAD exports under out_dir.

    Paths mirror each resource URI relative to the set's base URI. Returns
    the sorted list of written relative paths; re-running overwrites the
    same bytes.
    """
    out_root = Path(out_dir)
    written: set[str] = set()

    # One EAD export per described unit, at the path its seeAlso points at.
    ead_paths: dict[str, str] = {}
    for resource in resource_set.by_id.values():
        unit_id = resource_set.provenance.get(resource.id)
        if unit_id is None:
            continue
        for entry in resource.see_also:
            if entry.format == "text/xml":
                ead_paths[unit_id] = _uri_to_relative_path(
                    entry.id, resource_set.base_uri
                )

    try:
        for resource in resource_set.by_id.values():
            if resource.kind not in (COLLECTION, MANIFEST):
                continue
            relative = _uri_to_relative_path(resource.id, resource_set.base_uri)
            target = out_root / relative
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(serialize(resource), encoding="utf-8")
            written.add(relative)

        for unit_id, relative in ead_paths.items():
            unit = find_unit(resource_set.source_tree, unit_id)
            if unit is None:
                continue
            export = EadDocument(control_header=make_control_header(unit), root=unit)
            target = out_root / relative
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(emit_ead(export), encoding="utf-8")
            written.add(relative)
    except OSError as exc:
        raise IoFailure(f"cannot write site files: {exc}") from exc
    return sorted(written)
