"""Maps the archival tree onto IIIF Presentation 3 resources, bottom-up.

Item manifests are built first, then each file's manifest and collection,
then one collection per broader unit up to the fonds. The resulting graph
mirrors the tree: every parent-child edge becomes a reference edge, sibling
order is preserved, and files are reachable both through their collection
(drill-down) and their manifest (overview).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence
from urllib.parse import urlparse

from .exceptions import (
    EmptyFile,
    MediaExtentMissing,
    MissingMedia,
    SlugCollision,
)
from .model import (
    ArchivalLevel,
    ArchivalUnit,
    MediaAsset,
    MediaKind,
    TermCategory,
    attach_media,
    validate_tree,
)

PRESENTATION_CONTEXT = "http://iiif.io/api/presentation/3/context.json"

COLLECTION = "Collection"
MANIFEST = "Manifest"
CANVAS = "Canvas"

EAD_SEE_ALSO_LABEL = "Descrizione archivistica in EAD"
HOMEPAGE_LABEL = "Pagina web della risorsa"

#: Body "type" values per media kind (Presentation 3 content resource types).
BODY_TYPE = {
    MediaKind.IMAGE: "Image",
    MediaKind.VIDEO: "Video",
    MediaKind.AUDIO: "Sound",
}

# Display vocabulary for metadata labels; falls back to English for
# languages without a table.
_LEVEL_NAMES = {
    "it": {
        ArchivalLevel.FONDS: "fondo",
        ArchivalLevel.SERIES: "serie",
        ArchivalLevel.SUBSERIES: "sottoserie",
        ArchivalLevel.FILE: "fascicolo",
        ArchivalLevel.ITEM: "documento",
    },
}
_CATEGORY_LABELS = {
    "it": {
        TermCategory.SUBJECT: "soggetti",
        TermCategory.PLACE: "luoghi",
        TermCategory.CORPORATE_BODY: "enti",
        TermCategory.PERSON: "persone",
    },
}
_LEVEL_NAMES_FALLBACK = {level: level.value for level in ArchivalLevel}
_CATEGORY_LABELS_FALLBACK = {
    TermCategory.SUBJECT: "subjects",
    TermCategory.PLACE: "places",
    TermCategory.CORPORATE_BODY: "organizations",
    TermCategory.PERSON: "people",
}

_METADATA_CATEGORY_ORDER = (
    TermCategory.SUBJECT,
    TermCategory.PLACE,
    TermCategory.CORPORATE_BODY,
    TermCategory.PERSON,
)

LanguageMap = dict[str, list[str]]


def lang_map(lang: str, *values: str) -> LanguageMap:
    return {lang: list(values)}


@dataclass(frozen=True)
class MetadataPair:
    label: LanguageMap
    value: LanguageMap


@dataclass(frozen=True)
class SeeAlso:
    id: str
    kind: str
    format: str
    label: LanguageMap


@dataclass(frozen=True)
class Homepage:
    id: str
    label: LanguageMap


@dataclass(frozen=True)
class PaintedMedia:
    """The single painted body of a canvas."""

    location: str
    kind: MediaKind
    format: str


@dataclass(frozen=True)
class ResourceRef:
    """Typed pointer used inside collection item lists."""

    id: str
    kind: str
    label: LanguageMap


@dataclass(frozen=True)
class IiifResource:
    id: str
    kind: str
    label: LanguageMap
    metadata: tuple[MetadataPair, ...] = ()
    see_also: tuple[SeeAlso, ...] = ()
    homepage: Homepage | None = None
    items: tuple = ()
    content: PaintedMedia | None = None
    width: int | None = None
    height: int | None = None
    duration: float | None = None

    def ref(self) -> ResourceRef:
        return ResourceRef(id=self.id, kind=self.kind, label=self.label)


@dataclass(frozen=True)
class BuildConfig:
    """Everything the builder needs to mint URIs and decorate resources."""

    base_uri: str
    default_language: str = "it"
    ead_export_uri_pattern: str = "{base}/ead/{slug}.xml"
    institution_homepage: str | None = None
    strict_media: bool = False
    placeholder_image: MediaAsset | None = None

    def __post_init__(self) -> None:
        parsed = urlparse(self.base_uri)
        if not parsed.scheme or not parsed.netloc:
            raise ValueError(f"base_uri must be absolute, got {self.base_uri!r}")
        if self.base_uri.endswith("/"):
            raise ValueError("base_uri must not end with a slash")


@dataclass(frozen=True)
class ResourceSet:
    """The built graph: root collection plus an id-indexed view of it.

    ``provenance`` maps every collection/manifest URI back to its unit;
    ``source_tree`` is the archival tree the set was built from (needed to
    regenerate the per-unit EAD exports the seeAlso links point at).
    """

    root: IiifResource
    by_id: dict[str, IiifResource]
    provenance: dict[str, str]
    base_uri: str
    source_tree: ArchivalUnit
    warnings: tuple[str, ...] = ()


# --- URI minting --------------------------------------------------------------


def slugify(unit_id: str) -> str:
    """Case-fold and squash every non-alphanumeric run to one hyphen."""
    out: list[str] = []
    for ch in unit_id.casefold():
        out.append(ch if ch.isalnum() else "-")
    slug = "".join(out)
    while "--" in slug:
        slug = slug.replace("--", "-")
    return slug.strip("-")


def mint_uri(
    config: BuildConfig, kind: str, unit_id: str, ordinal: int | None = None
) -> str:
    """Deterministic URI scheme for collections, manifests and canvases."""
    if not unit_id:
        raise ValueError("unit_id must be non-empty")
    slug = slugify(unit_id)
    if not slug:
        raise ValueError(f"unit_id {unit_id!r} yields an empty slug")
    if kind == COLLECTION:
        return f"{config.base_uri}/collection/{slug}.json"
    if kind == MANIFEST:
        return f"{config.base_uri}/manifest/{slug}.json"
    if kind == CANVAS:
        if ordinal is None:
            raise ValueError("canvas URIs need an ordinal")
        return f"{config.base_uri}/manifest/{slug}/canvas/{ordinal}"
    raise ValueError(f"unknown resource kind {kind!r}")


def ead_export_uri(config: BuildConfig, unit_id: str) -> str:
    return config.ead_export_uri_pattern.format(
        base=config.base_uri, slug=slugify(unit_id)
    )


# --- metadata ----------------------------------------------------------------


def metadata_pairs(unit: ArchivalUnit, lang: str) -> tuple[MetadataPair, ...]:
    """Label-value pairs shown in a viewer's metadata sidebar.

    Fixed leading pairs (titolo, data, id, livello) are followed by the
    extent note, abstract and holding institution when present, then the
    unit's own descriptive pairs in source order, then one aggregate pair
    per access-term category. The id value carries the no-language tag.
    """
    level_names = _LEVEL_NAMES.get(lang, _LEVEL_NAMES_FALLBACK)
    category_labels = _CATEGORY_LABELS.get(lang, _CATEGORY_LABELS_FALLBACK)

    def pair(label: str, value: LanguageMap) -> MetadataPair:
        return MetadataPair(label=lang_map(lang, label), value=value)

    pairs: list[MetadataPair] = []
    if unit.title:
        pairs.append(pair("titolo", lang_map(lang, unit.title)))
    if unit.date_display:
        pairs.append(pair("data", lang_map(lang, unit.date_display)))
    pairs.append(pair("id", {"none": [unit.unit_id]}))
    pairs.append(pair("livello", lang_map(lang, level_names[unit.level])))
    if unit.extent is not None and unit.extent.note:
        pairs.append(pair("dettagli", lang_map(lang, unit.extent.note)))
    if unit.scope_note:
        pairs.append(pair("abstract", lang_map(lang, unit.scope_note)))
    if unit.repository:
        pairs.append(pair("istituto di conservazione", lang_map(lang, unit.repository)))
    for label, value in unit.descriptive_pairs:
        pairs.append(pair(label, lang_map(lang, value)))
    for category in _METADATA_CATEGORY_ORDER:
        parts = [t.part for t in unit.access_terms if t.category is category]
        if parts:
            pairs.append(pair(category_labels[category], lang_map(lang, "; ".join(parts))))
    return tuple(pairs)


def _ead_see_also(config: BuildConfig, unit_id: str) -> tuple[SeeAlso, ...]:
    return (
        SeeAlso(
            id=ead_export_uri(config, unit_id),
            kind="Dataset",
            format="text/xml",
            label=lang_map(config.default_language, EAD_SEE_ALSO_LABEL),
        ),
    )


def _homepage(config: BuildConfig) -> Homepage | None:
    if config.institution_homepage is None:
        return None
    return Homepage(
        id=config.institution_homepage,
        label=lang_map(config.default_language, HOMEPAGE_LABEL),
    )


def _resolve_location(location: str, config: BuildConfig) -> str:
    parsed = urlparse(location)
    if parsed.scheme and parsed.netloc:
        return location
    return f"{config.base_uri}/{location.lstrip('/')}"


# --- per-level builders --------------------------------------------------------


def _asset_canvas(
    item: ArchivalUnit, asset: MediaAsset, ordinal: int, config: BuildConfig
) -> IiifResource:
    if asset.kind is MediaKind.IMAGE and (asset.width is None or asset.height is None):
        raise MediaExtentMissing(
            item.unit_id, f"image asset {asset.asset_id!r} lacks width/height"
        )
    if asset.kind in (MediaKind.VIDEO, MediaKind.AUDIO) and asset.duration is None:
        raise MediaExtentMissing(
            item.unit_id, f"{asset.kind.value} asset {asset.asset_id!r} lacks a duration"
        )
    return IiifResource(
        id=mint_uri(config, CANVAS, item.unit_id, ordinal),
        kind=CANVAS,
        label=lang_map(config.default_language, item.title),
        content=PaintedMedia(
            location=_resolve_location(asset.location, config),
            kind=asset.kind,
            format=asset.media_format,
        ),
        width=asset.width,
        height=asset.height,
        duration=asset.duration,
    )


def build_item_manifest(item: ArchivalUnit, config: BuildConfig) -> IiifResource:
    """One manifest per item, one canvas per asset in inventory order.

    With no media: strict mode raises MissingMedia; otherwise a placeholder
    canvas is painted when the config provides one, else MissingMedia is
    raised (callers that can skip the item should do so instead).
    """
    if item.level is not ArchivalLevel.ITEM:
        raise ValueError(f"unit {item.unit_id!r} is {item.level.value}, not an item")
    assets = list(item.media)
    if not assets:
        if not config.strict_media and config.placeholder_image is not None:
            assets = [config.placeholder_image]
        else:
            raise MissingMedia(item.unit_id, "item has no media assets")
    canvases = tuple(
        _asset_canvas(item, asset, ordinal, config)
        for ordinal, asset in enumerate(assets)
    )
    return IiifResource(
        id=mint_uri(config, MANIFEST, item.unit_id),
        kind=MANIFEST,
        label=lang_map(config.default_language, item.title),
        metadata=metadata_pairs(item, config.default_language),
        see_also=_ead_see_also(config, item.unit_id),
        homepage=_homepage(config),
        items=canvases,
    )


def build_file_manifest(
    file: ArchivalUnit,
    item_manifests: Sequence[IiifResource],
    config: BuildConfig,
) -> IiifResource:
    """The file "showcase": each item's first canvas, re-identified under
    the file manifest with sequential ordinals."""
    canvases: list[IiifResource] = []
    for manifest in item_manifests:
        first = manifest.items[0]
        canvases.append(
            IiifResource(
                id=mint_uri(config, CANVAS, file.unit_id, len(canvases)),
                kind=CANVAS,
                label=first.label,
                content=first.content,
                width=first.width,
                height=first.height,
                duration=first.duration,
            )
        )
    if not canvases:
        raise EmptyFile(file.unit_id, "no child item contributes a canvas")
    return IiifResource(
        id=mint_uri(config, MANIFEST, file.unit_id),
        kind=MANIFEST,
        label=lang_map(config.default_language, file.title),
        metadata=metadata_pairs(file, config.default_language),
        see_also=_ead_see_also(config, file.unit_id),
        homepage=_homepage(config),
        items=tuple(canvases),
    )


def build_file_collection(
    file: ArchivalUnit,
    file_manifest: IiifResource,
    item_manifests: Sequence[IiifResource],
    config: BuildConfig,
) -> IiifResource:
    """Groups the file manifest (first) with the item manifests, in order."""
    refs = (file_manifest.ref(),) + tuple(m.ref() for m in item_manifests)
    return IiifResource(
        id=mint_uri(config, COLLECTION, file.unit_id),
        kind=COLLECTION,
        label=lang_map(config.default_language, file.title),
        metadata=file_manifest.metadata,
        see_also=_ead_see_also(config, file.unit_id),
        homepage=_homepage(config),
        items=refs,
    )


def build_unit_collection(
    unit: ArchivalUnit,
    child_resources: Sequence[IiifResource],
    config: BuildConfig,
) -> IiifResource:
    """Collection for a series/subseries, referencing the children in order."""
    return IiifResource(
        id=mint_uri(config, COLLECTION, unit.unit_id),
        kind=COLLECTION,
        label=lang_map(config.default_language, unit.title),
        metadata=metadata_pairs(unit, config.default_language),
        see_also=_ead_see_also(config, unit.unit_id),
        homepage=_homepage(config),
        items=tuple(child.ref() for child in child_resources),
    )


def build_fonds_collection(
    fonds: ArchivalUnit,
    series_collections: Sequence[IiifResource],
    config: BuildConfig,
) -> IiifResource:
    """Root collection for the whole fonds."""
    return IiifResource(
        id=mint_uri(config, COLLECTION, fonds.unit_id),
        kind=COLLECTION,
        label=lang_map(config.default_language, fonds.title),
        metadata=metadata_pairs(fonds, config.default_language),
        see_also=_ead_see_also(config, fonds.unit_id),
        homepage=_homepage(config),
        items=tuple(child.ref() for child in series_collections),
    )


# --- whole-tree build -----------------------------------------------------------


class _Registry:
    """Collects resources, enforcing slug and id uniqueness."""

    def __init__(self) -> None:
        self.by_id: dict[str, IiifResource] = {}
        self.provenance: dict[str, str] = {}
        self._slug_owner: dict[str, str] = {}

    def claim_slug(self, unit_id: str) -> None:
        slug = slugify(unit_id)
        owner = self._slug_owner.setdefault(slug, unit_id)
        if owner != unit_id:
            raise SlugCollision(
                unit_id, f"slug {slug!r} already minted for unit {owner!r}"
            )

    def add(self, resource: IiifResource, unit_id: str | None = None) -> IiifResource:
        if resource.id in self.by_id:
            raise SlugCollision(
                unit_id or "?", f"duplicate resource id {resource.id!r}"
            )
        self.by_id[resource.id] = resource
        if unit_id is not None and resource.kind in (COLLECTION, MANIFEST):
            self.provenance[resource.id] = unit_id
        for child in resource.items:
            if isinstance(child, IiifResource):
                self.add(child)
        return resource


def _is_file_like(unit: ArchivalUnit) -> bool:
    """Files, plus any broader unit holding items directly (no file stratum)."""
    return unit.level is ArchivalLevel.FILE or any(
        child.level is ArchivalLevel.ITEM for child in unit.children
    )


def build_all(
    tree: ArchivalUnit,
    inventory: Mapping[str, Sequence[MediaAsset]] | None,
    config: BuildConfig,
) -> ResourceSet:
    """Construct the complete resource set for a valid tree.

    ``inventory`` is attached first when given (pass None for a tree that
    already carries its media). Items without media are skipped with a
    warning in lenient mode unless a placeholder image is configured.
    """
    warnings: list[str] = []
    if inventory is not None:
        tree = attach_media(tree, inventory, on_warning=warnings.append)
    violations = validate_tree(tree)
    if violations:
        raise ValueError(
            "tree fails validation: "
            + "; ".join(f"{v.unit_id}: {v.rule}" for v in violations)
        )

    registry = _Registry()
    for unit in tree.walk():
        registry.claim_slug(unit.unit_id)

    root = _build_unit(tree, config, registry, warnings)
    return ResourceSet(
        root=root,
        by_id=registry.by_id,
        provenance=registry.provenance,
        base_uri=config.base_uri,
        source_tree=tree,
        warnings=tuple(warnings),
    )


def _build_unit(
    unit: ArchivalUnit,
    config: BuildConfig,
    registry: _Registry,
    warnings: list[str],
) -> IiifResource:
    """Build the resource subtree for one unit; returns the resource a
    parent collection should reference."""
    if unit.level is ArchivalLevel.ITEM:
        raise ValueError("items are built by their parent (file-like) unit")

    if _is_file_like(unit):
        return _build_file_like(unit, config, registry, warnings)

    child_resources = [
        _build_unit(child, config, registry, warnings) for child in unit.children
    ]
    if unit.level is ArchivalLevel.FONDS:
        collection = build_fonds_collection(unit, child_resources, config)
        if not unit.children:
            warnings.append(f"fonds {unit.unit_id!r} has no series")
    else:
        collection = build_unit_collection(unit, child_resources, config)
    return registry.add(collection, unit.unit_id)


def _build_file_like(
    unit: ArchivalUnit,
    config: BuildConfig,
    registry: _Registry,
    warnings: list[str],
) -> IiifResource:
    # Child order drives both the canvas sequence and the collection refs.
    item_manifests: list[IiifResource] = []
    child_refs: list[IiifResource] = []
    for child in unit.children:
        if child.level is ArchivalLevel.ITEM:
            if (
                not child.media
                and not config.strict_media
                and config.placeholder_image is None
            ):
                warnings.append(
                    f"item {child.unit_id!r} has no media and no placeholder is "
                    "configured; skipped"
                )
                continue
            manifest = registry.add(build_item_manifest(child, config), child.unit_id)
            item_manifests.append(manifest)
            child_refs.append(manifest)
        else:
            child_refs.append(_build_unit(child, config, registry, warnings))

    file_manifest = registry.add(
        build_file_manifest(unit, item_manifests, config), unit.unit_id
    )
    if child_refs == item_manifests:
        collection = build_file_collection(unit, file_manifest, item_manifests, config)
    else:
        # Mixed children (items alongside deeper units): keep child order,
        # own manifest still listed first.
        collection = IiifResource(
            id=mint_uri(config, COLLECTION, unit.unit_id),
            kind=COLLECTION,
            label=lang_map(config.default_language, unit.title),
            metadata=file_manifest.metadata,
            see_also=_ead_see_also(config, unit.unit_id),
            homepage=_homepage(config),
            items=(file_manifest.ref(),) + tuple(r.ref() for r in child_refs),
        )
    return registry.add(collection, unit.unit_id)
