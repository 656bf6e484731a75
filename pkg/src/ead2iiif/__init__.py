"""ead2iiif: EAD3 finding aids to IIIF Presentation 3 resource graphs.

The pipeline parses a finding aid and a media inventory, optionally
normalizes extracted terms against authority files, maps the archival tree
onto collections/manifests/canvases bottom-up, serializes canonical
JSON-LD, and publishes the result over HTTP.
"""

from .build import (
    BuildConfig,
    IiifResource,
    ResourceRef,
    ResourceSet,
    build_all,
    metadata_pairs,
    mint_uri,
)
from .ead import (
    EadDocument,
    emit_ead,
    format_duration,
    parse_duration,
    parse_ead,
    parse_media_inventory,
)
from .enrichment import (
    AuthorityRecord,
    SnapshotResolver,
    TermList,
    ViafClient,
    build_routes,
    enrich_tree,
    merge_control_access,
    normalize_terms,
    parse_term_list,
)
from .model import (
    AccessTerm,
    ArchivalLevel,
    ArchivalUnit,
    Extent,
    MediaAsset,
    MediaKind,
    TermCategory,
    attach_media,
    find_unit,
    validate_tree,
)
from .serialize import parse_resource, serialize, validate_resource, validate_set, write_site
from .server import ServerConfig, content_type_for, serve

__version__ = "0.1.0"

__all__ = [
    "AccessTerm",
    "ArchivalLevel",
    "ArchivalUnit",
    "AuthorityRecord",
    "BuildConfig",
    "EadDocument",
    "Extent",
    "IiifResource",
    "MediaAsset",
    "MediaKind",
    "ResourceRef",
    "ResourceSet",
    "ServerConfig",
    "SnapshotResolver",
    "TermCategory",
    "TermList",
    "ViafClient",
    "attach_media",
    "build_all",
    "build_routes",
    "content_type_for",
    "emit_ead",
    "enrich_tree",
    "find_unit",
    "format_duration",
    "merge_control_access",
    "metadata_pairs",
    "mint_uri",
    "normalize_terms",
    "parse_duration",
    "parse_ead",
    "parse_media_inventory",
    "parse_resource",
    "parse_term_list",
    "serialize",
    "serve",
    "validate_resource",
    "validate_set",
    "validate_tree",
    "write_site",
]
