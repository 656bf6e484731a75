"""Term normalization against authority files and controlaccess merging.

Extracted terms arrive as interchange documents (see parse_term_list),
get normalized through per-category resolver routes (subjects to the
subject thesaurus, names and places to the name authority), and are merged
into a unit's access terms without disturbing what is already there.
"""

from __future__ import annotations

import csv
import enum
import hashlib
import io
import json
import logging
import threading
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence

import requests

from .exceptions import ResolverUnavailable, SchemaViolation
from .model import AccessTerm, ArchivalUnit, TermCategory, map_units

logger = logging.getLogger(__name__)

VIAF_AUTOSUGGEST_URL = "https://viaf.org/viaf/AutoSuggest"

NUOVO_SOGGETTARIO = "nuovo soggettario"
VIAF = "viaf"

#: Which resolver (by source name) serves each category, consulted in order.
DEFAULT_ROUTING: Mapping[TermCategory, tuple[str, ...]] = {
    TermCategory.SUBJECT: (NUOVO_SOGGETTARIO,),
    TermCategory.PLACE: (VIAF,),
    TermCategory.PERSON: (VIAF,),
    TermCategory.CORPORATE_BODY: (VIAF,),
}


class TermOrigin(enum.Enum):
    TEXT_NLP = "text_nlp"
    OBJECT_DETECTION = "object_detection"
    TOPIC_MODEL = "topic_model"
    MANUAL = "manual"


#: Terms below their origin's floor are dropped during normalization.
#: Detection labels default to 0.5; everything else passes unfiltered.
DEFAULT_CONFIDENCE_FLOORS: Mapping[TermOrigin, float] = {
    TermOrigin.OBJECT_DETECTION: 0.5,
}


@dataclass(frozen=True)
class ExtractedTerm:
    surface: str
    category: TermCategory
    confidence: float | None = None
    origin: TermOrigin = TermOrigin.MANUAL


@dataclass(frozen=True)
class TermList:
    """Terms proposed for one unit, deduplicated on (surface, category)."""

    unit_id: str
    terms: tuple[ExtractedTerm, ...]


@dataclass(frozen=True)
class AuthorityRecord:
    """A resolver hit: the canonical label and, when the thesaurus has one,
    a dereferenceable identifier."""

    canonical_label: str
    source: str
    identifier: str | None = None


# --- term-list interchange ---------------------------------------------------


def parse_term_list(text: str) -> TermList:
    """Read one interchange document: {unit_id, terms:[{surface, category, ...}]}.

    Duplicate (surface, category) pairs collapse to one term keeping the
    highest confidence; surfaces are whitespace-trimmed and must be non-empty.
    """
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaViolation(f"term list is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise SchemaViolation("term list root must be an object")

    unit_id = payload.get("unit_id")
    if not isinstance(unit_id, str) or not unit_id.strip():
        raise SchemaViolation("term list needs a non-empty string unit_id")
    raw_terms = payload.get("terms")
    if not isinstance(raw_terms, list):
        raise SchemaViolation("terms must be a list")

    collected: dict[tuple[str, TermCategory], ExtractedTerm] = {}
    for index, entry in enumerate(raw_terms):
        term = _parse_term_entry(entry, index)
        key = (term.surface, term.category)
        existing = collected.get(key)
        if existing is None or _confidence(term) > _confidence(existing):
            collected[key] = term  # re-insertion keeps the first occurrence's slot
    return TermList(unit_id=unit_id.strip(), terms=tuple(collected.values()))


def _confidence(term: ExtractedTerm) -> float:
    return 1.0 if term.confidence is None else term.confidence


def _parse_term_entry(entry: object, index: int) -> ExtractedTerm:
    where = f"terms[{index}]"
    if not isinstance(entry, dict):
        raise SchemaViolation(f"{where} must be an object")
    surface = entry.get("surface")
    if not isinstance(surface, str) or not surface.strip():
        raise SchemaViolation(f"{where}.surface must be a non-empty string")
    try:
        category = TermCategory(entry.get("category"))
    except ValueError:
        raise SchemaViolation(
            f"{where}.category must be subject|place|person|corporate, "
            f"got {entry.get('category')!r}"
        ) from None
    confidence = entry.get("confidence")
    if confidence is not None:
        if not isinstance(confidence, (int, float)) or isinstance(confidence, bool):
            raise SchemaViolation(f"{where}.confidence must be a number")
        confidence = float(confidence)
        if not 0.0 <= confidence <= 1.0:
            raise SchemaViolation(f"{where}.confidence must be in [0, 1]")
    try:
        origin = TermOrigin(entry.get("origin", "manual"))
    except ValueError:
        raise SchemaViolation(
            f"{where}.origin must be text_nlp|object_detection|topic_model|manual, "
            f"got {entry.get('origin')!r}"
        ) from None
    return ExtractedTerm(
        surface=surface.strip(),
        category=category,
        confidence=confidence,
        origin=origin,
    )


# --- resolvers ---------------------------------------------------------------


class SnapshotResolver:
    """Offline resolver over a frozen (surface, category) table.

    The table file is CSV with columns surface, category, canonical_label,
    identifier, source; an empty identifier cell means the thesaurus entry
    has no URI (typical for subject headings). Matching is exact after
    case-folding.
    """

    def __init__(
        self,
        records: Mapping[tuple[str, TermCategory], AuthorityRecord],
        source_name: str = "snapshot",
    ):
        self._records = dict(records)
        self.source_name = source_name

    @classmethod
    def from_csv(cls, text: str, source: str | None = None) -> "SnapshotResolver":
        """Load a snapshot table, optionally keeping only rows for ``source``."""
        reader = csv.DictReader(io.StringIO(text))
        records: dict[tuple[str, TermCategory], AuthorityRecord] = {}
        for row_number, row in enumerate(reader, start=2):
            row_source = (row.get("source") or "").strip()
            if source is not None and row_source != source:
                continue
            try:
                category = TermCategory((row.get("category") or "").strip())
            except ValueError:
                raise SchemaViolation(
                    f"category must be subject|place|person|corporate, "
                    f"got {row.get('category')!r}",
                    row=row_number,
                ) from None
            surface = (row.get("surface") or "").strip()
            label = (row.get("canonical_label") or "").strip()
            if not surface or not label or not row_source:
                raise SchemaViolation(
                    "surface, canonical_label and source are required", row=row_number
                )
            records[(surface.casefold(), category)] = AuthorityRecord(
                canonical_label=label,
                source=row_source,
                identifier=(row.get("identifier") or "").strip() or None,
            )
        return cls(records, source_name=source if source is not None else "snapshot")

    @classmethod
    def from_file(cls, path: str | Path, source: str | None = None) -> "SnapshotResolver":
        return cls.from_csv(Path(path).read_text(encoding="utf-8"), source=source)

    def lookup(self, surface: str, category: TermCategory) -> AuthorityRecord | None:
        return self._records.get((surface.strip().casefold(), category))


_VIAF_NAMETYPE = {
    TermCategory.PLACE: "geographic",
    TermCategory.PERSON: "personal",
    TermCategory.CORPORATE_BODY: "corporate",
}


def _requests_get(url: str, params: Mapping[str, str], timeout: float) -> tuple[int, bytes]:
    response = requests.get(url, params=params, timeout=timeout)
    return response.status_code, response.content

class ViafClient:
    """Remote resolver against the VIAF auto-suggest endpoint.

    Picks the top-ranked suggestion whose name-type matches the queried
    category; subjects have no VIAF name-type and always miss. Responses
    are cached on disk when ``cache_dir`` is given, keyed by (endpoint,
    surface, category), so repeated runs stay deterministic and polite.
    """

    source_name = VIAF

    def __init__(
        self,
        base_url: str = VIAF_AUTOSUGGEST_URL,
        *,
        timeout: float = 10.0,
        cache_dir: str | Path | None = None,
        max_in_flight: int = 4,
        http_get: Callable[[str, Mapping[str, str], float], tuple[int, bytes]] = _requests_get,
    ):
        self.base_url = base_url
        self.timeout = timeout
        self.cache_dir = Path(cache_dir) if cache_dir is not None else None
        self._http_get = http_get
        self._gate = threading.Semaphore(max_in_flight)

    def lookup(self, surface: str, category: TermCategory) -> AuthorityRecord | None:
        surface = surface.strip()
        if not surface:
            return None
        nametype = _VIAF_NAMETYPE.get(category)
        if nametype is None:
            return None
        payload = self._fetch(surface, category)
        for entry in payload.get("result") or []:
            if entry.get("nametype") == nametype and entry.get("viafid"):
                return AuthorityRecord(
                    canonical_label=entry.get("term") or surface,
                    source=VIAF,
                    identifier=f"http://viaf.org/viaf/{entry['viafid']}",
                )
        return None

    def _fetch(self, surface: str, category: TermCategory) -> dict:
        cache_path = self._cache_path(surface, category)
        if cache_path is not None and cache_path.exists():
            return json.loads(cache_path.read_text(encoding="utf-8"))

        with self._gate:
            try:
                status, body = self._http_get(
                    self.base_url, {"query": surface}, self.timeout
                )
            except (requests.RequestException, OSError) as exc:
                raise ResolverUnavailable(f"VIAF request failed: {exc}") from exc
        if not 200 <= status < 300:
            raise ResolverUnavailable(f"VIAF returned HTTP {status}")
        try:
            payload = json.loads(body.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise ResolverUnavailable(f"VIAF response unreadable: {exc}") from exc
        if not isinstance(payload, dict):
            raise ResolverUnavailable("VIAF response is not a JSON object")

        if cache_path is not None:
            cache_path.parent.mkdir(parents=True, exist_ok=True)
            cache_path.write_text(
                json.dumps(payload, ensure_ascii=False), encoding="utf-8"
            )
        return payload

    def _cache_path(self, surface: str, category: TermCategory) -> Path | None:
        if self.cache_dir is None:
            return None
        key = f"{self.base_url}|{surface.casefold()}|{category.value}"
        digest = hashlib.sha256(key.encode("utf-8")).hexdigest()[:24]
        return self.cache_dir / f"viaf-{digest}.json"


# --- normalization and merging ----------------------------------------------


def build_routes(
    resolvers: Sequence,
    table: Mapping[TermCategory, tuple[str, ...]] = DEFAULT_ROUTING,
) -> dict[TermCategory, tuple]:
    """Assemble category routes by matching resolver source names to a table."""
    routes = {}
    for category, names in table.items():
        routes[category] = tuple(
            resolver
            for name in names
            for resolver in resolvers
            if resolver.source_name == name
        )
    return routes


def normalize_terms(
    term_list: TermList,
    routes: Mapping[TermCategory, Sequence],
    *,
    floors: Mapping[TermOrigin, float] = DEFAULT_CONFIDENCE_FLOORS,
    lenient: bool = False,
) -> list[AccessTerm]:
    """Turn extracted terms into access terms via the category routes.

    Resolvers are consulted in route order, first hit wins; a miss keeps the
    surface form with no source or identifier. Terms whose confidence falls
    below their origin's floor are dropped. With ``lenient`` a resolver
    outage degrades to a miss (logged) instead of failing the run.
    """
    for term in term_list.terms:
        if not routes.get(term.category):
            raise ValueError(f"no resolver route for category {term.category.value!r}")

    access_terms: list[AccessTerm] = []
    for term in term_list.terms:
        floor = floors.get(term.origin, 0.0)
        if term.confidence is not None and term.confidence < floor:
            continue
        record = None
        for resolver in routes[term.category]:
            try:
                record = resolver.lookup(term.surface, term.category)
            except ResolverUnavailable:
                if not lenient:
                    raise
                logger.warning(
                    "resolver %r unavailable for %r; treating as a miss",
                    getattr(resolver, "source_name", "?"),
                    term.surface,
                )
                continue
            if record is not None:
                break
        if record is None:
            access_terms.append(AccessTerm(category=term.category, part=term.surface))
        else:
            access_terms.append(
                AccessTerm(
                    category=term.category,
                    part=term.surface,
                    source=record.source,
                    identifier=record.identifier,
                    normal_form=record.canonical_label,
                )
            )
    return access_terms


def _term_key(term: AccessTerm) -> tuple:
    if term.identifier is not None:
        return (term.category, term.identifier)
    return (term.category, term.part.casefold())


def merge_control_access(
    unit: ArchivalUnit, new_terms: Iterable[AccessTerm]
) -> ArchivalUnit:
    """Append terms the unit does not already hold.

    A term is "already held" when its (category, identifier) pair exists, or,
    for identifier-less terms, its (category, case-folded surface). Existing
    terms are never modified or reordered, so merging is idempotent.
    """
    seen = {_term_key(term) for term in unit.access_terms}
    appended: list[AccessTerm] = []
    for term in new_terms:
        key = _term_key(term)
        if key in seen:
            continue
        seen.add(key)
        appended.append(term)
    if not appended:
        return unit
    return replace(unit, access_terms=unit.access_terms + tuple(appended))


def enrich_tree(
    tree: ArchivalUnit,
    term_lists: Iterable[TermList],
    routes: Mapping[TermCategory, Sequence],
    *,
    floors: Mapping[TermOrigin, float] = DEFAULT_CONFIDENCE_FLOORS,
    lenient: bool = False,
    on_warning: Callable[[str], None] | None = None,
) -> ArchivalUnit:
    """Normalize every term list and merge it into its unit.

    Term lists whose unit_id matches nothing in the tree are reported as
    warnings and skipped.
    """
    warn = on_warning if on_warning is not None else logger.warning
    normalized: dict[str, list[AccessTerm]] = {}
    unit_ids = {unit.unit_id for unit in tree.walk()}
    for term_list in term_lists:
        if term_list.unit_id not in unit_ids:
            warn(f"term list for {term_list.unit_id!r} matches no unit in the tree")
            continue
        normalized[term_list.unit_id] = normalize_terms(
            term_list, routes, floors=floors, lenient=lenient
        )

    def merge(unit: ArchivalUnit) -> ArchivalUnit:
        terms = normalized.get(unit.unit_id)
        return unit if terms is None else merge_control_access(unit, terms)

    return map_units(tree, merge)
