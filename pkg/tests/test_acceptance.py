"""Acceptance suite: one test per exit criterion, reported pass/fail in the
terminal summary. Everything runs offline; remote behavior is exercised
against recorded response fixtures."""

from __future__ import annotations

import hashlib
import json
import time
import urllib.request
from pathlib import Path

import pytest
from hypothesis import given, settings

from ead2iiif.build import (
    COLLECTION,
    MANIFEST,
    BuildConfig,
    ResourceRef,
    build_all,
)
from ead2iiif.cli import EXIT_OK, main
from ead2iiif.ead import EadDocument, emit_ead, make_control_header, parse_ead
from ead2iiif.enrichment import ViafClient, enrich_tree, parse_term_list
from ead2iiif.exceptions import ResolverUnavailable
from ead2iiif.model import ArchivalLevel, MediaKind, TermCategory, find_unit
from ead2iiif.serialize import Severity, validate_set, write_site
from ead2iiif.server import ServerConfig, serve

from .conftest import BASE_URI
from .strategies import archival_trees

GOLDEN = Path(__file__).parent / "data" / "golden"


def _flat_pairs(resource):
    return [
        (pair.label["it"][0], next(iter(pair.value.values()))[0])
        for pair in resource.metadata
    ]


def test_fig5_fidelity(fixture_document, fixture_inventory, build_config):
    """Fig. 5 fidelity: item metadata pairs exact, build under 5 s"""
    from ead2iiif.model import attach_media

    started = time.monotonic()
    tree = attach_media(fixture_document.root, fixture_inventory)
    result = build_all(tree, None, build_config)
    elapsed = time.monotonic() - started
    assert elapsed < 5.0, f"build took {elapsed:.2f}s"

    assert fixture_document.root.title == "PCI – Unitefilm"
    manifest = result.by_id[f"{BASE_URI}/manifest/il8600011581.json"]
    pairs = _flat_pairs(manifest)
    assert ("data", "1968") in pairs
    assert ("id", "IL8600011581") in pairs
    assert ("livello", "documento") in pairs
    assert ("regia", "Perelli, Luigi (regista)") in pairs


def test_controlaccess_fidelity(fixture_tree, snapshot_routes, sample_dir):
    """controlAccess fidelity: six snapshot-normalized entries, golden EAD byte-exact"""
    term_list = parse_term_list(
        (sample_dir / "termlists" / "il8600011581.json").read_text(encoding="utf-8")
    )
    enriched = enrich_tree(fixture_tree, [term_list], snapshot_routes)
    item = find_unit(enriched, "IL8600011581")

    expected = [
        (TermCategory.SUBJECT, "Emigrazione", "nuovo soggettario", None),
        (TermCategory.SUBJECT, "Immigrazione", "nuovo soggettario", None),
        (TermCategory.SUBJECT, "Storia contemporanea", "nuovo soggettario", None),
        (TermCategory.PLACE, "Italia", "viaf", "http://viaf.org/viaf/152361066"),
        (TermCategory.PLACE, "Svizzera", "viaf", "http://viaf.org/viaf/159363991"),
        (
            TermCategory.CORPORATE_BODY,
            "Partito Comunista Italiano",
            "viaf",
            "http://viaf.org/viaf/159457224",
        ),
    ]
    actual = [(t.category, t.part, t.source, t.identifier) for t in item.access_terms]
    assert actual == expected

    export = EadDocument(control_header=make_control_header(item), root=item)
    golden = (GOLDEN / "il8600011581-enriched.xml").read_text(encoding="utf-8")
    assert emit_ead(export) == golden


def test_five_element_structure_fixture(fixture_set):
    """Five-element structure: fixture yields exactly 4 collections, 3 manifests"""
    kinds = [r.kind for r in fixture_set.by_id.values()]
    assert kinds.count(COLLECTION) == 4
    assert kinds.count(MANIFEST) == 3


@settings(max_examples=200, deadline=None)
@given(tree=archival_trees())
def test_five_element_structure_generated(tree):
    """Five-element structure: resource counts obey the mapping on 200 generated trees"""
    result = build_all(tree, None, BuildConfig(base_uri=BASE_URI))
    units = list(tree.walk())
    n_broad = sum(
        1
        for u in units
        if u.level in (ArchivalLevel.FONDS, ArchivalLevel.SERIES, ArchivalLevel.SUBSERIES)
    )
    n_files = sum(1 for u in units if u.level is ArchivalLevel.FILE)
    n_media_items = sum(1 for u in units if u.level is ArchivalLevel.ITEM and u.media)
    kinds = [r.kind for r in result.by_id.values()]
    assert kinds.count(COLLECTION) == n_broad + n_files
    assert kinds.count(MANIFEST) == n_files + n_media_items


@settings(max_examples=200, deadline=None)
@given(tree=archival_trees())
def test_archival_bond_preservation(tree):
    """Archival bond: every tree edge is a reference edge, order kept, no dangling refs"""
    config = BuildConfig(base_uri=BASE_URI)
    result = build_all(tree, None, config)
    collection_of = {
        unit_id: result.by_id[rid]
        for rid, unit_id in result.provenance.items()
        if result.by_id[rid].kind == COLLECTION
    }
    manifest_of = {
        unit_id: result.by_id[rid]
        for rid, unit_id in result.provenance.items()
        if result.by_id[rid].kind == MANIFEST
    }
    for unit in tree.walk():
        if unit.level is ArchivalLevel.ITEM:
            continue
        refs = [ref.id for ref in collection_of[unit.unit_id].items]
        expected = []
        if unit.unit_id in manifest_of:
            expected.append(manifest_of[unit.unit_id].id)
        for child in unit.children:
            target = manifest_of if child.level is ArchivalLevel.ITEM else collection_of
            expected.append(target[child.unit_id].id)
        assert refs == expected
    for resource in result.by_id.values():
        for child in resource.items:
            if isinstance(child, ResourceRef):
                assert child.id in result.by_id
    for unit in tree.walk():
        if unit.level is ArchivalLevel.FILE:
            assert (
                collection_of[unit.unit_id].items[0].id == manifest_of[unit.unit_id].id
            )


def test_mixed_media_support(fixture_set):
    """Mixed media: video canvas duration 1920, image canvas extents, 0 validator errors"""
    video_canvas = fixture_set.by_id[f"{BASE_URI}/manifest/il8600011581/canvas/0"]
    assert video_canvas.duration == 1920.0
    assert video_canvas.content.kind is MediaKind.VIDEO

    image_canvas = fixture_set.by_id[f"{BASE_URI}/manifest/il8600011582/canvas/0"]
    assert (image_canvas.width, image_canvas.height) == (1024, 768)
    assert image_canvas.content.kind is MediaKind.IMAGE

    issues = validate_set(fixture_set)
    assert [i for i in issues if i.severity is Severity.ERROR] == []


def test_see_also_semantics(fixture_tree, tmp_path):
    """seeAlso: every collection/manifest links text/xml EAD that dereferences to the same unit"""
    site_dir = tmp_path / "site"
    (site_dir / "collection").mkdir(parents=True)
    (site_dir / "manifest").mkdir()
    with serve(ServerConfig(root_dir=site_dir, port=0)) as handle:
        config = BuildConfig(base_uri=handle.base_url)
        result = build_all(fixture_tree, None, config)
        write_site(result, site_dir)

        for resource in result.by_id.values():
            if resource.kind not in (COLLECTION, MANIFEST):
                continue
            entries = [e for e in resource.see_also if e.format == "text/xml"]
            assert entries, f"{resource.id} lacks a text/xml seeAlso"
            with urllib.request.urlopen(entries[0].id, timeout=5) as response:
                assert response.status == 200
                body = response.read().decode("utf-8")
            exported = parse_ead(body)
            assert exported.root.unit_id == result.provenance[resource.id]


@settings(max_examples=200, deadline=None)
@given(tree=archival_trees(with_media=False, with_terms=True))
def test_round_trip_identity(tree):
    """Round-trip: parse_ead after emit_ead is the identity on 200 generated trees"""
    doc = EadDocument(control_header="<control><recordid>r</recordid></control>", root=tree)
    reparsed = parse_ead(emit_ead(doc))
    assert reparsed.root == tree
    assert reparsed.control_header == doc.control_header


def test_build_determinism_and_dereferenceability(sample_dir, tmp_path):
    """Determinism: two builds hash-identical; every minted URI GETs 200 with CORS, <10 s"""
    import shutil

    project = tmp_path / "project"
    shutil.copytree(sample_dir, project, ignore=shutil.ignore_patterns("site"))

    def run_and_hash() -> dict[str, str]:
        assert main(["build", "--project", str(project / "project.json")]) == EXIT_OK
        site = project / "site"
        return {
            str(p.relative_to(site)): hashlib.sha256(p.read_bytes()).hexdigest()
            for p in site.rglob("*")
            if p.is_file()
        }

    first = run_and_hash()
    second = run_and_hash()
    assert first == second

    started = time.monotonic()
    site_dir = tmp_path / "served"
    (site_dir / "collection").mkdir(parents=True)
    (site_dir / "manifest").mkdir()
    with serve(ServerConfig(root_dir=site_dir, port=0)) as handle:
        doc = parse_ead((sample_dir / "fondo-unitefilm.xml").read_text(encoding="utf-8"))
        from ead2iiif.ead import parse_media_inventory
        from ead2iiif.model import attach_media

        inventory = parse_media_inventory((sample_dir / "inventory.csv").read_text(encoding="utf-8"))
        tree = attach_media(doc.root, inventory)
        result = build_all(tree, None, BuildConfig(base_uri=handle.base_url))
        write_site(result, site_dir)

        minted = [
            r.id for r in result.by_id.values() if r.kind in (COLLECTION, MANIFEST)
        ] + [e.id for r in result.by_id.values() for e in r.see_also]
        assert minted
        for uri in sorted(set(minted)):
            with urllib.request.urlopen(uri, timeout=5) as response:
                assert response.status == 200
                assert response.headers["Access-Control-Allow-Origin"] == "*"
    elapsed = time.monotonic() - started
    assert elapsed < 10.0, f"end-to-end dereference took {elapsed:.2f}s"


def test_viaf_client_contract(viaf_responses):
    """VIAF contract: recorded fixtures resolve Italia; timeout and 503 fail cleanly"""

    def recorded(url, params, timeout):
        payload = viaf_responses.get(params["query"].casefold(), {"result": None})
        return 200, json.dumps(payload).encode("utf-8")

    client = ViafClient(http_get=recorded)
    record = client.lookup("Italia", TermCategory.PLACE)
    assert record is not None
    assert record.identifier == "http://viaf.org/viaf/152361066"

    with pytest.raises(ResolverUnavailable):
        ViafClient(http_get=lambda u, p, t: (503, b"")).lookup("Italia", TermCategory.PLACE)

    def timing_out(url, params, timeout):
        raise TimeoutError("deadline exceeded")

    with pytest.raises(ResolverUnavailable):
        ViafClient(http_get=timing_out).lookup("Italia", TermCategory.PLACE)


def test_golden_site_byte_exact(fixture_set, tmp_path):
    """Golden export: the exported fixture site matches the frozen files byte for byte"""
    written = write_site(fixture_set, tmp_path)
    golden_site = GOLDEN / "site"
    golden_files = sorted(
        str(p.relative_to(golden_site)) for p in golden_site.rglob("*") if p.is_file()
    )
    assert written == golden_files
    for relative in written:
        assert (tmp_path / relative).read_bytes() == (golden_site / relative).read_bytes(), relative
