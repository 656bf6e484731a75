from __future__ import annotations

import json
from pathlib import Path

import pytest

_ACCEPTANCE_RESULTS: list[tuple[str, bool]] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call" and "test_acceptance" in item.nodeid:
        label = (item.function.__doc__ or item.name).strip().splitlines()[0]
        _ACCEPTANCE_RESULTS.append((label, report.passed))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_line("")
    terminalreporter.write_line("acceptance criteria:")
    for label, passed in _ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"  [{'PASS' if passed else 'FAIL'}] {label}")

from ead2iiif import (
    BuildConfig,
    SnapshotResolver,
    attach_media,
    build_all,
    build_routes,
    parse_ead,
    parse_media_inventory,
)
from ead2iiif.enrichment import NUOVO_SOGGETTARIO, VIAF

REPO_ROOT = Path(__file__).resolve().parent.parent
SAMPLE_DIR = REPO_ROOT / "sample"
DATA_DIR = Path(__file__).resolve().parent / "data"

BASE_URI = "http://127.0.0.1:5501"


@pytest.fixture(scope="session")
def sample_dir() -> Path:
    return SAMPLE_DIR


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def fixture_ead_text() -> str:
    return (SAMPLE_DIR / "fondo-unitefilm.xml").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def fixture_document(fixture_ead_text):
    return parse_ead(fixture_ead_text)


@pytest.fixture(scope="session")
def fixture_inventory():
    return parse_media_inventory((SAMPLE_DIR / "inventory.csv").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def fixture_tree(fixture_document, fixture_inventory):
    return attach_media(fixture_document.root, fixture_inventory)


@pytest.fixture(scope="session")
def build_config() -> BuildConfig:
    return BuildConfig(base_uri=BASE_URI)


@pytest.fixture(scope="session")
def fixture_set(fixture_tree, build_config):
    return build_all(fixture_tree, None, build_config)


@pytest.fixture(scope="session")
def snapshot_routes():
    text = (SAMPLE_DIR / "authority-snapshot.csv").read_text(encoding="utf-8")
    return build_routes(
        [
            SnapshotResolver.from_csv(text, source=NUOVO_SOGGETTARIO),
            SnapshotResolver.from_csv(text, source=VIAF),
        ]
    )


@pytest.fixture(scope="session")
def viaf_responses():
    """Recorded auto-suggest payloads keyed by case-folded query."""
    responses = {}
    for path in (DATA_DIR / "viaf").glob("*.json"):
        payload = json.loads(path.read_text(encoding="utf-8"))
        responses[payload["query"].casefold()] = payload
    return responses
