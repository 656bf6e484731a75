from __future__ import annotations

import json
import shutil
from pathlib import Path

import pytest

from ead2iiif.cli import EXIT_INPUT, EXIT_OK, EXIT_VALIDATION, main


@pytest.fixture
def project_dir(sample_dir, tmp_path) -> Path:
    """A disposable copy of the sample project."""
    target = tmp_path / "project"
    shutil.copytree(sample_dir, target, ignore=shutil.ignore_patterns("site"))
    return target


def _run_build(project_dir: Path, *extra: str) -> int:
    return main(["build", "--project", str(project_dir / "project.json"), *extra])


class TestBuild:
    def test_fixture_project_builds(self, project_dir, capsys):
        assert _run_build(project_dir) == EXIT_OK
        out = capsys.readouterr().out
        assert "4 collections" in out
        assert "3 manifests" in out
        assert (project_dir / "site" / "collection" / "pci-unitefilm.json").is_file()
        assert (project_dir / "site" / "ead" / "pci-unitefilm.xml").is_file()

    def test_missing_unitid_exits_2(self, project_dir, capsys):
        ead_path = project_dir / "fondo-unitefilm.xml"
        text = ead_path.read_text().replace(
            '<unitid countrycode="IT" identifier="IL8600011582">IL8600011582</unitid>', ""
        )
        ead_path.write_text(text)
        assert _run_build(project_dir) == EXIT_INPUT
        assert "Visto di espatrio" in capsys.readouterr().err

    def test_strict_media_with_unmediated_item_exits_1(self, project_dir, capsys):
        inventory = project_dir / "inventory.csv"
        lines = inventory.read_text().splitlines()
        inventory.write_text("\n".join(line for line in lines if "IL8600011582" not in line) + "\n")
        assert _run_build(project_dir, "--strict-media") == EXIT_VALIDATION
        assert "IL8600011582" in capsys.readouterr().err

    def test_rebuild_is_byte_identical(self, project_dir):
        assert _run_build(project_dir) == EXIT_OK
        site = project_dir / "site"
        snapshot = {
            p.relative_to(site): p.read_bytes() for p in site.rglob("*") if p.is_file()
        }
        assert _run_build(project_dir) == EXIT_OK
        for path, body in snapshot.items():
            assert (site / path).read_bytes() == body

    def test_enrich_flag_adds_controlaccess(self, project_dir):
        assert _run_build(project_dir, "--enrich") == EXIT_OK
        export = (project_dir / "site" / "ead" / "il8600011581.xml").read_text()
        assert '<subject normal="Emigrazione" source="nuovo soggettario">' in export
        manifest = json.loads(
            (project_dir / "site" / "manifest" / "il8600011581.json").read_text()
        )
        labels = [pair["label"]["it"][0] for pair in manifest["metadata"]]
        assert "soggetti" in labels and "luoghi" in labels and "enti" in labels

    def test_flags_override_project_file(self, project_dir, capsys):
        assert _run_build(project_dir, "--base-uri", "http://iiif.example.org/pci") == EXIT_OK
        manifest = json.loads(
            (project_dir / "site" / "manifest" / "il8600011581.json").read_text()
        )
        assert manifest["id"].startswith("http://iiif.example.org/pci/")

    def test_unknown_project_key_rejected(self, project_dir, capsys):
        config_path = project_dir / "project.json"
        payload = json.loads(config_path.read_text())
        payload["ead"] = "typo.xml"
        config_path.write_text(json.dumps(payload))
        assert _run_build(project_dir) == EXIT_INPUT
        assert "unknown keys" in capsys.readouterr().err


class TestValidate:
    def test_fixture_export_passes(self, project_dir, capsys):
        _run_build(project_dir)
        assert main(["validate", str(project_dir / "site")]) == EXIT_OK
        assert "0 error(s)" in capsys.readouterr().out

    def test_hand_broken_manifest_fails(self, project_dir, capsys):
        _run_build(project_dir)
        manifest_path = project_dir / "site" / "manifest" / "il8600011581.json"
        payload = json.loads(manifest_path.read_text())
        del payload["label"]
        manifest_path.write_text(json.dumps(payload))
        assert main(["validate", str(manifest_path)]) == EXIT_VALIDATION
        assert "missing-label" in capsys.readouterr().out

    def test_empty_directory_exits_2(self, tmp_path):
        assert main(["validate", str(tmp_path)]) == EXIT_INPUT


class TestEnrichCommand:
    def test_rewrites_ead_exports_only(self, project_dir, capsys):
        code = main(["enrich", "--project", str(project_dir / "project.json")])
        assert code == EXIT_OK
        site = project_dir / "site"
        assert (site / "ead" / "il8600011581.xml").is_file()
        assert not (site / "manifest").exists()
        export = (site / "ead" / "il8600011581.xml").read_text()
        assert 'identifier="http://viaf.org/viaf/152361066"' in export


class TestServeCommand:
    def test_bad_bind_exits_2(self, project_dir, capsys):
        _run_build(project_dir)
        assert main(["serve", "--root", str(project_dir / "site"), "--bind", "nope"]) == EXIT_INPUT

    def test_missing_root_exits_2(self, tmp_path, capsys):
        assert main(["serve", "--root", str(tmp_path / "ghost"), "--bind", "127.0.0.1:0"]) == EXIT_INPUT
