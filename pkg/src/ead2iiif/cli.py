"""Command-line entry point: build, validate, serve, enrich.

A project file (JSON) names the inputs; any flag overrides its value.
Paths inside the project file are resolved relative to the file itself.
Exit codes: 0 success, 1 validation errors in built/checked resources,
2 unreadable or invalid input.
"""

from __future__ import annotations

import argparse
import json
import logging
import signal
import sys
from dataclasses import dataclass
from pathlib import Path

from . import build as iiif_build
from . import ead as ead_io
from . import enrichment
from . import server as publisher
from .serialize import Severity, parse_resource, validate_resource, validate_set, write_site
from .exceptions import BuildError, Ead2IiifError, UnreadableInput
from .model import MediaAsset, MediaKind, attach_media, validate_tree

logger = logging.getLogger("ead2iiif")

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_INPUT = 2


@dataclass
class ProjectConfig:
    ead_path: Path
    inventory_path: Path
    base_uri: str
    out_dir: Path
    termlist_dir: Path | None = None
    snapshot_path: Path | None = None
    viaf_endpoint: str | None = None
    default_language: str = "it"
    strict_media: bool = False
    institution_homepage: str | None = None
    placeholder_image: MediaAsset | None = None


_PROJECT_KEYS = {
    "ead_path",
    "inventory_path",
    "base_uri",
    "out_dir",
    "termlist_dir",
    "snapshot_path",
    "viaf_endpoint",
    "default_language",
    "strict_media",
    "institution_homepage",
    "placeholder_image",
}


def load_project(path: Path | None, overrides: dict) -> ProjectConfig:
    """Merge the optional project file with CLI flag overrides (flags win)."""
    values: dict = {}
    base = Path.cwd()
    if path is not None:
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UnreadableInput(f"cannot read project file {path}: {exc}") from exc
        if not isinstance(raw, dict):
            raise UnreadableInput(f"project file {path} must hold a JSON object")
        unknown = set(raw) - _PROJECT_KEYS
        if unknown:
            raise UnreadableInput(
                f"project file {path} has unknown keys: {', '.join(sorted(unknown))}"
            )
        values.update(raw)
        base = Path(path).resolve().parent
    values.update({k: v for k, v in overrides.items() if v is not None})

    missing = [k for k in ("ead_path", "inventory_path", "base_uri", "out_dir") if not values.get(k)]
    if missing:
        raise UnreadableInput(f"missing required settings: {', '.join(missing)}")

    def path_of(key: str) -> Path | None:
        value = values.get(key)
        if value is None:
            return None
        p = Path(value)
        return p if p.is_absolute() else base / p

    placeholder = None
    if isinstance(values.get("placeholder_image"), dict):
        spec = values["placeholder_image"]
        placeholder = MediaAsset(
            asset_id=spec.get("asset_id", "placeholder"),
            kind=MediaKind.IMAGE,
            location=spec["location"],
            media_format=spec.get("format", "image/jpeg"),
            width=int(spec["width"]),
            height=int(spec["height"]),
        )

    config = ProjectConfig(
        ead_path=path_of("ead_path"),
        inventory_path=path_of("inventory_path"),
        base_uri=str(values["base_uri"]).rstrip("/"),
        out_dir=path_of("out_dir"),
        termlist_dir=path_of("termlist_dir"),
        snapshot_path=path_of("snapshot_path"),
        viaf_endpoint=values.get("viaf_endpoint"),
        default_language=values.get("default_language", "it"),
        strict_media=bool(values.get("strict_media", False)),
        institution_homepage=values.get("institution_homepage"),
        placeholder_image=placeholder,
    )
    for required in (config.ead_path, config.inventory_path):
        if not required.is_file():
            raise UnreadableInput(f"input file not found: {required}")
    return config


def _build_config(project: ProjectConfig) -> iiif_build.BuildConfig:
    return iiif_build.BuildConfig(
        base_uri=project.base_uri,
        default_language=project.default_language,
        institution_homepage=project.institution_homepage,
        strict_media=project.strict_media,
        placeholder_image=project.placeholder_image,
    )


def _load_tree(project: ProjectConfig):
    doc = ead_io.parse_ead(project.ead_path.read_text(encoding="utf-8"))
    inventory = ead_io.parse_media_inventory(
        project.inventory_path.read_text(encoding="utf-8")
    )
    return doc, inventory


def _resolvers(project: ProjectConfig) -> list:
    resolvers: list = []
    if project.snapshot_path is not None:
        if not project.snapshot_path.is_file():
            raise UnreadableInput(f"snapshot file not found: {project.snapshot_path}")
        text = project.snapshot_path.read_text(encoding="utf-8")
        resolvers.append(
            enrichment.SnapshotResolver.from_csv(text, source=enrichment.NUOVO_SOGGETTARIO)
        )
        resolvers.append(enrichment.SnapshotResolver.from_csv(text, source=enrichment.VIAF))
    if project.viaf_endpoint is not None:
        resolvers.append(enrichment.ViafClient(project.viaf_endpoint))
    return resolvers


def _term_lists(project: ProjectConfig) -> list[enrichment.TermList]:
    if project.termlist_dir is None:
        return []
    if not project.termlist_dir.is_dir():
        raise UnreadableInput(f"term-list directory not found: {project.termlist_dir}")
    term_lists = []
    for path in sorted(project.termlist_dir.glob("*.json")):
        term_lists.append(enrichment.parse_term_list(path.read_text(encoding="utf-8")))
    return term_lists


def _enriched_tree(project: ProjectConfig, tree, *, lenient: bool):
    term_lists = _term_lists(project)
    if not term_lists:
        logger.warning("enrichment requested but no term lists found")
        return tree
    routes = enrichment.build_routes(_resolvers(project))
    return enrichment.enrich_tree(tree, term_lists, routes, lenient=lenient)


def cmd_build(args: argparse.Namespace) -> int:
    project = load_project(args.project, _overrides(args))
    doc, inventory = _load_tree(project)
    tree = attach_media(doc.root, inventory, on_warning=logger.warning)
    if args.enrich:
        tree = _enriched_tree(project, tree, lenient=args.lenient)

    violations = validate_tree(tree)
    if violations:
        for violation in violations:
            logger.error("tree: %s: %s (%s)", violation.unit_id, violation.rule, violation.message)
        return EXIT_INPUT

    try:
        resource_set = iiif_build.build_all(tree, None, _build_config(project))
    except BuildError as exc:
        # The tree cannot yield a structurally valid resource graph
        # (missing media in strict mode, empty file, slug collision).
        print(str(exc), file=sys.stderr)
        return EXIT_VALIDATION
    for warning in resource_set.warnings:
        logger.warning("%s", warning)

    issues = validate_set(resource_set)
    errors = [i for i in issues if i.severity is Severity.ERROR]
    for issue in issues:
        log = logger.error if issue.severity is Severity.ERROR else logger.warning
        log("%s: %s %s", issue.resource_id, issue.rule, issue.message)
    if errors:
        print(f"validation failed: {len(errors)} error(s)", file=sys.stderr)
        return EXIT_VALIDATION

    written = write_site(resource_set, project.out_dir)
    kinds = [r.kind for r in resource_set.by_id.values()]
    print(
        f"built {kinds.count(iiif_build.COLLECTION)} collections, "
        f"{kinds.count(iiif_build.MANIFEST)} manifests, "
        f"{kinds.count(iiif_build.CANVAS)} canvases; "
        f"wrote {len(written)} files to {project.out_dir} "
        f"({len(resource_set.warnings)} warning(s), "
        f"{sum(1 for i in issues if i.severity is Severity.WARNING)} validation warning(s))"
    )
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    target = Path(args.path)
    if target.is_file():
        json_files = [target]
    elif target.is_dir():
        json_files = sorted(target.glob("collection/*.json")) + sorted(
            target.glob("manifest/*.json")
        )
        if not json_files:
            json_files = sorted(target.glob("*.json"))
    else:
        print(f"no such path: {target}", file=sys.stderr)
        return EXIT_INPUT
    if not json_files:
        print(f"no JSON-LD resources found under {target}", file=sys.stderr)
        return EXIT_INPUT

    error_count = 0
    for path in json_files:
        try:
            resource = parse_resource(path.read_text(encoding="utf-8"))
        except Ead2IiifError as exc:
            print(f"{path}: unreadable: {exc}", file=sys.stderr)
            return EXIT_INPUT
        for issue in validate_resource(resource):
            marker = "ERROR" if issue.severity is Severity.ERROR else "warning"
            print(f"{path}: {marker} {issue.rule} {issue.message}".rstrip())
            if issue.severity is Severity.ERROR:
                error_count += 1
    print(f"checked {len(json_files)} resource(s), {error_count} error(s)")
    return EXIT_OK if error_count == 0 else EXIT_VALIDATION


def cmd_serve(args: argparse.Namespace) -> int:
    host, _, port_text = args.bind.rpartition(":")
    if not host or not port_text.isdigit():
        print(f"--bind must be host:port, got {args.bind!r}", file=sys.stderr)
        return EXIT_INPUT
    config = publisher.ServerConfig(
        root_dir=Path(args.root),
        host=host,
        port=int(port_text),
        cors_allow_origin=args.cors_origin,
        media_dir=Path(args.media_dir) if args.media_dir else None,
    )
    try:
        handle = publisher.serve(config)
    except Ead2IiifError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INPUT
    print(f"serving {config.root_dir} at {handle.base_url} (Ctrl-C to stop)", file=sys.stderr)
    try:
        signal.pause()
    except (KeyboardInterrupt, AttributeError):
        pass
    finally:
        handle.stop()
    return EXIT_OK


def cmd_enrich(args: argparse.Namespace) -> int:
    project = load_project(args.project, _overrides(args))
    doc, _ = _load_tree(project)
    tree = _enriched_tree(project, doc.root, lenient=args.lenient)

    out_root = project.out_dir
    written = []
    for unit in tree.walk():
        export = ead_io.EadDocument(
            control_header=ead_io.make_control_header(unit), root=unit
        )
        relative = f"ead/{iiif_build.slugify(unit.unit_id)}.xml"
        target = out_root / relative
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(ead_io.emit_ead(export), encoding="utf-8")
        written.append(relative)
    print(f"rewrote {len(written)} EAD export(s) under {out_root}")
    return EXIT_OK


def _overrides(args: argparse.Namespace) -> dict:
    keys = (
        "ead_path",
        "inventory_path",
        "base_uri",
        "out_dir",
        "termlist_dir",
        "snapshot_path",
        "viaf_endpoint",
        "default_language",
        "institution_homepage",
    )
    overrides = {key: getattr(args, key, None) for key in keys}
    if getattr(args, "strict_media", False):
        overrides["strict_media"] = True
    return overrides


def _add_project_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--project", type=Path, help="project configuration file (JSON)")
    parser.add_argument("--ead", dest="ead_path", help="EAD3 finding aid")
    parser.add_argument("--inventory", dest="inventory_path", help="media inventory CSV")
    parser.add_argument("--base-uri", dest="base_uri", help="absolute base URI for minted ids")
    parser.add_argument("--out", dest="out_dir", help="output directory for the site")
    parser.add_argument("--lang", dest="default_language", help="default language tag")
    parser.add_argument("--termlist-dir", dest="termlist_dir", help="directory of term-list files")
    parser.add_argument("--snapshot", dest="snapshot_path", help="authority snapshot CSV")
    parser.add_argument("--viaf-endpoint", dest="viaf_endpoint", help="VIAF auto-suggest URL")
    parser.add_argument(
        "--homepage", dest="institution_homepage", help="institution catalogue page URI"
    )
    parser.add_argument(
        "--lenient", action="store_true", help="degrade resolver outages to misses"
    )


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ead2iiif",
        description="Convert EAD3 finding aids into IIIF Presentation 3 sites",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    commands = parser.add_subparsers(dest="command", required=True)

    build_cmd = commands.add_parser("build", help="run the full pipeline and export the site")
    _add_project_flags(build_cmd)
    build_cmd.add_argument(
        "--strict-media", action="store_true", help="fail on items without media"
    )
    build_cmd.add_argument(
        "--enrich", action="store_true", help="normalize and merge term lists before building"
    )
    build_cmd.set_defaults(func=cmd_build)

    validate_cmd = commands.add_parser("validate", help="check an exported site or one resource")
    validate_cmd.add_argument("path", help="site directory or JSON-LD file")
    validate_cmd.set_defaults(func=cmd_validate)

    serve_cmd = commands.add_parser("serve", help="publish an exported site over HTTP")
    serve_cmd.add_argument("--root", required=True, help="exported site directory")
    serve_cmd.add_argument("--bind", default="127.0.0.1:5501", help="host:port (default 127.0.0.1:5501)")
    serve_cmd.add_argument("--cors-origin", default="*", help="Access-Control-Allow-Origin value")
    serve_cmd.add_argument("--media-dir", help="directory served under /media/")
    serve_cmd.set_defaults(func=cmd_serve)

    enrich_cmd = commands.add_parser(
        "enrich", help="normalize+merge terms and rewrite the EAD exports only"
    )
    _add_project_flags(enrich_cmd)
    enrich_cmd.set_defaults(func=cmd_enrich)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except Ead2IiifError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
