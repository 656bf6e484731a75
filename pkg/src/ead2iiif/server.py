"""Static HTTP publisher for an exported site.

Serves the collection/manifest/EAD tree (plus media) read-only over
GET/HEAD with CORS headers, so browser-based viewers can dereference every
minted URI. Media requests honor single byte ranges, which viewers need
for seeking in audio/video.
"""

from __future__ import annotations

import logging
import threading
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .exceptions import BindFailure, RootMissing

logger = logging.getLogger(__name__)

JSON_LD_TYPE = (
    'application/ld+json;profile="http://iiif.io/api/presentation/3/context.json"'
)

_CONTENT_TYPES = {
    ".json": JSON_LD_TYPE,
    ".xml": "application/xml",
    ".jpg": "image/jpeg",
    ".jpeg": "image/jpeg",
    ".png": "image/png",
    ".gif": "image/gif",
    ".tif": "image/tiff",
    ".tiff": "image/tiff",
    ".webp": "image/webp",
    ".mp4": "video/mp4",
    ".webm": "video/webm",
    ".mp3": "audio/mpeg",
    ".wav": "audio/wav",
    ".ogg": "audio/ogg",
    ".html": "text/html",
}


def content_type_for(path: str) -> str:
    """Media type by extension; JSON gets the Presentation 3 profile."""
    suffix = Path(path).suffix.lower()
    return _CONTENT_TYPES.get(suffix, "application/octet-stream")


@dataclass(frozen=True)
class ServerConfig:
    root_dir: Path
    host: str = "127.0.0.1"
    port: int = 5501
    cors_allow_origin: str = "*"
    media_dir: Path | None = None
    preflight: bool = False  # answer OPTIONS with 204 instead of 405


class _SiteHandler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    server_version = "ead2iiif"

    # Injected by serve() onto the handler class.
    config: ServerConfig

    def log_message(self, format: str, *args) -> None:  # noqa: A002
        logger.info("%s %s", self.address_string(), format % args)

    def _resolve(self) -> Path | None:
        raw = self.path.split("?", 1)[0].split("#", 1)[0].lstrip("/")
        if not raw or "\x00" in raw:
            return None
        candidates = [(Path(self.config.root_dir), raw)]
        if self.config.media_dir is not None and raw.startswith("media/"):
            candidates.append((Path(self.config.media_dir), raw[len("media/") :]))
        for root, relative in candidates:
            try:
                resolved = (root / relative).resolve()
                root_resolved = root.resolve()
            except OSError:
                continue
            if resolved.is_file() and root_resolved in resolved.parents:
                return resolved
        return None

    def _send_cors(self) -> None:
        self.send_header("Access-Control-Allow-Origin", self.config.cors_allow_origin)

    def _serve(self, include_body: bool) -> None:
        target = self._resolve()
        if target is None:
            self.send_response(404)
            self._send_cors()
            self.send_header("Content-Length", "0")
            self.end_headers()
            return

        data = target.read_bytes()
        range_header = self.headers.get("Range")
        status = 200
        content_range = None
        if range_header is not None:
            span = _parse_range(range_header, len(data))
            if span is None:
                self.send_response(416)
                self._send_cors()
                self.send_header("Content-Range", f"bytes */{len(data)}")
                self.send_header("Content-Length", "0")
                self.end_headers()
                return
            start, end = span
            content_range = f"bytes {start}-{end}/{len(data)}"
            data = data[start : end + 1]
            status = 206

        self.send_response(status)
        self._send_cors()
        self.send_header("Content-Type", content_type_for(str(target)))
        self.send_header("Content-Length", str(len(data)))
        self.send_header("Accept-Ranges", "bytes")
        if content_range is not None:
            self.send_header("Content-Range", content_range)
        self.end_headers()
        if include_body:
            self.wfile.write(data)

    def do_GET(self) -> None:
        self._serve(include_body=True)

    def do_HEAD(self) -> None:
        self._serve(include_body=False)

    def do_OPTIONS(self) -> None:
        if self.config.preflight:
            self.send_response(204)
            self._send_cors()
            self.send_header("Access-Control-Allow-Methods", "GET, HEAD")
            self.send_header("Access-Control-Allow-Headers", "*")
            self.send_header("Content-Length", "0")
            self.end_headers()
        else:
            self._method_not_allowed()

    def _method_not_allowed(self) -> None:
        self.send_response(405)
        self._send_cors()
        self.send_header("Allow", "GET, HEAD")
        self.send_header("Content-Length", "0")
        self.end_headers()

    do_POST = _method_not_allowed
    do_PUT = _method_not_allowed
    do_DELETE = _method_not_allowed
    do_PATCH = _method_not_allowed


def _parse_range(header: str, size: int) -> tuple[int, int] | None:
    """Single byte-range only; returns (start, end) inclusive or None."""
    if not header.startswith("bytes=") or "," in header or size == 0:
        return None
    spec = header[len("bytes=") :]
    start_text, _, end_text = spec.partition("-")
    try:
        if start_text:
            start = int(start_text)
            end = int(end_text) if end_text else size - 1
        elif end_text:  # suffix range: last N bytes
            start = max(0, size - int(end_text))
            end = size - 1
        else:
            return None
    except ValueError:
        return None
    if start > end or start >= size:
        return None
    return start, min(end, size - 1)


class SiteServer:
    """Handle for a running publisher; stop() or use as a context manager."""

    def __init__(self, httpd: ThreadingHTTPServer):
        self._httpd = httpd
        self._thread = threading.Thread(target=httpd.serve_forever, daemon=True)
        self._thread.start()

    @property
    def port(self) -> int:
        return self._httpd.server_address[1]

    @property
    def base_url(self) -> str:
        host = self._httpd.server_address[0]
        return f"http://{host}:{self.port}"

    def stop(self) -> None:
        self._httpd.shutdown()
        self._httpd.server_close()
        self._thread.join(timeout=5)

    def __enter__(self) -> "SiteServer":
        return self

    def __exit__(self, *exc_info) -> None:
        self.stop()


def serve(config: ServerConfig) -> SiteServer:
    """Start serving the exported site; returns a running handle."""
    root = Path(config.root_dir)
    if not root.is_dir() or not (root / "collection").is_dir() or not (
        root / "manifest"
    ).is_dir():
        raise RootMissing(
            f"{root} is not an exported site (collection/ and manifest/ expected)"
        )

    handler = type("BoundSiteHandler", (_SiteHandler,), {"config": config})
    try:
        httpd = ThreadingHTTPServer((config.host, config.port), handler)
    except OSError as exc:
        raise BindFailure(
            f"cannot bind {config.host}:{config.port}: {exc}"
        ) from exc
    return SiteServer(httpd)
