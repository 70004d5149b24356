"""HTTP API over a store: portraits, recommendations, and interaction-event
logging. Serving never mutates pipeline artifacts; the event log is the only
writer and it serializes appends.

    GET  /portrait/<user_id>                          -> layout JSON (ETag)
    GET  /recommendations/<user_id>?post_id=&lambda=&top=  -> recommendation list
    POST /events                                      -> 204, appended event
"""

from __future__ import annotations

import hashlib
import json
import logging
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, unquote, urlparse

from portrait_engine import pipeline
from portrait_engine.store import EventValidationError, Store, validate_event

logger = logging.getLogger(__name__)


class EngineServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, address, store: Store, ui_dir: Path | None = None):
        super().__init__(address, EngineRequestHandler)
        self.store = store
        self.ui_dir = Path(ui_dir).resolve() if ui_dir else None


class EngineRequestHandler(BaseHTTPRequestHandler):
    server_version = "portrait-engine/0.1"
    protocol_version = "HTTP/1.1"

    # --- helpers ---------------------------------------------------------

    @property
    def store(self) -> Store:
        return self.server.store

    def _send(self, status: int, body: bytes, content_type: str, etag: str | None = None):
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        if etag:
            self.send_header("ETag", f'"{etag}"')
        self.end_headers()
        if body:
            self.wfile.write(body)

    def _send_json(self, status: int, payload, etag: str | None = None):
        body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
        self._send(status, body, "application/json; charset=utf-8", etag)

    def _send_error_json(self, status: int, message: str):
        self._send_json(status, {"error": message})

    def log_message(self, fmt, *args):
        logger.debug("%s - %s", self.address_string(), fmt % args)

    # --- routes ----------------------------------------------------------

    def do_OPTIONS(self):
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_GET(self):
        url = urlparse(self.path)
        parts = [unquote(p) for p in url.path.split("/") if p]
        try:
            if len(parts) == 2 and parts[0] == "portrait":
                return self._get_portrait(parts[1])
            if len(parts) == 2 and parts[0] == "recommendations":
                return self._get_recommendations(parts[1], parse_qs(url.query))
            if self.server.ui_dir is not None:
                return self._get_static(url.path)
            self._send_error_json(404, "not found")
        except BrokenPipeError:
            pass
        except Exception:
            logger.exception("request failed: %s", self.path)
            self._send_error_json(500, "internal error")

    def do_POST(self):
        url = urlparse(self.path)
        if url.path != "/events":
            return self._send_error_json(404, "not found")
        try:
            length = int(self.headers.get("Content-Length", 0))
            raw = self.rfile.read(length) if length else b""
            event = json.loads(raw.decode("utf-8"))
            validated = validate_event(event)
        except EventValidationError as exc:
            return self._send_error_json(422, str(exc))
        except (ValueError, UnicodeDecodeError) as exc:
            return self._send_error_json(400, f"malformed event: {exc}")
        self.store.append_event(validated)
        self._send(204, b"", "application/json")

    # --- endpoint bodies ---------------------------------------------------

    def _known_user(self, user_id: str) -> bool:
        try:
            return user_id in self.store.read_users()
        except FileNotFoundError:
            return False

    def _get_portrait(self, user_id: str):
        if not self._known_user(user_id):
            return self._send_error_json(404, f"unknown user {user_id!r}")
        path = self.store.layout_path(user_id)
        if not path.exists():
            return self._send_error_json(409, f"portrait pipeline incomplete for {user_id!r}")
        body = path.read_bytes()
        etag = hashlib.sha256(body).hexdigest()
        self._send(200, body, "application/json; charset=utf-8", etag)

    def _get_recommendations(self, user_id: str, query: dict):
        if not self._known_user(user_id):
            return self._send_error_json(404, f"unknown user {user_id!r}")
        lam = None
        if "lambda" in query:
            try:
                lam = float(query["lambda"][0])
            except ValueError:
                return self._send_error_json(400, "lambda must be a number")
            if not 0.0 <= lam <= 1.0:
                return self._send_error_json(400, "lambda must be in [0, 1]")
        top = None
        if "top" in query:
            try:
                top = int(query["top"][0])
            except ValueError:
                return self._send_error_json(400, "top must be an integer")
            if top < 1:
                return self._send_error_json(400, "top must be >= 1")
        post_id = query.get("post_id", [None])[0]
        try:
            recs = pipeline.recommend_for_user(
                self.store, user_id, lam=lam, top=top, post_id=post_id
            )
        except KeyError as exc:
            return self._send_error_json(404, str(exc))
        except FileNotFoundError:
            return self._send_error_json(409, f"recommendation pipeline incomplete for {user_id!r}")
        body = json.dumps(recs, ensure_ascii=False).encode("utf-8")
        etag = hashlib.sha256(body).hexdigest()
        self._send(200, body, "application/json; charset=utf-8", etag)

    def _get_static(self, path: str):
        ui_dir = self.server.ui_dir
        rel = path.lstrip("/") or "index.html"
        target = (ui_dir / rel).resolve()
        if not str(target).startswith(str(ui_dir)) or not target.is_file():
            return self._send_error_json(404, "not found")
        content_types = {
            ".html": "text/html; charset=utf-8",
            ".js": "text/javascript; charset=utf-8",
            ".css": "text/css; charset=utf-8",
            ".json": "application/json; charset=utf-8",
            ".svg": "image/svg+xml",
        }
        ctype = content_types.get(target.suffix, "application/octet-stream")
        self._send(200, target.read_bytes(), ctype)


def create_server(store: Store, port: int = 8080, host: str = "127.0.0.1",
                  ui_dir: str | Path | None = None) -> EngineServer:
    return EngineServer((host, port), store, ui_dir)


def serve_in_thread(server: EngineServer) -> threading.Thread:
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return thread
