"""Read-only HTTP service over one immutable dataset snapshot.

The snapshot is loaded once at startup; every handler only reads it, so
requests may run on as many threads as the OS cares to give us and
identical requests always produce identical bytes. Reloading data means
restarting the process.

Endpoints:
    GET  /health
    GET  /datasets
    GET  /srt/{par}/{year}/{exam}/{tier}?score=... | ?rank=...
    POST /predict
    POST /recommend
    POST /evaluate
"""

from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlparse

from .api import (
    ApiError,
    datasets_payload,
    evaluate_payload,
    health_payload,
    predict_payload,
    recommend_payload,
    render_json,
    srt_payload,
)
from .config import AppConfig
from .domain import ExamType, ScorelineError
from .ingest import DatasetSnapshot


class _Handler(BaseHTTPRequestHandler):
    server_version = "scoreline"
    protocol_version = "HTTP/1.1"

    # set by make_server
    snapshot: DatasetSnapshot = None
    config: AppConfig = None
    quiet: bool = True

    def log_message(self, fmt, *args):
        if not self.quiet:
            super().log_message(fmt, *args)

    def _send(self, status: int, payload) -> None:
        body = render_json(payload)
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def _error(self, status: int, message: str, field=None) -> None:
        payload = {"error": message}
        if field:
            payload["field"] = field
        self._send(status, payload)

    def do_OPTIONS(self):
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_GET(self):
        url = urlparse(self.path)
        parts = [p for p in url.path.split("/") if p]
        try:
            if url.path == "/health":
                self._send(200, health_payload(self.snapshot))
            elif url.path == "/datasets":
                self._send(200, datasets_payload(self.snapshot))
            elif parts[:1] == ["srt"] and len(parts) == 5:
                query = parse_qs(url.query)
                score = query.get("score", [None])[0]
                rank = query.get("rank", [None])[0]
                payload = srt_payload(
                    self.snapshot,
                    parts[1],
                    int(parts[2]),
                    ExamType.parse(parts[3]),
                    int(parts[4]),
                    score=int(score) if score is not None else None,
                    rank=int(rank) if rank is not None else None,
                )
                self._send(200, payload)
            else:
                self._error(404, f"no such endpoint: {url.path}")
        except ApiError as exc:
            self._error(exc.status, str(exc), exc.field)
        except (ValueError, ScorelineError) as exc:
            self._error(400, str(exc))
        except Exception as exc:  # invariant breach must be loud, never silent
            self._error(500, f"internal error: {exc}")

    def do_POST(self):
        url = urlparse(self.path)
        handlers = {
            "/predict": predict_payload,
            "/recommend": recommend_payload,
            "/evaluate": evaluate_payload,
        }
        handler = handlers.get(url.path)
        if handler is None:
            self._error(404, f"no such endpoint: {url.path}")
            return
        try:
            length = int(self.headers.get("Content-Length", 0))
            raw = self.rfile.read(length) if length else b""
            try:
                body = json.loads(raw.decode("utf-8")) if raw else {}
            except json.JSONDecodeError as exc:
                self._error(400, f"request body is not valid JSON: {exc}")
                return
            if not isinstance(body, dict):
                self._error(400, "request body must be a JSON object")
                return
            self._send(200, handler(self.snapshot, self.config, body))
        except ApiError as exc:
            self._error(exc.status, str(exc), exc.field)
        except (ValueError, ScorelineError) as exc:
            self._error(400, str(exc))
        except Exception as exc:
            self._error(500, f"internal error: {exc}")


def make_server(
    snapshot: DatasetSnapshot,
    config: AppConfig,
    host: str = "127.0.0.1",
    port: int | None = None,
    quiet: bool = True,
) -> ThreadingHTTPServer:
    """Build (but do not start) the threaded server; port 0 picks a free one."""
    handler = type(
        "BoundHandler",
        (_Handler,),
        {"snapshot": snapshot, "config": config, "quiet": quiet},
    )
    return ThreadingHTTPServer((host, port if port is not None else config.port), handler)


def serve(snapshot, config, host="0.0.0.0", port=None, quiet=False) -> None:
    """Run the service until interrupted."""
    server = make_server(snapshot, config, host, port, quiet)
    address = server.server_address
    print(f"serving {len(snapshot.contexts)} cohorts on http://{address[0]}:{address[1]}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()


def start_background(snapshot, config, host="127.0.0.1", port=0):
    """Start the service on a daemon thread; returns (server, base_url)."""
    server = make_server(snapshot, config, host, port)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    addr = server.server_address
    return server, f"http://{addr[0]}:{addr[1]}"
