"""HTTP status service over a run directory, plus the polling watch client.

The service is a read-only observer of ``events.jsonl``: every request
re-reads the log's complete lines (a trailing partial line from an in-flight
append is ignored) and derives its response from that prefix alone, so the
runner never waits on the network and serving cannot perturb measurements.
There are no mutation endpoints.

Endpoints (GET, JSON): /status /results /ranking /problems /adapters
/manifest. Responses carry ``snapshot_events``, the number of log lines the
response was derived from, so two fetches can be checked for having seen the
same log prefix. While the log does not exist yet, everything answers 503
with a retry hint.
"""

from __future__ import annotations

import json
import logging
import sys
import threading
import time
import urllib.error
import urllib.request
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import urlsplit

from .errors import GascError, SchemaError
from .jsonutil import canonical_dumps
from .runner import EVENTS_FILE, fold_events, read_events
from .scoring import adjudicate, rank

log = logging.getLogger(__name__)

DEFAULT_STALE_AFTER_S = 60.0


@dataclass
class _Snapshot:
    events: list
    truncated: bool
    mtime: float


class ServiceApp:
    """Route handler shared by all request threads.

    The only mutable state is a single-entry parse cache: requests arriving
    between two log appends share one parsed snapshot instead of re-reading
    the file each.
    """

    def __init__(self, run_dir, stale_after_s: float = DEFAULT_STALE_AFTER_S):
        self.run_dir = Path(run_dir)
        self.events_path = self.run_dir / EVENTS_FILE
        self.stale_after_s = stale_after_s
        self._cache_lock = threading.Lock()
        self._cache_key = None
        self._cache_value: _Snapshot | None = None

    def _snapshot(self) -> _Snapshot:
        stat = self.events_path.stat()
        key = (stat.st_size, stat.st_mtime_ns)
        with self._cache_lock:
            if key == self._cache_key and self._cache_value is not None:
                return self._cache_value
        events, truncated = read_events(self.events_path)
        snapshot = _Snapshot(events, truncated, mtime=stat.st_mtime)
        with self._cache_lock:
            self._cache_key = key
            self._cache_value = snapshot
        return snapshot

    def handle(self, path: str) -> tuple[int, dict]:
        if path.endswith("/") and len(path) > 1:
            path = path.rstrip("/")
        if not self.events_path.is_file():
            return 503, {"error": "initializing", "retry_after_s": 1.0}
        snapshot = self._snapshot()
        route = {
            "/status": self._status,
            "/results": self._results,
            "/ranking": self._ranking,
            "/problems": self._problems,
            "/adapters": self._adapters,
            "/manifest": self._manifest,
        }.get(path)
        if route is None:
            return 404, {"error": f"unknown path {path}"}
        return 200, route(snapshot)

    # -- derivations -----------------------------------------------------

    def _manifest_of(self, snap: _Snapshot) -> dict | None:
        for event in snap.events:
            if event.get("kind") == "run_started":
                return event.get("manifest")
        return None

    def _status(self, snap: _Snapshot) -> dict:
        manifest = self._manifest_of(snap)
        started: dict[tuple, float] = {}
        finished_keys = set()
        run_finished = False
        for event in snap.events:
            kind = event.get("kind")
            if kind == "job_started":
                key = (event["problem_id"], event["adapter_name"], event["repetition_index"])
                started[key] = event.get("started_at", 0.0)
            elif kind == "job_finished":
                record = event["record"]
                finished_keys.add(
                    (record["problem_id"], record["adapter_name"], record["repetition_index"])
                )
            elif kind == "run_finished":
                run_finished = True

        if manifest is None:
            state = "idle"
            total = 0
        elif run_finished:
            state = "finished"
            total = manifest.get("total_jobs", len(finished_keys))
        elif snap.truncated or (time.time() - snap.mtime) > self.stale_after_s:
            state = "incomplete"
            total = manifest.get("total_jobs", 0)
        else:
            state = "running"
            total = manifest.get("total_jobs", 0)

        now = time.time()
        in_flight = [
            {
                "problem_id": key[0],
                "adapter_name": key[1],
                "elapsed_s": round(max(0.0, now - started_at), 3),
            }
            for key, started_at in sorted(started.items())
            if key not in finished_keys
        ] if state == "running" else []

        return {
            "state": state,
            "total_jobs": total,
            "completed_jobs": len(finished_keys),
            "in_flight": in_flight,
            "run_id": (manifest or {}).get("run_id"),
            "snapshot_events": len(snap.events),
        }

    def _results(self, snap: _Snapshot) -> dict:
        try:
            results = fold_events(snap.events, snap.truncated)
        except GascError:
            results = {"manifest": None, "records": [], "incomplete": True}
        results["snapshot_events"] = len(snap.events)
        return results

    def _ranking(self, snap: _Snapshot) -> dict:
        manifest = self._manifest_of(snap) or {}
        corpus_index = {p["id"]: p for p in manifest.get("problems", [])}
        records = [
            e["record"] for e in snap.events if e.get("kind") == "job_finished"
        ]
        adjudicated = adjudicate(records, corpus_index, results_dir=self.run_dir)
        readable = {
            a["name"]: a.get("readable_proofs", "not_available")
            for a in manifest.get("adapters", [])
        }
        doc = rank(adjudicated, readable_flags=readable).to_dict()
        doc["snapshot_events"] = len(snap.events)
        return doc

    def _problems(self, snap: _Snapshot) -> dict:
        manifest = self._manifest_of(snap) or {}
        return {
            "problems": manifest.get("problems", []),
            "snapshot_events": len(snap.events),
        }

    def _adapters(self, snap: _Snapshot) -> dict:
        manifest = self._manifest_of(snap) or {}
        return {
            "adapters": manifest.get("adapters", []),
            "snapshot_events": len(snap.events),
        }

    def _manifest(self, snap: _Snapshot) -> dict:
        manifest = self._manifest_of(snap)
        if manifest is None:
            return {"manifest": None, "snapshot_events": len(snap.events)}
        doc = dict(manifest)
        doc["snapshot_events"] = len(snap.events)
        return doc


class _Handler(BaseHTTPRequestHandler):
    server_version = "gasc-service/1"

    def do_GET(self):  # noqa: N802 (http.server API)
        try:
            code, payload = self.server.app.handle(urlsplit(self.path).path)
        except Exception as exc:  # a broken log must not kill the server
            log.exception("request failed: %s", self.path)
            code, payload = 500, {"error": str(exc)}
        body = canonical_dumps(payload).encode("utf-8")
        self.send_response(code)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        if code == 503:
            self.send_header("Retry-After", "1")
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, *args):
        pass


def make_server(run_dir, host="127.0.0.1", port=0, stale_after_s=DEFAULT_STALE_AFTER_S):
    server = ThreadingHTTPServer((host, port), _Handler)
    server.app = ServiceApp(run_dir, stale_after_s)
    return server


def serve(run_dir, bind: str = "127.0.0.1:8765", stale_after_s=DEFAULT_STALE_AFTER_S) -> None:
    """Blocking server loop; Ctrl-C stops it."""
    host, _, port_text = bind.rpartition(":")
    if not host or not port_text.isdigit():
        raise GascError(f"bind address must look like HOST:PORT, got {bind!r}")
    server = make_server(run_dir, host, int(port_text), stale_after_s)
    actual = server.server_address
    print(f"serving {run_dir} on http://{actual[0]}:{actual[1]}", file=sys.stderr, flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()


# --- watch client ---------------------------------------------------------------

_STATUS_KEYS = {"state", "total_jobs", "completed_jobs", "in_flight", "run_id"}


def check_status_schema(doc) -> dict:
    if not isinstance(doc, dict):
        raise SchemaError("$", "status must be a JSON object")
    missing = _STATUS_KEYS - doc.keys()
    if missing:
        raise SchemaError(sorted(missing)[0], "missing status field")
    if doc["state"] not in ("idle", "running", "finished", "incomplete"):
        raise SchemaError("state", f"unexpected state {doc['state']!r}")
    if not isinstance(doc["completed_jobs"], int) or not isinstance(doc["total_jobs"], int):
        raise SchemaError("completed_jobs", "job counters must be integers")
    if doc["completed_jobs"] > doc["total_jobs"] and doc["total_jobs"] != 0:
        raise SchemaError("completed_jobs", "more completed than total")
    return doc


def watch(url: str, interval_s: float = 2.0, retry_budget: int = 5, out=None) -> int:
    """Poll /status until the run finishes; one line per poll.

    Returns 0 when the run reports finished, 1 on an incomplete run, a
    malformed response, or after retry_budget consecutive connection
    failures.
    """
    out = out or sys.stdout
    base = url.rstrip("/")
    if not base.endswith("/status"):
        base = base + "/status"
    failures = 0
    while True:
        try:
            with urllib.request.urlopen(base, timeout=10) as response:
                doc = json.loads(response.read().decode("utf-8"))
        except (urllib.error.URLError, OSError, json.JSONDecodeError) as exc:
            failures += 1
            print(f"poll failed ({failures}/{retry_budget}): {exc}", file=out, flush=True)
            if failures >= retry_budget:
                return 1
            time.sleep(interval_s)
            continue
        failures = 0
        try:
            status = check_status_schema(doc)
        except SchemaError as exc:
            print(f"malformed status: {exc}", file=out, flush=True)
            return 1
        print(
            f"[{status['state']}] {status['completed_jobs']}/{status['total_jobs']} jobs, "
            f"{len(status['in_flight'])} in flight (run {status['run_id']})",
            file=out,
            flush=True,
        )
        if status["state"] == "finished":
            return 0
        if status["state"] == "incomplete":
            return 1
        time.sleep(interval_s)
