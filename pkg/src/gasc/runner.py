"""Competition runner: executes the (problems x adapters) job matrix.

Every outcome lands in an append-only ``events.jsonl`` (one JSON object per
line, single serialized writer); ``results.json`` is written at the end as
the fold of that log, so replaying the log always reproduces it exactly.
Event kinds: ``run_started`` (carries the reproducibility manifest),
``job_started``, ``job_finished`` (carries one RunRecord), ``run_finished``.
Replay ignores event kinds it does not know.

Adapters whose executable is absent are reported as skipped at start; they
produce no records. Job inputs are materialized in per-job scratch
directories under ``<out>/work`` and deleted afterwards unless
``keep_workdirs`` is set; proof artifacts are copied to ``<out>/artifacts``
before cleanup.
"""

from __future__ import annotations

import datetime as _dt
import json
import logging
import os
import platform
import shutil
import threading
import time
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import psutil

from . import __version__
from .adapters import AdapterSpec, classify_output, executable_available
from .corpus import ProblemEntry
from .errors import (
    GascError,
    MissingRunStart,
    NoRunnableAdapters,
    OutDirNotWritable,
    SpawnFailure,
)
from .geoform import emit_gclc, emit_ggb_script
from .geoform.exchange import write_exchange_file
from .jsonutil import canonical_dumps, load_json, sha256_hex, write_canonical
from .measure import Limits, measure_job

log = logging.getLogger(__name__)

DIALECT_EXTENSIONS = {"gclc": ".gcl", "exchange": ".gf.json", "ggb": ".ggb"}

EVENTS_FILE = "events.jsonl"
RESULTS_FILE = "results.json"


@dataclass(frozen=True)
class RunConfig:
    wall_limit_s: float = 10.0
    cpu_limit_s: float = 10.0
    mem_limit_mib: int = 1024
    workers: int = 1
    timing_mode: str = "parallel"  # parallel | serial
    repetitions: int = 1
    grace_kill_s: float = 0.5
    keep_workdirs: bool = False

    def validate(self) -> None:
        if self.wall_limit_s <= 0 or self.cpu_limit_s <= 0:
            raise GascError("wall and cpu limits must be positive")
        if self.mem_limit_mib <= 0:
            raise GascError("memory limit must be positive")
        if self.workers < 1:
            raise GascError("workers must be at least 1")
        if self.timing_mode not in ("parallel", "serial"):
            raise GascError("timing_mode must be 'parallel' or 'serial'")
        if self.repetitions < 1:
            raise GascError("repetitions must be at least 1")
        if self.grace_kill_s >= self.wall_limit_s:
            raise GascError("grace_kill_s must be smaller than the wall limit")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class RunRecord:
    problem_id: str
    adapter_name: str
    verdict: str
    wall_time_s: float
    cpu_time_s: float
    max_rss_mib: float
    exit_code: int | None
    stdout_excerpt: str
    stderr_excerpt: str
    proof_artifact_path: str | None
    repetition_index: int

    def to_dict(self) -> dict:
        return asdict(self)


class EventLog:
    """Append-only JSONL writer; one write per event, serialized by a lock."""

    def __init__(self, path):
        self.path = Path(path)
        self._fh = open(self.path, "x", encoding="utf-8")
        self._lock = threading.Lock()

    def append(self, kind: str, **payload) -> None:
        line = canonical_dumps({"kind": kind, **payload})
        with self._lock:
            self._fh.write(line + "\n")
            self._fh.flush()

    def close(self) -> None:
        with self._lock:
            self._fh.close()


def host_info() -> dict:
    cpu_model = platform.processor() or platform.machine()
    try:
        with open("/proc/cpuinfo", "r", encoding="utf-8") as fh:
            for line in fh:
                if line.lower().startswith("model name"):
                    cpu_model = line.split(":", 1)[1].strip()
                    break
    except OSError:
        pass
    return {
        "os": platform.platform(),
        "cpu_model": cpu_model,
        "logical_cores": os.cpu_count() or 1,
        "ram_mib": int(psutil.virtual_memory().total / (1024 * 1024)),
    }


def _adapter_entry(spec: AdapterSpec, status: str) -> dict:
    return {
        "name": spec.name,
        "status": status,
        "method": spec.method,
        "input_dialect": spec.input_dialect,
        "readable_proofs": spec.readable_proofs,
    }


def build_manifest(
    entries: list[ProblemEntry],
    present: list[AdapterSpec],
    skipped: list[AdapterSpec],
    config: RunConfig,
) -> dict:
    corpus_digest = [
        {"id": e.problem_id, "expected_status": e.expected_status} for e in entries
    ]
    adapter_digest = [a.to_dict() for a in present + skipped]
    return {
        "run_id": str(uuid.uuid4()),
        "started_at": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        "host": host_info(),
        "config_hash": sha256_hex(
            {"config": config.to_dict(), "corpus": corpus_digest, "adapters": adapter_digest}
        ),
        "tool_version": __version__,
        "config": config.to_dict(),
        "adapters": sorted(
            (
                [_adapter_entry(a, "present") for a in present]
                + [_adapter_entry(a, "skipped") for a in skipped]
            ),
            key=lambda a: a["name"],
        ),
        "problems": [
            {
                "id": e.problem_id,
                "axiom_system": e.axiom_system,
                "conjecture_type": e.conjecture_type,
                "expected_status": e.expected_status,
            }
            for e in entries
        ],
        "total_jobs": len(entries) * len(present) * config.repetitions,
    }


def materialize_input(entry: ProblemEntry, dialect: str, directory: Path) -> Path:
    path = directory / f"{entry.problem_id}{DIALECT_EXTENSIONS[dialect]}"
    if dialect == "gclc":
        path.write_text(emit_gclc(entry.problem), encoding="utf-8")
    elif dialect == "ggb":
        path.write_text(emit_ggb_script(entry.problem), encoding="utf-8")
    else:
        write_exchange_file(entry.problem, path)
    return path


def _decode_excerpt(data: bytes) -> str:
    return data.decode("utf-8", errors="replace")


def _error_record(entry: ProblemEntry, spec: AdapterSpec, rep: int, diagnostic: str) -> RunRecord:
    return RunRecord(
        problem_id=entry.problem_id,
        adapter_name=spec.name,
        verdict="Error",
        wall_time_s=0.0,
        cpu_time_s=0.0,
        max_rss_mib=0.0,
        exit_code=None,
        stdout_excerpt="",
        stderr_excerpt=diagnostic,
        proof_artifact_path=None,
        repetition_index=rep,
    )


def _run_one(
    entry: ProblemEntry,
    spec: AdapterSpec,
    rep: int,
    config: RunConfig,
    out_dir: Path,
    events: EventLog,
) -> RunRecord:
    scratch = out_dir / "work" / f"{entry.problem_id}__{spec.name}__{rep}"
    scratch.mkdir(parents=True, exist_ok=True)
    events.append(
        "job_started",
        problem_id=entry.problem_id,
        adapter_name=spec.name,
        repetition_index=rep,
        started_at=time.time(),
    )
    try:
        input_path = materialize_input(entry, spec.input_dialect, scratch)
        argv = [
            tok.replace("{input}", str(input_path)).replace("{workdir}", str(scratch))
            for tok in spec.command_template
        ]
        limits = Limits(
            wall_s=config.wall_limit_s,
            cpu_s=config.cpu_limit_s,
            mem_mib=config.mem_limit_mib,
            grace_kill_s=config.grace_kill_s,
        )
        # jobs run inside their scratch dir; GASC_RUN_ROOT lets tools resolve
        # resource paths written relative to where the run was launched
        env = dict(os.environ, GASC_RUN_ROOT=os.getcwd())
        m = measure_job(argv, limits, cwd=scratch, env=env)

        if m.limit_breach in ("wall", "cpu"):
            verdict = "Timeout"
        elif m.limit_breach == "mem":
            verdict = "MemOut"
        else:
            combined = _decode_excerpt(m.stdout) + "\n" + _decode_excerpt(m.stderr)
            verdict = classify_output(spec, combined, m.exit_code)

        proof_rel = None
        if spec.proof_artifact:
            matches = sorted(scratch.glob(spec.proof_artifact))
            if matches:
                artifacts = out_dir / "artifacts"
                artifacts.mkdir(exist_ok=True)
                dest = artifacts / f"{entry.problem_id}__{spec.name}__{rep}{matches[0].suffix}"
                shutil.copyfile(matches[0], dest)
                proof_rel = str(dest.relative_to(out_dir))

        return RunRecord(
            problem_id=entry.problem_id,
            adapter_name=spec.name,
            verdict=verdict,
            wall_time_s=round(m.wall_s, 6),
            cpu_time_s=round(m.cpu_s, 6),
            max_rss_mib=round(m.max_rss_mib, 3),
            exit_code=m.exit_code,
            stdout_excerpt=_decode_excerpt(m.stdout),
            stderr_excerpt=_decode_excerpt(m.stderr),
            proof_artifact_path=proof_rel,
            repetition_index=rep,
        )
    except SpawnFailure as exc:
        return _error_record(entry, spec, rep, str(exc))
    except Exception as exc:  # a failing job must not take the run down
        log.exception("job %s x %s failed in the harness", entry.problem_id, spec.name)
        return _error_record(entry, spec, rep, f"harness failure: {exc!r}")
    finally:
        if not config.keep_workdirs:
            shutil.rmtree(scratch, ignore_errors=True)


def run_competition(
    entries: list[ProblemEntry],
    adapters: list[AdapterSpec],
    config: RunConfig,
    out_dir,
) -> dict:
    """Run the full matrix; returns the folded results (also written to disk)."""
    config.validate()
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        probe = out_dir / ".writable"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise OutDirNotWritable(f"{out_dir}: {exc}") from exc
    events_path = out_dir / EVENTS_FILE
    if events_path.exists():
        raise GascError(f"{out_dir} already contains {EVENTS_FILE}; refusing to overwrite")

    present = [a for a in adapters if executable_available(a)]
    skipped = [a for a in adapters if not executable_available(a)]
    for spec in skipped:
        log.warning("adapter %s skipped: %s not found", spec.name, spec.command_template[0])
    if not present:
        raise NoRunnableAdapters()

    entries = sorted(entries, key=lambda e: e.problem_id)
    present = sorted(present, key=lambda a: a.name)
    manifest = build_manifest(entries, present, skipped, config)

    events = EventLog(events_path)
    started = time.monotonic()
    try:
        events.append("run_started", manifest=manifest)
        jobs = [
            (entry, spec, rep)
            for entry in entries
            for spec in present
            for rep in range(config.repetitions)
        ]

        def execute(job) -> None:
            entry, spec, rep = job
            record = _run_one(entry, spec, rep, config, out_dir, events)
            events.append("job_finished", record=record.to_dict())
            log.info(
                "%s x %s rep %d -> %s (%.3fs)",
                entry.problem_id,
                spec.name,
                rep,
                record.verdict,
                record.wall_time_s,
            )

        # serial timing keeps jobs from contending for cache and memory bandwidth
        workers = 1 if config.timing_mode == "serial" else config.workers
        if workers == 1:
            for job in jobs:
                execute(job)
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                list(pool.map(execute, jobs))

        events.append(
            "run_finished",
            summary={
                "completed_jobs": len(jobs),
                "duration_s": round(time.monotonic() - started, 3),
                "skipped_adapters": sorted(a.name for a in skipped),
            },
        )
    finally:
        events.close()
        if not config.keep_workdirs:
            shutil.rmtree(out_dir / "work", ignore_errors=True)

    results = replay_log(events_path)
    write_canonical(out_dir / RESULTS_FILE, results)
    return results


# --- event log reading --------------------------------------------------------


def read_events(path) -> tuple[list[dict], bool]:
    """Parse complete JSONL lines; returns (events, truncated)."""
    path = Path(path)
    if not path.is_file():
        raise MissingRunStart(f"no event log at {path}")
    data = path.read_bytes()
    truncated = bool(data) and not data.endswith(b"\n")
    complete, _, _ = data.rpartition(b"\n")
    events = []
    for line in complete.splitlines():
        if not line.strip():
            continue
        try:
            events.append(json.loads(line))
        except json.JSONDecodeError:
            truncated = True
            break
    return events, truncated


RECORD_SORT_KEY = ("problem_id", "adapter_name", "repetition_index")


def fold_events(events: list[dict], truncated: bool) -> dict:
    """Deterministic fold of an event stream into the results document."""
    manifest = None
    records = []
    finished = False
    for event in events:
        kind = event.get("kind")
        if kind == "run_started" and manifest is None:
            manifest = event.get("manifest")
        elif kind == "job_finished":
            record = event.get("record")
            if isinstance(record, dict):
                records.append(record)
        elif kind == "run_finished":
            finished = True
    if manifest is None:
        raise MissingRunStart()
    records.sort(key=lambda r: tuple(r.get(k) for k in RECORD_SORT_KEY))
    results = {"manifest": manifest, "records": records}
    if truncated or not finished:
        results["incomplete"] = True
    return results


def replay_log(path) -> dict:
    events, truncated = read_events(path)
    return fold_events(events, truncated)


def load_results(run_dir) -> dict:
    return load_json(Path(run_dir) / RESULTS_FILE)
