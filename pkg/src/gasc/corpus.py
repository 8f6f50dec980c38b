"""Problem-set storage: manifest loading, validation, and selection.

A corpus is a directory with a ``corpus.json`` manifest referencing problem
files in the exchange format, each entry tagged with an axiom system, a
conjecture type, and the expected status (the ground truth used for
adjudication). Everything is read-only after load.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import GascError, ManifestNotFound, ManifestSchemaError, UnknownId
from .geoform import GeoProblem
from .geoform.exchange import read_exchange_file

AXIOM_SYSTEMS = {"neutral", "euclidean", "hyperbolic", "projective", "other"}
CONJECTURE_TYPES = {"constructive", "ruler_compass", "inequality", "other"}
EXPECTED_STATUSES = {"proved", "disproved", "open"}

_KNOWN_ENTRY_KEYS = {
    "problem",
    "axiom_system",
    "conjecture_type",
    "expected_status",
    "informal_proof",
    "source",
}


@dataclass(frozen=True)
class ProblemEntry:
    problem: GeoProblem
    axiom_system: str
    conjecture_type: str
    expected_status: str
    informal_proof: str | None
    source: str
    path: str
    extra_json: str = "{}"  # unknown manifest fields, preserved verbatim

    @property
    def problem_id(self) -> str:
        return self.problem.id


@dataclass(frozen=True)
class Corpus:
    name: str
    version: str
    entries: tuple[ProblemEntry, ...]
    manifest_path: str

    def by_id(self) -> dict[str, ProblemEntry]:
        return {e.problem_id: e for e in self.entries}


@dataclass
class EntryReport:
    path: str
    problem_id: str | None
    ok: bool
    diagnostics: list[str] = field(default_factory=list)


@dataclass
class ValidationReport:
    manifest_path: str
    entries: list[EntryReport] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)


def _read_manifest(manifest_path) -> tuple[Path, dict]:
    path = Path(manifest_path)
    if path.is_dir():
        path = path / "corpus.json"
    if not path.is_file():
        raise ManifestNotFound(f"no corpus manifest at {path}")
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ManifestSchemaError(f"{path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ManifestSchemaError(f"{path}: manifest must be a JSON object")
    for key in ("name", "version"):
        if not isinstance(doc.get(key), str):
            raise ManifestSchemaError(f"{path}: missing string field {key!r}")
    if not isinstance(doc.get("entries"), list):
        raise ManifestSchemaError(f"{path}: 'entries' must be an array")
    return path, doc


def _load_entry(base: Path, raw) -> tuple[ProblemEntry | None, EntryReport]:
    if not isinstance(raw, dict) or not isinstance(raw.get("problem"), str):
        report = EntryReport(path="<entry>", problem_id=None, ok=False)
        report.diagnostics.append("entry must be an object with a 'problem' file path")
        return None, report

    rel = raw["problem"]
    report = EntryReport(path=rel, problem_id=None, ok=True)
    full = base / rel
    problem = None
    if not full.is_file():
        report.ok = False
        report.diagnostics.append(f"missing problem file {full}")
    else:
        try:
            problem = read_exchange_file(full)
            report.problem_id = problem.id
        except GascError as exc:
            report.ok = False
            report.diagnostics.append(str(exc))

    axiom = raw.get("axiom_system", "other")
    ctype = raw.get("conjecture_type", "other")
    expected = raw.get("expected_status")
    if axiom not in AXIOM_SYSTEMS:
        report.ok = False
        report.diagnostics.append(f"unknown axiom_system {axiom!r}")
    if ctype not in CONJECTURE_TYPES:
        report.ok = False
        report.diagnostics.append(f"unknown conjecture_type {ctype!r}")
    if expected not in EXPECTED_STATUSES:
        report.ok = False
        report.diagnostics.append(f"expected_status must be one of {sorted(EXPECTED_STATUSES)}")
    informal = raw.get("informal_proof")
    if informal is not None and not isinstance(informal, str):
        report.ok = False
        report.diagnostics.append("informal_proof must be a string when present")

    if not report.ok or problem is None:
        return None, report
    extra = {k: v for k, v in raw.items() if k not in _KNOWN_ENTRY_KEYS}
    entry = ProblemEntry(
        problem=problem,
        axiom_system=axiom,
        conjecture_type=ctype,
        expected_status=expected,
        informal_proof=informal,
        source=str(raw.get("source", "")),
        path=rel,
        extra_json=json.dumps(extra, sort_keys=True),
    )
    return entry, report


def validate_corpus(manifest_path) -> ValidationReport:
    """Check every entry; never mutates anything, collects all diagnostics."""
    path, doc = _read_manifest(manifest_path)
    base = path.parent
    report = ValidationReport(manifest_path=str(path))
    seen_ids: dict[str, str] = {}
    for raw in doc["entries"]:
        _, entry_report = _load_entry(base, raw)
        pid = entry_report.problem_id
        if pid is not None:
            if pid in seen_ids:
                entry_report.ok = False
                entry_report.diagnostics.append(
                    f"DuplicateId: {pid} already defined by {seen_ids[pid]}"
                )
            else:
                seen_ids[pid] = entry_report.path
        report.entries.append(entry_report)
    return report


def load_corpus(manifest_path) -> Corpus:
    """Load a corpus strictly: any invalid entry raises ManifestSchemaError."""
    path, doc = _read_manifest(manifest_path)
    base = path.parent
    entries = []
    seen_ids: dict[str, str] = {}
    for raw in doc["entries"]:
        entry, entry_report = _load_entry(base, raw)
        if entry is None:
            raise ManifestSchemaError(
                f"{entry_report.path}: " + "; ".join(entry_report.diagnostics)
            )
        if entry.problem_id in seen_ids:
            raise ManifestSchemaError(
                f"DuplicateId: {entry.problem_id} in both {seen_ids[entry.problem_id]} and {entry.path}"
            )
        seen_ids[entry.problem_id] = entry.path
        entries.append(entry)
    return Corpus(
        name=doc["name"],
        version=doc["version"],
        entries=tuple(entries),
        manifest_path=str(path),
    )


def select_problems(
    corpus: Corpus,
    axiom_systems=None,
    conjecture_types=None,
    ids=None,
) -> list[ProblemEntry]:
    """Filter entries; result is always sorted by problem id and duplicate-free."""
    if ids is not None:
        index = corpus.by_id()
        missing = [pid for pid in ids if pid not in index]
        if missing:
            raise UnknownId(missing[0])
        picked = {pid: index[pid] for pid in ids}
    else:
        picked = {e.problem_id: e for e in corpus.entries}
    if axiom_systems:
        wanted = set(axiom_systems)
        picked = {pid: e for pid, e in picked.items() if e.axiom_system in wanted}
    if conjecture_types:
        wanted = set(conjecture_types)
        picked = {pid: e for pid, e in picked.items() if e.conjecture_type in wanted}
    return [picked[pid] for pid in sorted(picked)]
