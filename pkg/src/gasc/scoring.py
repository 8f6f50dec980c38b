"""Adjudication and ranking of run records.

A raw verdict becomes a correctness class by comparison with the corpus
ground truth:

    CorrectSolve    Proved on an expected-proved problem, or Disproved on an
                    expected-disproved one
    IncorrectClaim  a definite verdict contradicting the expected status
    NovelClaim      a definite verdict on an expected-open problem (logged,
                    excluded from solve counts)
    NoSolve         everything else (Unknown, Timeout, MemOut, Error, ...)

Correct solves get a validation-time class from wall seconds: Good if
t <= 1.5, Fair if 1.5 < t <= 3, Poor above, boundaries inclusive. Where an
informal proof and a produced proof artifact both exist, the readability
proxy is the quotient informal_size / formal_size over whitespace-normalized
UTF-8 byte counts.

Ranking rule: adapters with zero incorrect claims form tier 0 and precede
every tier-1 adapter; within a tier, order by solves (descending), total
wall time over solved problems (ascending), then name. With repeated runs
of a job, the minimum wall/CPU repetition represents it and the others are
dropped from scoring.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from pathlib import Path

from .errors import InvalidMeasurement, UnknownProblemId, ZeroSize

DEFINITE_VERDICTS = {"Proved", "Disproved"}

GOOD, FAIR, POOR = "Good", "Fair", "Poor"


def classify_validation_time(t: float) -> str:
    if t < 0:
        raise InvalidMeasurement(f"negative wall time {t}")
    if t <= 1.5:
        return GOOD
    if t <= 3.0:
        return FAIR
    return POOR


def proof_size(text: str) -> int:
    """Byte count of the whitespace-normalized UTF-8 proof text."""
    return len(" ".join(text.split()).encode("utf-8"))


def de_bruijn_factor(informal_size: int, formal_size: int) -> float:
    """Quotient of informal proof size to formal proof size."""
    if informal_size <= 0 or formal_size <= 0:
        raise ZeroSize()
    return informal_size / formal_size


@dataclass
class AdjudicatedResult:
    problem_id: str
    adapter_name: str
    verdict: str
    wall_time_s: float
    cpu_time_s: float
    correctness: str  # CorrectSolve | IncorrectClaim | NoSolve | NovelClaim
    validation_class: str | None  # set iff CorrectSolve
    db_factor: float | None
    expected_status: str
    repetitions: int

    def to_dict(self) -> dict:
        return asdict(self)


def _correctness(verdict: str, expected: str) -> str:
    if verdict not in DEFINITE_VERDICTS:
        return "NoSolve"
    if expected == "open":
        return "NovelClaim"
    if (verdict == "Proved") == (expected == "proved"):
        return "CorrectSolve"
    return "IncorrectClaim"


def _representative(reps: list[dict]) -> dict:
    return min(reps, key=lambda r: (r["wall_time_s"], r["repetition_index"]))


def adjudicate(records, corpus_index, results_dir=None) -> list[AdjudicatedResult]:
    """Judge records against ground truth.

    ``corpus_index`` maps problem id to an object or mapping exposing
    ``expected_status`` and optionally ``informal_proof``. ``results_dir``
    anchors relative proof artifact paths so readability quotients can be
    computed.
    """
    grouped: dict[tuple[str, str], list[dict]] = {}
    for record in records:
        pid = record["problem_id"]
        if pid not in corpus_index:
            raise UnknownProblemId(pid)
        grouped.setdefault((pid, record["adapter_name"]), []).append(record)

    out = []
    for (pid, adapter), reps in sorted(grouped.items()):
        rep = _representative(reps)
        wall = min(r["wall_time_s"] for r in reps)
        cpu = min(r["cpu_time_s"] for r in reps)
        meta = corpus_index[pid]
        expected = _field(meta, "expected_status")
        correctness = _correctness(rep["verdict"], expected)

        validation_class = None
        db = None
        if correctness == "CorrectSolve":
            validation_class = classify_validation_time(wall)
            db = _db_factor(meta, rep, results_dir)

        out.append(
            AdjudicatedResult(
                problem_id=pid,
                adapter_name=adapter,
                verdict=rep["verdict"],
                wall_time_s=wall,
                cpu_time_s=cpu,
                correctness=correctness,
                validation_class=validation_class,
                db_factor=db,
                expected_status=expected,
                repetitions=len(reps),
            )
        )
    return out


def _field(meta, name, default=None):
    if isinstance(meta, dict):
        return meta.get(name, default)
    return getattr(meta, name, default)


def _db_factor(meta, record, results_dir) -> float | None:
    informal = _field(meta, "informal_proof")
    artifact = record.get("proof_artifact_path")
    if not informal or not artifact:
        return None
    path = Path(artifact)
    if results_dir is not None and not path.is_absolute():
        path = Path(results_dir) / path
    try:
        formal = path.read_text(encoding="utf-8", errors="replace")
    except OSError:
        return None
    informal_size = proof_size(informal)
    formal_size = proof_size(formal)
    if informal_size == 0 or formal_size == 0:
        return None
    return round(de_bruijn_factor(informal_size, formal_size), 6)


@dataclass
class RankEntry:
    adapter_name: str
    tier: int
    solved: int
    incorrect: int
    total_time_s: float
    class_counts: dict
    readable_proofs: str

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class Ranking:
    entries: list[RankEntry]

    def to_dict(self) -> dict:
        return {"entries": [e.to_dict() for e in self.entries]}

    def order(self) -> list[str]:
        return [e.adapter_name for e in self.entries]


def rank(adjudicated, readable_flags=None) -> Ranking:
    """Deterministic total order over adapters; wrong answers demote to tier 1."""
    readable_flags = readable_flags or {}
    stats: dict[str, dict] = {}
    for result in adjudicated:
        s = stats.setdefault(
            result.adapter_name,
            {"solved": 0, "incorrect": 0, "time": 0.0, "classes": {"good": 0, "fair": 0, "poor": 0}},
        )
        if result.correctness == "CorrectSolve":
            s["solved"] += 1
            s["time"] += result.wall_time_s
            s["classes"][result.validation_class.lower()] += 1
        elif result.correctness == "IncorrectClaim":
            s["incorrect"] += 1

    entries = [
        RankEntry(
            adapter_name=name,
            tier=0 if s["incorrect"] == 0 else 1,
            solved=s["solved"],
            incorrect=s["incorrect"],
            total_time_s=round(s["time"], 6),
            class_counts=s["classes"],
            readable_proofs=readable_flags.get(name, "not_available"),
        )
        for name, s in stats.items()
    ]
    entries.sort(key=lambda e: (e.tier, -e.solved, e.total_time_s, e.adapter_name))
    return Ranking(entries)
