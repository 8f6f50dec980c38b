"""Acceptance suite: one test per criterion, one printed PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines live.
Quantitative checks use the bundled mock provers under controlled delays, so
the whole suite is hermetic.
"""

import itertools
import json
import random
import re
import threading
import time
import urllib.error
import urllib.request
from pathlib import Path

import pytest

from gasc.adapters import mock_competition_specs, mock_spec
from gasc.corpus import load_corpus, select_problems, validate_corpus
from gasc.geoform import emit_gclc, parse_gclc_subset, read_exchange, write_exchange
from gasc.jsonutil import canonical_dumps, load_json
from gasc.report import render
from gasc.runner import RunConfig, replay_log, run_competition
from gasc.scoring import adjudicate, classify_validation_time, rank
from gasc.service import ServiceApp, check_status_schema, make_server
from gasc.synth import generate_corpus, random_problem


def _criterion(name: str, ok: bool, detail: str = "") -> None:
    suffix = f" ({detail})" if detail else ""
    print(f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'}{suffix}")
    assert ok, f"{name} failed{suffix}"


@pytest.fixture(scope="module")
def mini_run(tmp_path_factory, mini_corpus, answers_path):
    """The reference mini-competition: 20 problems x the standard four mocks."""
    out = tmp_path_factory.mktemp("mini-competition") / "run"
    adapters = mock_competition_specs(answers_path)
    config = RunConfig(
        wall_limit_s=2.0, cpu_limit_s=10.0, mem_limit_mib=1024,
        workers=4, timing_mode="parallel",
    )
    started = time.monotonic()
    results = run_competition(mini_corpus.entries, adapters, config, out)
    elapsed = time.monotonic() - started
    return {"out": out, "results": results, "elapsed_s": elapsed}


def test_c1_validation_time_taxonomy():
    inputs = [0, 1.0, 1.5, 1.500001, 3.0, 3.000001, 100]
    expected = ["Good", "Good", "Good", "Fair", "Fair", "Poor", "Poor"]
    got = [classify_validation_time(t) for t in inputs]
    _criterion("C1 validation-time taxonomy", got == expected, f"{got}")


def test_c2_timeout_enforcement(mini_corpus, tmp_path):
    entries = select_problems(mini_corpus, ids=["GEO0001"])
    hanger = mock_spec("hanger", "hang", input_dialect="exchange", proof_artifact=None)
    config = RunConfig(
        wall_limit_s=1.0, cpu_limit_s=10.0, mem_limit_mib=512,
        repetitions=20, timing_mode="serial",
    )
    started = time.monotonic()
    results = run_competition(entries, [hanger], config, tmp_path / "run")
    elapsed = time.monotonic() - started
    records = results["records"]
    in_window = [
        r for r in records if r["verdict"] == "Timeout" and 1.0 <= r["wall_time_s"] <= 1.5
    ]
    _criterion(
        "C2 timeout enforcement",
        len(records) == 20 and len(in_window) == 20 and elapsed < 40.0,
        f"{len(in_window)}/20 in [1.0,1.5], total {elapsed:.1f}s",
    )


def test_c3_cpu_accounting(mini_corpus, tmp_path):
    entries = select_problems(mini_corpus, ids=["GEO0001"])
    burner = mock_spec("burner", "prove", burn_cpu=0.5)
    config = RunConfig(
        wall_limit_s=10.0, cpu_limit_s=10.0, mem_limit_mib=512,
        repetitions=10, timing_mode="serial",
    )
    results = run_competition(entries, [burner], config, tmp_path / "run")
    tolerance = max(0.15 * 0.5, 0.1)
    deltas = [abs(r["cpu_time_s"] - 0.5) for r in results["records"]]
    good = sum(1 for d in deltas if d <= tolerance)
    _criterion(
        "C3 cpu accounting",
        len(deltas) == 10 and good >= 9,
        f"{good}/10 within ±{tolerance}s, worst delta {max(deltas):.3f}s",
    )


def _brute_force_ranking_order(entries) -> list[str]:
    """Independent comparator oracle: search all orderings for the one where
    every adjacent pair satisfies the ranking rule."""

    def le(x, y):
        kx = (x["tier"], -x["solved"], x["total_time_s"], x["adapter_name"])
        ky = (y["tier"], -y["solved"], y["total_time_s"], y["adapter_name"])
        return kx <= ky

    for perm in itertools.permutations(entries):
        if all(le(perm[i], perm[i + 1]) for i in range(len(perm) - 1)):
            return [e["adapter_name"] for e in perm]
    raise AssertionError("comparator admits no total order")


def test_c4_end_to_end_mini_competition(mini_run, mini_corpus):
    results = mini_run["results"]
    records = results["records"]
    index = mini_corpus.by_id()
    ranking = rank(adjudicate(records, index, results_dir=mini_run["out"]))
    order = ranking.order()
    oracle_order = _brute_force_ranking_order([e.to_dict() for e in ranking.entries])
    expected = ["fast-solver", "slow-solver", "hanger", "liar"]
    liar_entry = next(e for e in ranking.entries if e.adapter_name == "liar")
    code, status = ServiceApp(mini_run["out"]).handle("/status")
    _criterion(
        "C4 end-to-end mini-competition",
        len(records) == 80
        and mini_run["elapsed_s"] < 60.0
        and order == expected
        and oracle_order == expected
        and liar_entry.tier == 1
        and (code, status["state"], status["completed_jobs"]) == (200, "finished", 80),
        f"{len(records)} records in {mini_run['elapsed_s']:.1f}s, order {order}",
    )


def test_c5_score_report_determinism(mini_run, mini_corpus, tmp_path):
    results = load_json(mini_run["out"] / "results.json")
    index = mini_corpus.by_id()

    def score_and_report(out_dir: Path) -> dict[str, bytes]:
        adjudicated = adjudicate(results["records"], index, results_dir=mini_run["out"])
        readable = {
            a["name"]: a["readable_proofs"] for a in results["manifest"]["adapters"]
        }
        ranking = rank(adjudicated, readable_flags=readable)
        out_dir.mkdir(parents=True, exist_ok=True)
        ranking_bytes = (canonical_dumps(ranking.to_dict(), indent=2) + "\n").encode()
        (out_dir / "ranking.json").write_bytes(ranking_bytes)
        render(
            results,
            ranking.to_dict(),
            "json,csv,html",
            out_dir,
            adjudicated={"results": [a.to_dict() for a in adjudicated]},
        )
        return {
            name: (out_dir / name).read_bytes()
            for name in ("ranking.json", "matrix.csv", "report.json", "leaderboard.html")
        }

    first = score_and_report(tmp_path / "a")
    second = score_and_report(tmp_path / "b")
    strip = lambda blob: re.sub(rb"\d{4}-\d{2}-\d{2}T[0-9:.+]+", b"<ts>", blob)
    identical = (
        first["ranking.json"] == second["ranking.json"]
        and first["matrix.csv"] == second["matrix.csv"]
        and strip(first["report.json"]) == strip(second["report.json"])
        and strip(first["leaderboard.html"]) == strip(second["leaderboard.html"])
    )
    _criterion("C5 score+report determinism", identical)


def test_c6_parser_round_trip():
    failures = 0
    for seed in range(500):
        problem = random_problem(random.Random(seed), problem_id=f"GEO{seed % 10000:04d}")
        if parse_gclc_subset(emit_gclc(problem)) != problem:
            failures += 1
        if read_exchange(write_exchange(problem)) != problem:
            failures += 1
    _criterion("C6 parser round trips", failures == 0, f"{failures} failures over 500 problems")


def test_c7_scale_224_problems(tmp_path):
    manifest_path = generate_corpus(tmp_path / "scale", count=224, seed=11)
    started = time.monotonic()
    report = validate_corpus(manifest_path)
    elapsed = time.monotonic() - started
    selected = select_problems(load_corpus(manifest_path))
    ids = [e.problem_id for e in selected]
    _criterion(
        "C7 scale check (224 problems)",
        report.ok
        and elapsed < 2.0
        and len(ids) == 224
        and ids == sorted(ids)
        and len(set(ids)) == 224,
        f"validated in {elapsed:.2f}s",
    )


def test_c8_event_log_replay(mini_run, tmp_path):
    log_path = mini_run["out"] / "events.jsonl"
    replayed = replay_log(log_path)
    replay_bytes = (canonical_dumps(replayed, indent=2) + "\n").encode()
    disk_bytes = (mini_run["out"] / "results.json").read_bytes()

    lines = log_path.read_bytes().splitlines(keepends=True)
    finished_lines = [i for i, ln in enumerate(lines) if b'"kind":"job_finished"' in ln]
    cut_at = finished_lines[39]  # keep 40 of the 80 job results, tear the next line
    truncated_path = tmp_path / "truncated.jsonl"
    truncated_path.write_bytes(b"".join(lines[: cut_at + 1] + [lines[cut_at + 1][:25]]))
    partial = replay_log(truncated_path)

    _criterion(
        "C8 event-log replay",
        replay_bytes == disk_bytes
        and partial.get("incomplete") is True
        and len(partial["records"]) == 40,
        f"full replay {'==' if replay_bytes == disk_bytes else '!='} results.json, "
        f"partial has {len(partial['records'])} records",
    )


_ENDPOINT_CHECKS = {
    "/status": lambda doc: check_status_schema(doc),
    "/results": lambda doc: (doc["records"], doc["manifest"]),
    "/ranking": lambda doc: [e["adapter_name"] for e in doc["entries"]],
    "/problems": lambda doc: doc["problems"],
    "/adapters": lambda doc: doc["adapters"],
    "/manifest": lambda doc: doc["run_id"],
}


class _Poller(threading.Thread):
    def __init__(self, base: str, stop_at: float, run_dir: Path):
        super().__init__(daemon=True)
        self.base = base
        self.stop_at = stop_at
        self.run_dir = run_dir
        self.polls = 0
        self.schema_failures = []
        self.consistency_failures = []
        self.start()

    def run(self):
        rng = random.Random()
        while time.monotonic() < self.stop_at:
            endpoint = rng.choice(list(_ENDPOINT_CHECKS))
            try:
                doc = self._get(endpoint)
            except urllib.error.HTTPError as exc:
                if exc.code != 503:
                    self.schema_failures.append(f"{endpoint}: HTTP {exc.code}")
                continue
            except OSError as exc:
                self.schema_failures.append(f"{endpoint}: {exc}")
                continue
            try:
                _ENDPOINT_CHECKS[endpoint](doc)
            except Exception as exc:
                self.schema_failures.append(f"{endpoint}: {exc}")
                continue
            self.polls += 1
            if endpoint == "/results" and rng.random() < 0.5:
                self._check_ranking_consistency(doc)
            time.sleep(rng.uniform(0.05, 0.15))  # polling clients, not load cannons

    def _get(self, endpoint):
        with urllib.request.urlopen(f"{self.base}{endpoint}", timeout=30) as response:
            return json.loads(response.read().decode("utf-8"))

    def _check_ranking_consistency(self, results_doc):
        try:
            ranking_doc = self._get("/ranking")
        except (urllib.error.URLError, OSError):
            return
        if ranking_doc.get("snapshot_events") != results_doc.get("snapshot_events"):
            return  # log advanced between the two requests; not comparable
        manifest = results_doc.get("manifest") or {}
        index = {p["id"]: p for p in manifest.get("problems", [])}
        readable = {
            a["name"]: a.get("readable_proofs", "not_available")
            for a in manifest.get("adapters", [])
        }
        expected = rank(
            adjudicate(results_doc["records"], index, results_dir=self.run_dir),
            readable_flags=readable,
        ).to_dict()
        if ranking_doc["entries"] != expected["entries"]:
            self.consistency_failures.append(
                f"ranking mismatch at snapshot {ranking_doc.get('snapshot_events')}"
            )


def _dir_digest(root: Path) -> str:
    import hashlib

    h = hashlib.sha256()
    for path in sorted(root.rglob("*")):
        if path.is_file():
            h.update(str(path.relative_to(root)).encode())
            h.update(path.read_bytes())
    return h.hexdigest()


def test_c9_service_under_load(tmp_path, mini_corpus, answers_path):
    out = tmp_path / "live-run"
    adapters = [
        mock_spec("fast-solver", "oracle", answers=answers_path, delay_wall=0.2),
        mock_spec("hanger", "hang", input_dialect="exchange", proof_artifact=None),
    ]
    config = RunConfig(wall_limit_s=3.0, cpu_limit_s=10.0, mem_limit_mib=1024, workers=4)

    server = make_server(out)
    server_thread = threading.Thread(target=server.serve_forever, daemon=True)
    server_thread.start()
    host, port = server.server_address
    base = f"http://{host}:{port}"

    runner = threading.Thread(
        target=run_competition,
        args=(list(mini_corpus.entries), adapters, config, out),
        daemon=True,
    )
    runner.start()

    stop_at = time.monotonic() + 10.0
    pollers = [_Poller(base, stop_at, out) for _ in range(50)]
    for poller in pollers:
        poller.join(timeout=30)
    runner.join(timeout=120)
    server.shutdown()
    server.server_close()

    total_polls = sum(p.polls for p in pollers)
    schema_failures = [f for p in pollers for f in p.schema_failures]
    consistency_failures = [f for p in pollers for f in p.consistency_failures]

    # read-only check on the now-static directory: serve it again under load
    digest_before = _dir_digest(out)
    server2 = make_server(out)
    thread2 = threading.Thread(target=server2.serve_forever, daemon=True)
    thread2.start()
    host2, port2 = server2.server_address
    stop_at2 = time.monotonic() + 2.0
    pollers2 = [_Poller(f"http://{host2}:{port2}", stop_at2, out) for _ in range(50)]
    for poller in pollers2:
        poller.join(timeout=30)
    server2.shutdown()
    server2.server_close()
    untouched = _dir_digest(out) == digest_before

    _criterion(
        "C9 service consistency under load",
        total_polls > 500
        and not schema_failures
        and not consistency_failures
        and untouched,
        f"{total_polls} polls, {len(schema_failures)} schema failures, "
        f"{len(consistency_failures)} consistency failures, dir untouched={untouched}",
    )


def test_c10_incorrect_results_rank_below_sound_ones():
    from gasc.scoring import AdjudicatedResult

    def adj(adapter, kind, wall):
        return AdjudicatedResult(
            problem_id="GEO0001",
            adapter_name=adapter,
            verdict="Proved",
            wall_time_s=wall,
            cpu_time_s=wall,
            correctness=kind,
            validation_class="Good" if kind == "CorrectSolve" else None,
            db_factor=None,
            expected_status="proved",
            repetitions=1,
        )

    rng = random.Random(20260810)
    violations = 0
    for _ in range(200):
        adapters = [f"adapter{i}" for i in range(rng.randint(2, 6))]
        unsound = set()
        results = []
        for name in adapters:
            wrong = rng.choice([0, 0, 0, 1, 2, 5])
            if wrong:
                unsound.add(name)
            results += [
                adj(name, "CorrectSolve", rng.random() * 5)
                for _ in range(rng.randint(0, 15))
            ]
            results += [adj(name, "IncorrectClaim", 0.1) for _ in range(wrong)]
            # at least one record per adapter, so every adapter is ranked
            results += [adj(name, "NoSolve", 0.1) for _ in range(rng.randint(1, 5))]
        if not unsound or unsound == set(adapters):
            continue
        order = rank(results).order()
        position = {name: i for i, name in enumerate(order)}
        for sound_name in set(adapters) - unsound:
            for unsound_name in unsound:
                if position[sound_name] > position[unsound_name]:
                    violations += 1
    _criterion(
        "C10 incorrect-result handling", violations == 0, f"{violations} tier violations"
    )
