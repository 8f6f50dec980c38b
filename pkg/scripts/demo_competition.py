#!/usr/bin/env python3
"""End-to-end demo: run the bundled mini corpus against the four mock provers,
then score, rank, and render the leaderboard.

Usage:
    python3 scripts/demo_competition.py [out_dir]

Writes events.jsonl, results.json, ranking.json, adjudicated.json, and the
report files under out_dir (default: ./demo-run). Serve the directory live
with `gasc serve --run out_dir` while this is running.
"""

import sys
import time
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from gasc.adapters import mock_competition_specs
from gasc.corpus import load_corpus
from gasc.jsonutil import write_canonical
from gasc.report import render
from gasc.runner import RunConfig, run_competition
from gasc.scoring import adjudicate, rank


def main() -> int:
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("demo-run")
    corpus = load_corpus(REPO / "corpora" / "mini")
    adapters = mock_competition_specs(REPO / "corpora" / "mini" / "answers.json")
    config = RunConfig(wall_limit_s=2.0, cpu_limit_s=10.0, mem_limit_mib=1024, workers=4)

    print(f"running {len(corpus.entries)} problems x {len(adapters)} adapters -> {out}")
    started = time.monotonic()
    results = run_competition(list(corpus.entries), adapters, config, out)
    print(f"finished {len(results['records'])} jobs in {time.monotonic() - started:.1f}s")

    adjudicated = adjudicate(results["records"], corpus.by_id(), results_dir=out)
    readable = {a.name: a.readable_proofs for a in adapters}
    ranking = rank(adjudicated, readable_flags=readable)
    write_canonical(out / "ranking.json", ranking.to_dict())
    write_canonical(out / "adjudicated.json", {"results": [a.to_dict() for a in adjudicated]})
    render(results, ranking.to_dict(), "html,csv,json", out,
           adjudicated={"results": [a.to_dict() for a in adjudicated]})

    print("\nfinal ranking:")
    for i, entry in enumerate(ranking.entries, start=1):
        print(
            f"  {i}. {entry.adapter_name:<12} tier {entry.tier}  "
            f"solved {entry.solved:>2}  incorrect {entry.incorrect}  "
            f"time {entry.total_time_s:7.2f}s  "
            f"g/f/p {entry.class_counts['good']}/{entry.class_counts['fair']}/{entry.class_counts['poor']}"
        )
    print(f"\nleaderboard: {out / 'leaderboard.html'}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
