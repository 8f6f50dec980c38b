"""The gasc command line: convert, corpus, run, score, report, serve, watch.

Exit codes: 0 success, 1 operational error, 2 usage error. Diagnostics go to
stderr; stdout carries machine-readable payloads where a subcommand has one.
Flag precedence: command line > config file (--config or $GASC_CONFIG) >
built-in defaults.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .adapters import load_adapters
from .corpus import load_corpus, select_problems, validate_corpus
from .errors import GascError, SchemaError
from .geoform import (
    emit_gclc,
    emit_ggb_script,
    parse_gclc_subset,
    read_exchange_file,
    write_exchange_file,
)
from .jsonutil import canonical_dumps, load_json, write_canonical
from .report import render
from .runner import RESULTS_FILE, RunConfig, run_competition
from .scoring import adjudicate, rank
from .service import serve, watch

RUN_DEFAULTS = {
    "wall": 10.0,
    "cpu": 10.0,
    "mem": 1024,
    "workers": 1,
    "timing": "parallel",
    "reps": 1,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gasc", description="competition harness for geometry theorem provers"
    )
    parser.add_argument("--version", action="version", version=f"gasc {__version__}")
    parser.add_argument("--config", metavar="FILE", help="JSON config file with flag defaults")
    parser.add_argument("-v", "--verbose", action="count", default=None, help="more logging")
    parser.add_argument(
        "--color",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="colorize human-oriented output",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="convert a problem between dialects")
    p.add_argument("--from", dest="from_dialect", required=True, choices=["gclc", "exchange"])
    p.add_argument("--to", dest="to_dialect", required=True, choices=["gclc", "exchange", "ggb"])
    p.add_argument("input")
    p.add_argument("output")

    p = sub.add_parser("corpus", help="validate or list a problem corpus")
    corpus_sub = p.add_subparsers(dest="corpus_command", required=True)
    pv = corpus_sub.add_parser("validate", help="check every entry of a corpus")
    pv.add_argument("corpus_dir")
    pl = corpus_sub.add_parser("list", help="list problem ids, optionally filtered")
    pl.add_argument("corpus_dir")
    pl.add_argument("--axiom", action="append", default=None, help="filter by axiom system")
    pl.add_argument("--type", action="append", default=None, dest="ctype",
                    help="filter by conjecture type")

    p = sub.add_parser("run", help="execute the problems x adapters matrix")
    p.add_argument("--corpus", required=True, metavar="DIR")
    p.add_argument("--adapters", required=True, metavar="FILE")
    p.add_argument("--out", required=True, metavar="DIR")
    p.add_argument("--wall", type=float, default=None, help="wall limit per job, seconds")
    p.add_argument("--cpu", type=float, default=None, help="CPU limit per job, seconds")
    p.add_argument("--mem", type=int, default=None, help="memory limit per job, MiB")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--timing", choices=["parallel", "serial"], default=None)
    p.add_argument("--reps", type=int, default=None, help="repetitions per job")
    p.add_argument("--keep-workdirs", action="store_true")
    p.add_argument("--axiom", action="append", default=None)
    p.add_argument("--type", action="append", default=None, dest="ctype")

    p = sub.add_parser("score", help="adjudicate and rank a finished run")
    p.add_argument("--results", required=True, metavar="DIR")
    p.add_argument("--corpus", default=None, metavar="DIR",
                   help="corpus with ground truth; defaults to the run manifest")

    p = sub.add_parser("report", help="render leaderboard artifacts")
    p.add_argument("--results", required=True, metavar="DIR")
    p.add_argument("--format", default="html,csv,json", help="comma list of json,csv,html")
    p.add_argument("--out", required=True, metavar="DIR")

    p = sub.add_parser("serve", help="serve run status over HTTP")
    p.add_argument("--run", required=True, metavar="DIR")
    p.add_argument("--bind", default="127.0.0.1:8765", metavar="HOST:PORT")
    p.add_argument("--stale-after", type=float, default=60.0, metavar="S",
                   help="report 'incomplete' after this much log silence")

    p = sub.add_parser("watch", help="poll a service until the run finishes")
    p.add_argument("url")
    p.add_argument("--interval", type=float, default=2.0, metavar="S")
    p.add_argument("--retries", type=int, default=5, help="consecutive poll failures tolerated")

    return parser


def _load_config(args) -> dict:
    path = args.config or os.environ.get("GASC_CONFIG")
    if not path:
        return {}
    try:
        doc = load_json(path)
    except (OSError, json.JSONDecodeError) as exc:
        raise GascError(f"cannot read config file {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise GascError(f"config file {path} must hold a JSON object")
    return doc


def _run_setting(args, config: dict, name: str):
    value = getattr(args, name)
    if value is not None:
        return value
    run_section = config.get("run", {})
    if isinstance(run_section, dict) and name in run_section:
        return run_section[name]
    return RUN_DEFAULTS[name]


def _cmd_convert(args) -> int:
    if args.from_dialect == "gclc":
        try:
            text = Path(args.input).read_text(encoding="utf-8")
        except UnicodeDecodeError as exc:
            raise GascError(f"{args.input} is not UTF-8: {exc}") from exc
        problem = parse_gclc_subset(text)
    else:
        problem = read_exchange_file(args.input)
    if args.to_dialect == "gclc":
        Path(args.output).write_text(emit_gclc(problem), encoding="utf-8")
    elif args.to_dialect == "ggb":
        Path(args.output).write_text(emit_ggb_script(problem), encoding="utf-8")
    else:
        write_exchange_file(problem, args.output)
    return 0


def _resolve_color(args, config: dict) -> bool:
    if args.color is not None:
        return args.color
    if "color" in config:
        return bool(config["color"])
    return sys.stdout.isatty()


def _cmd_corpus(args, use_color: bool) -> int:
    paint = (lambda text, code: f"\x1b[{code}m{text}\x1b[0m") if use_color else (
        lambda text, code: text
    )
    if args.corpus_command == "validate":
        report = validate_corpus(args.corpus_dir)
        for entry in report.entries:
            status = paint("PASS", "32") if entry.ok else paint("FAIL", "31")
            pid = entry.problem_id or "?"
            print(f"{status} {pid} {entry.path}")
            for diag in entry.diagnostics:
                print(f"  - {diag}")
        print(f"{'OK' if report.ok else 'FAILED'}: {len(report.entries)} entries")
        return 0 if report.ok else 1
    corpus = load_corpus(args.corpus_dir)
    for entry in select_problems(corpus, axiom_systems=args.axiom, conjecture_types=args.ctype):
        print(entry.problem_id)
    return 0


def _cmd_run(args, config: dict) -> int:
    corpus = load_corpus(args.corpus)
    adapters = load_adapters(args.adapters)
    entries = select_problems(corpus, axiom_systems=args.axiom, conjecture_types=args.ctype)
    run_config = RunConfig(
        wall_limit_s=float(_run_setting(args, config, "wall")),
        cpu_limit_s=float(_run_setting(args, config, "cpu")),
        mem_limit_mib=int(_run_setting(args, config, "mem")),
        workers=int(_run_setting(args, config, "workers")),
        timing_mode=str(_run_setting(args, config, "timing")),
        repetitions=int(_run_setting(args, config, "reps")),
        keep_workdirs=args.keep_workdirs,
    )
    results = run_competition(entries, adapters, run_config, args.out)
    logging.getLogger("gasc").info(
        "run complete: %d records in %s", len(results["records"]), args.out
    )
    return 0


def _corpus_index_for_scoring(args, results):
    if args.corpus:
        return load_corpus(args.corpus).by_id()
    manifest = results.get("manifest") or {}
    problems = manifest.get("problems")
    if not problems:
        raise SchemaError("manifest.problems", "no ground truth; pass --corpus")
    return {p["id"]: p for p in problems}


def _cmd_score(args) -> int:
    results_dir = Path(args.results)
    results = load_json(results_dir / RESULTS_FILE)
    corpus_index = _corpus_index_for_scoring(args, results)
    adjudicated = adjudicate(results["records"], corpus_index, results_dir=results_dir)

    manifest = results.get("manifest") or {}
    readable = {
        adapter["name"]: adapter.get("readable_proofs", "not_available")
        for adapter in manifest.get("adapters", [])
    }
    ranking = rank(adjudicated, readable_flags=readable)
    write_canonical(results_dir / "ranking.json", ranking.to_dict())
    write_canonical(
        results_dir / "adjudicated.json",
        {"results": [a.to_dict() for a in adjudicated]},
    )
    print(canonical_dumps(ranking.to_dict(), indent=2))
    return 0


def _cmd_report(args) -> int:
    results_dir = Path(args.results)
    results = load_json(results_dir / RESULTS_FILE)
    ranking_path = results_dir / "ranking.json"
    if not ranking_path.is_file():
        raise GascError(f"no ranking.json in {results_dir}; run 'gasc score' first")
    ranking = load_json(ranking_path)
    adjudicated_path = results_dir / "adjudicated.json"
    adjudicated = load_json(adjudicated_path) if adjudicated_path.is_file() else None
    written = render(results, ranking, args.format, args.out, adjudicated=adjudicated)
    for path in written:
        print(path)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        config = _load_config(args)
        verbosity = args.verbose if args.verbose is not None else int(config.get("verbosity", 0))
        level = logging.WARNING if verbosity == 0 else (
            logging.INFO if verbosity == 1 else logging.DEBUG
        )
        logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s %(message)s")

        if args.command == "convert":
            return _cmd_convert(args)
        if args.command == "corpus":
            return _cmd_corpus(args, _resolve_color(args, config))
        if args.command == "run":
            return _cmd_run(args, config)
        if args.command == "score":
            return _cmd_score(args)
        if args.command == "report":
            return _cmd_report(args)
        if args.command == "serve":
            serve(args.run, args.bind, args.stale_after)
            return 0
        if args.command == "watch":
            return watch(args.url, args.interval, args.retries)
        parser.error(f"unknown command {args.command}")
        return 2
    except GascError as exc:
        print(f"gasc: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"gasc: {exc}", file=sys.stderr)
        return 1


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
