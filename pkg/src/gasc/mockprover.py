"""Mock prover used for hermetic competition runs and harness tests.

Behaviors (exact output lines matter; adapters match on them):

    prove     print "RESULT: proved" after the requested delays, exit 0
    disprove  print "RESULT: disproved", exit 0
    oracle    answer from --answers JSON (problem id -> proved/disproved/open);
              open and unknown ids are answered "proved"
    wrong     always "RESULT: proved" regardless of problem
    hang      sleep forever (until killed)
    crash     exit 3 with no output
    garbage   print random text that matches no classification rule

The problem id is taken from the input file name (GEO####), falling back to
a content scan. ``--burn-cpu S`` spins until total process CPU reaches S;
``--delay-wall S`` sleeps until S wall seconds have passed since start, so
interpreter startup is included in both budgets.
"""

from __future__ import annotations

import argparse
import fcntl
import json
import os
import random
import re
import signal
import subprocess
import sys
import time

_START = time.monotonic()
_ID_RE = re.compile(r"GEO\d{4}")

PROOF_TEXT = """theorem: stated conjecture
stage 1: normalize construction
stage 2: translate to invariant expressions
stage 3: eliminate constructed points in reverse order
stage 4: reduce to canonical form
stage 5: canonical form is zero
conclusion: conjecture holds
"""


def _problem_id(input_path: str) -> str:
    m = _ID_RE.search(os.path.basename(input_path))
    if m:
        return m.group()
    try:
        with open(input_path, "r", encoding="utf-8", errors="replace") as fh:
            m = _ID_RE.search(fh.read(65536))
            if m:
                return m.group()
    except OSError:
        pass
    return "GEO0000"


def _burn_cpu(target_s: float) -> None:
    # busy loop; process_time counts user+system since interpreter start
    while time.process_time() < target_s:
        pass


def _delay_wall(target_s: float) -> None:
    remaining = target_s - (time.monotonic() - _START)
    if remaining > 0:
        time.sleep(remaining)


def _load_answers(answers_path: str) -> dict:
    # relative paths are tried as-is, then against the directory the
    # competition was launched from (the runner exports GASC_RUN_ROOT)
    candidates = [answers_path]
    run_root = os.environ.get("GASC_RUN_ROOT")
    if run_root and not os.path.isabs(answers_path):
        candidates.append(os.path.join(run_root, answers_path))
    for candidate in candidates:
        try:
            with open(candidate, "r", encoding="utf-8") as fh:
                return json.load(fh)
        except FileNotFoundError:
            continue
        except (OSError, json.JSONDecodeError) as exc:
            print(f"mockprover: cannot read answers file: {exc}", file=sys.stderr)
            return {}
    print(f"mockprover: no answers file at {candidates}", file=sys.stderr)
    return {}


def _answer(behavior: str, problem_id: str, answers_path: str | None) -> str:
    if behavior == "prove":
        return "proved"
    if behavior == "disprove":
        return "disproved"
    if behavior == "wrong":
        return "proved"
    # oracle
    table = _load_answers(answers_path) if answers_path else {}
    expected = table.get(problem_id, "proved")
    return "disproved" if expected == "disproved" else "proved"


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="gasc-mockprover", description=__doc__)
    parser.add_argument(
        "--behavior",
        required=True,
        choices=["prove", "disprove", "oracle", "wrong", "hang", "crash", "garbage"],
    )
    parser.add_argument("--delay-wall", type=float, default=0.0, metavar="S")
    parser.add_argument("--burn-cpu", type=float, default=0.0, metavar="S")
    parser.add_argument("--answers", default=None, metavar="FILE")
    parser.add_argument("--alloc-mib", type=int, default=0, metavar="MIB")
    parser.add_argument("--spawn-child", type=int, default=0, metavar="N")
    parser.add_argument("--ignore-term", action="store_true")
    parser.add_argument("--probe-lock", default=None, metavar="FILE")
    parser.add_argument("--marker", default=None, help="inert tag, visible in the command line")
    parser.add_argument("input")
    args = parser.parse_args(argv)

    if args.ignore_term:
        signal.signal(signal.SIGTERM, signal.SIG_IGN)

    lock_fh = None
    if args.probe_lock:
        # flock is released by the kernel even if we are killed, so a probe
        # failure really means another job is running right now
        lock_fh = open(args.probe_lock, "a")
        try:
            fcntl.flock(lock_fh, fcntl.LOCK_EX | fcntl.LOCK_NB)
        except OSError:
            print("LOCK_CONFLICT", file=sys.stderr, flush=True)

    ballast = None
    if args.alloc_mib:
        ballast = bytearray(args.alloc_mib * 1024 * 1024)
        for i in range(0, len(ballast), 4096):
            ballast[i] = 120  # touch pages so they stay resident

    children = []
    for _ in range(args.spawn_child):
        cmd = [sys.executable, "-m", "gasc.mockprover", "--behavior", "hang"]
        if args.ignore_term:
            cmd.append("--ignore-term")
        if args.marker:
            cmd += ["--marker", args.marker]
        cmd.append(os.devnull)
        children.append(subprocess.Popen(cmd))

    try:
        if args.burn_cpu:
            _burn_cpu(args.burn_cpu)
        if args.delay_wall:
            _delay_wall(args.delay_wall)

        if args.behavior == "hang":
            while True:
                time.sleep(3600)
        if args.behavior == "crash":
            return 3
        if args.behavior == "garbage":
            rng = random.Random()
            for _ in range(5):
                print(f"noise {rng.getrandbits(64):016x}")
            return 0

        problem_id = _problem_id(args.input)
        print(f"PROBLEM: {problem_id}")
        print(f"RESULT: {_answer(args.behavior, problem_id, args.answers)}")
        with open(f"{problem_id}.proof", "w", encoding="utf-8") as fh:
            fh.write(f"problem {problem_id}\n{PROOF_TEXT}")
        return 0
    finally:
        if lock_fh is not None:
            lock_fh.close()


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
