"""Run one command under wall/CPU/memory limits, measuring the process tree.

The child starts in its own session so the whole tree can be signalled as a
group. A sampling loop (default every 15 ms) walks the tree via psutil,
accumulating CPU time (user+system of every live process plus the reaped
children already folded into parents) and resident-set peaks. On a limit
breach the group gets SIGTERM, then SIGKILL after the grace period. The
root's final CPU numbers are read from its zombie entry before reaping, so
single-process jobs are measured to scheduler-tick precision without
cgroups.

Known limitation, accepted for a cgroup-free harness: CPU burned by a
descendant that dies and is reaped by an exiting intermediate parent between
two samples can be undercounted.
"""

from __future__ import annotations

import os
import signal
import subprocess
import threading
import time
from dataclasses import dataclass

import psutil

from .errors import SpawnFailure

OUTPUT_CAP = 65536  # bytes kept per stream


@dataclass
class Limits:
    wall_s: float
    cpu_s: float
    mem_mib: float
    grace_kill_s: float = 0.5


@dataclass
class Measurement:
    wall_s: float
    cpu_s: float
    max_rss_mib: float
    exit_code: int | None
    stdout: bytes
    stderr: bytes
    limit_breach: str | None  # "wall" | "cpu" | "mem" | None


class _Drain(threading.Thread):
    """Read a pipe to EOF, keeping only the first OUTPUT_CAP bytes."""

    def __init__(self, stream, cap=OUTPUT_CAP):
        super().__init__(daemon=True)
        self.stream = stream
        self.cap = cap
        self.data = bytearray()
        self.start()

    def run(self):
        try:
            while True:
                chunk = self.stream.read(65536)
                if not chunk:
                    return
                room = self.cap - len(self.data)
                if room > 0:
                    self.data += chunk[:room]
        except (OSError, ValueError):
            return


def _proc_cpu(proc: psutil.Process) -> float:
    t = proc.cpu_times()
    total = t.user + t.system
    # children_user/children_system carry CPU of descendants this process reaped
    total += getattr(t, "children_user", 0.0) + getattr(t, "children_system", 0.0)
    return total


def _sample(root: psutil.Process, tracked: dict[int, psutil.Process]) -> tuple[float, float]:
    """One pass over the tree: returns (cpu seconds, rss bytes)."""
    try:
        for child in root.children(recursive=True):
            tracked.setdefault(child.pid, child)
    except psutil.Error:
        pass
    cpu = 0.0
    rss = 0
    for proc in [root, *tracked.values()]:
        try:
            cpu += _proc_cpu(proc)
            rss += proc.memory_info().rss
        except psutil.Error:
            continue
    return cpu, rss


def _signal_group(pgid: int, sig: int) -> None:
    try:
        os.killpg(pgid, sig)
    except (ProcessLookupError, PermissionError):
        pass


def _kill_stragglers(pgid: int, tracked: dict[int, psutil.Process]) -> None:
    _signal_group(pgid, signal.SIGKILL)
    for proc in tracked.values():
        try:
            proc.kill()
        except psutil.Error:
            pass


def measure_job(
    argv,
    limits: Limits,
    *,
    cwd=None,
    env=None,
    poll_interval_s: float = 0.015,
) -> Measurement:
    """Execute argv under limits; raises SpawnFailure if it cannot start."""
    try:
        proc = subprocess.Popen(
            list(argv),
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
            cwd=cwd,
            env=env,
            start_new_session=True,
        )
    except OSError as exc:
        raise SpawnFailure(f"cannot spawn {argv[0]!r}: {exc}") from exc

    start = time.monotonic()
    out_drain = _Drain(proc.stdout)
    err_drain = _Drain(proc.stderr)
    pgid = proc.pid  # own session, so pgid == pid
    tracked: dict[int, psutil.Process] = {}
    max_cpu = 0.0
    max_rss = 0
    breach: str | None = None
    kill_deadline: float | None = None
    hard_killed = False
    give_up_at: float | None = None

    try:
        root = psutil.Process(proc.pid)
    except psutil.NoSuchProcess:
        root = None

    while root is not None:
        try:
            if root.status() == psutil.STATUS_ZOMBIE:
                break
        except psutil.NoSuchProcess:
            break

        cpu, rss = _sample(root, tracked)
        max_cpu = max(max_cpu, cpu)
        max_rss = max(max_rss, rss)
        now = time.monotonic()

        if breach is None:
            if now - start >= limits.wall_s:
                breach = "wall"
            elif cpu > limits.cpu_s:
                breach = "cpu"
            elif rss > limits.mem_mib * 1024 * 1024:
                breach = "mem"
            if breach is not None:
                _signal_group(pgid, signal.SIGTERM)
                kill_deadline = now + limits.grace_kill_s
        elif not hard_killed and kill_deadline is not None and now >= kill_deadline:
            _kill_stragglers(pgid, tracked)
            hard_killed = True
            give_up_at = now + 10.0
        elif give_up_at is not None and now >= give_up_at:
            break  # unreapable (e.g. uninterruptible sleep); stop waiting

        time.sleep(poll_interval_s)

    wall = time.monotonic() - start
    if root is not None:
        cpu, rss = _sample(root, tracked)  # zombie stat is still readable here
        max_cpu = max(max_cpu, cpu)
        max_rss = max(max_rss, rss)
    _kill_stragglers(pgid, tracked)  # the job is over; nothing may outlive it

    try:
        exit_code = proc.wait(timeout=10)
    except subprocess.TimeoutExpired:
        exit_code = None
    out_drain.join(timeout=5)
    err_drain.join(timeout=5)

    return Measurement(
        wall_s=wall,
        cpu_s=max_cpu,
        max_rss_mib=max_rss / (1024 * 1024),
        exit_code=exit_code,
        stdout=bytes(out_drain.data),
        stderr=bytes(err_drain.data),
        limit_breach=breach,
    )
