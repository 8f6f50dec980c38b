"""Render results and rankings as deterministic JSON, CSV, and static HTML.

Regenerating from the same inputs yields byte-identical files except for the
single generation-timestamp field, which callers may pin for reproducible
output. The HTML leaderboard is self-contained: inline styles, no scripts,
no external assets, so it can be archived as-is.
"""

from __future__ import annotations

import datetime as _dt
import html
import io
import csv
from pathlib import Path

from .errors import OutDirNotWritable, SchemaError
from .jsonutil import write_canonical
from .scoring import classify_validation_time

VERDICT_CELLS = {
    "Proved": "P",
    "Disproved": "D",
    "Unknown": "U",
    "Timeout": "T",
    "MemOut": "M",
    "Error": "E",
    "Unparseable": "X",
}
SKIP_CELL = "skip"

_CLASS_COLORS = {"Good": "#cdeccd", "Fair": "#f4e9bf", "Poor": "#f3cdc6"}


def _matrix(results: dict) -> dict:
    manifest = results.get("manifest")
    if not isinstance(manifest, dict):
        raise SchemaError("manifest", "results document has no manifest")
    if not isinstance(results.get("records"), list):
        raise SchemaError("records", "results document has no record list")
    problems = [p["id"] for p in manifest.get("problems", [])]
    adapters = sorted(a["name"] for a in manifest.get("adapters", []))
    skipped = {a["name"] for a in manifest.get("adapters", []) if a["status"] == "skipped"}

    # representative record per cell: minimum wall time across repetitions
    best: dict[tuple[str, str], dict] = {}
    for record in results["records"]:
        key = (record["problem_id"], record["adapter_name"])
        old = best.get(key)
        if old is None or (record["wall_time_s"], record["repetition_index"]) < (
            old["wall_time_s"],
            old["repetition_index"],
        ):
            best[key] = record

    cells = {}
    for pid in problems:
        row = {}
        for name in adapters:
            if name in skipped:
                row[name] = {"cell": SKIP_CELL}
                continue
            record = best.get((pid, name))
            if record is None:
                row[name] = {"cell": ""}
                continue
            row[name] = {
                "cell": VERDICT_CELLS.get(record["verdict"], "?"),
                "verdict": record["verdict"],
                "wall_time_s": record["wall_time_s"],
            }
        cells[pid] = row
    return {"problems": problems, "adapters": adapters, "cells": cells}


def _matrix_csv(matrix: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["problem_id", *matrix["adapters"]])
    for pid in matrix["problems"]:
        writer.writerow(
            [pid, *(matrix["cells"][pid][name]["cell"] for name in matrix["adapters"])]
        )
    return buf.getvalue()


def _db_column(adjudicated: dict | None) -> dict[str, str]:
    """Mean readability quotient per adapter, when adjudicated data is present."""
    if not adjudicated:
        return {}
    per_adapter: dict[str, list[float]] = {}
    for result in adjudicated.get("results", []):
        if result.get("db_factor") is not None:
            per_adapter.setdefault(result["adapter_name"], []).append(result["db_factor"])
    return {
        name: f"{sum(values) / len(values):.3f}" for name, values in per_adapter.items()
    }


def _leaderboard_html(results, ranking, matrix, db_column, generated_at) -> str:
    manifest = results["manifest"]
    esc = html.escape
    out = io.StringIO()
    out.write(
        "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n"
        "<title>GATP competition leaderboard</title>\n<style>\n"
        "body{font-family:sans-serif;margin:2em;color:#222}\n"
        "table{border-collapse:collapse;margin:1em 0}\n"
        "th,td{border:1px solid #999;padding:0.3em 0.6em;text-align:left}\n"
        "th{background:#e8e8f0}\ntd.num{text-align:right}\n"
        ".muted{color:#777}\n</style>\n</head>\n<body>\n"
    )
    out.write("<h1>GATP competition leaderboard</h1>\n")
    out.write(
        f"<p class=\"muted\">run {esc(str(manifest.get('run_id', '?')))} · "
        f"host {esc(str(manifest.get('host', {}).get('cpu_model', '?')))} · "
        f"tool {esc(str(manifest.get('tool_version', '?')))}</p>\n"
    )

    entries = ranking.get("entries", [])
    if not results["records"] and not entries:
        out.write("<p><strong>no records</strong></p>\n")
    out.write("<h2>Ranking</h2>\n<table>\n<tr><th>#</th><th>adapter</th><th>tier</th>"
              "<th>solved</th><th>incorrect</th><th>total time (s)</th>"
              "<th>good/fair/poor</th><th>readable proofs</th>"
              "<th>dB factor (informal/formal)</th></tr>\n")
    for i, entry in enumerate(entries, start=1):
        counts = entry.get("class_counts", {})
        out.write(
            "<tr>"
            f"<td class=\"num\">{i}</td>"
            f"<td>{esc(entry['adapter_name'])}</td>"
            f"<td class=\"num\">{entry['tier']}</td>"
            f"<td class=\"num\">{entry['solved']}</td>"
            f"<td class=\"num\">{entry['incorrect']}</td>"
            f"<td class=\"num\">{entry['total_time_s']:.3f}</td>"
            f"<td class=\"num\">{counts.get('good', 0)}/{counts.get('fair', 0)}/{counts.get('poor', 0)}</td>"
            f"<td>{esc(entry.get('readable_proofs', 'not_available'))}</td>"
            f"<td class=\"num\">{esc(db_column.get(entry['adapter_name'], 'n/a'))}</td>"
            "</tr>\n"
        )
    out.write("</table>\n")

    out.write("<h2>Per-problem matrix</h2>\n<table id=\"matrix\">\n<tr><th>problem</th>")
    for name in matrix["adapters"]:
        out.write(f"<th>{esc(name)}</th>")
    out.write("</tr>\n")
    for pid in matrix["problems"]:
        out.write(f"<tr><td>{esc(pid)}</td>")
        for name in matrix["adapters"]:
            cell = matrix["cells"][pid][name]
            text = cell["cell"]
            style = ""
            if "wall_time_s" in cell and cell["verdict"] in ("Proved", "Disproved"):
                klass = classify_validation_time(cell["wall_time_s"])
                style = f" style=\"background:{_CLASS_COLORS[klass]}\""
                text = f"{cell['cell']} {cell['wall_time_s']:.2f}s"
            out.write(f"<td{style}>{esc(text)}</td>")
        out.write("</tr>\n")
    out.write("</table>\n")
    out.write(
        "<p class=\"muted\">cells: P proved, D disproved, U unknown, T timeout, "
        "M memory out, E error, X unparseable, skip adapter not installed; "
        "green/yellow/red shading marks validation-time classes "
        "(&le;1.5s / &le;3s / slower)</p>\n"
    )
    out.write(f"<p class=\"muted\">generated at {esc(generated_at)}</p>\n</body>\n</html>\n")
    return out.getvalue()


def render(
    results: dict,
    ranking: dict,
    formats,
    out_dir,
    adjudicated: dict | None = None,
    generated_at: str | None = None,
) -> list[Path]:
    """Write the requested report files; returns the paths written."""
    if generated_at is None:
        generated_at = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    if isinstance(formats, str):
        formats = [f.strip() for f in formats.split(",") if f.strip()]
    unknown = set(formats) - {"json", "csv", "html"}
    if unknown:
        raise SchemaError("format", f"unknown formats {sorted(unknown)}")
    if not isinstance(ranking, dict) or "entries" not in ranking:
        raise SchemaError("entries", "ranking document has no entries")

    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OutDirNotWritable(f"{out_dir}: {exc}") from exc

    matrix = _matrix(results)
    db_column = _db_column(adjudicated)
    written = []
    if "json" in formats:
        path = out_dir / "report.json"
        write_canonical(
            path,
            {
                "generated_at": generated_at,
                "manifest": results["manifest"],
                "ranking": ranking,
                "matrix": matrix,
            },
        )
        written.append(path)
    if "csv" in formats:
        path = out_dir / "matrix.csv"
        path.write_text(_matrix_csv(matrix), encoding="utf-8")
        written.append(path)
    if "html" in formats:
        path = out_dir / "leaderboard.html"
        path.write_text(
            _leaderboard_html(results, ranking, matrix, db_column, generated_at),
            encoding="utf-8",
        )
        written.append(path)
    return written
