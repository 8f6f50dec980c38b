"""The .gf.json exchange format, the lingua franca between dialect filters.

Document shape:

    {
      "id": "GEO0001",
      "free_points": [{"name": "A", "x": "10", "y": "10"}, ...],
      "steps": [{"op": "midpoint", "args": ["A", "B"], "out": ["M"]}, ...],
      "conjecture": {"predicate": "midpoint", "args": ["M", "A", "B"]}
    }

Coordinates are JSON strings so the decimal text survives round trips
without float re-formatting. Unknown extra fields are ignored.
"""

from __future__ import annotations

import json
from pathlib import Path

from ..errors import SchemaError
from .model import (
    Conjecture,
    Construction,
    FreePoint,
    GeoProblem,
    Step,
    validate_problem,
)


def write_exchange(problem: GeoProblem) -> dict:
    return {
        "id": problem.id,
        "free_points": [
            {"name": fp.name, "x": fp.x, "y": fp.y}
            for fp in problem.construction.free_points
        ],
        "steps": [
            {"op": s.op, "args": list(s.args), "out": list(s.out)}
            for s in problem.construction.steps
        ],
        "conjecture": {
            "predicate": problem.conjecture.predicate,
            "args": list(problem.conjecture.args),
        },
    }


def read_exchange(doc) -> GeoProblem:
    if not isinstance(doc, dict):
        raise SchemaError("$", "document must be a JSON object")
    problem_id = _string(doc, "id", "id")
    free_points = []
    for i, item in enumerate(_array(doc, "free_points")):
        path = f"free_points[{i}]"
        if not isinstance(item, dict):
            raise SchemaError(path, "must be an object")
        free_points.append(
            FreePoint(
                _string(item, "name", f"{path}.name"),
                _coord(item, "x", f"{path}.x"),
                _coord(item, "y", f"{path}.y"),
            )
        )
    steps = []
    for i, item in enumerate(_array(doc, "steps")):
        path = f"steps[{i}]"
        if not isinstance(item, dict):
            raise SchemaError(path, "must be an object")
        steps.append(
            Step(
                _string(item, "op", f"{path}.op"),
                tuple(_name_list(item, "args", f"{path}.args")),
                tuple(_name_list(item, "out", f"{path}.out")),
            )
        )
    conj = doc.get("conjecture")
    if conj is None:
        raise SchemaError("conjecture")
    if not isinstance(conj, dict):
        raise SchemaError("conjecture", "must be an object")
    conjecture = Conjecture(
        _string(conj, "predicate", "conjecture.predicate"),
        tuple(_name_list(conj, "args", "conjecture.args")),
    )
    problem = GeoProblem(
        id=problem_id,
        construction=Construction(tuple(free_points), tuple(steps)),
        conjecture=conjecture,
    )
    validate_problem(problem)
    return problem


def write_exchange_file(problem: GeoProblem, path) -> Path:
    path = Path(path)
    path.write_text(
        json.dumps(write_exchange(problem), indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
    return path


def read_exchange_file(path) -> GeoProblem:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"not valid JSON: {exc}") from exc
    return read_exchange(doc)


def _string(obj: dict, key: str, path: str) -> str:
    value = obj.get(key)
    if value is None:
        raise SchemaError(path)
    if not isinstance(value, str):
        raise SchemaError(path, "must be a string")
    return value


def _coord(obj: dict, key: str, path: str) -> str:
    value = obj.get(key)
    if value is None:
        raise SchemaError(path)
    if isinstance(value, int) and not isinstance(value, bool):
        return str(value)
    if not isinstance(value, str):
        raise SchemaError(path, "must be a decimal string")
    return value


def _array(obj: dict, key: str) -> list:
    value = obj.get(key)
    if value is None:
        raise SchemaError(key)
    if not isinstance(value, list):
        raise SchemaError(key, "must be an array")
    return value


def _name_list(obj: dict, key: str, path: str) -> list[str]:
    value = obj.get(key)
    if value is None:
        raise SchemaError(path)
    if not isinstance(value, list):
        raise SchemaError(path, "must be an array")
    out = []
    for i, item in enumerate(value):
        if not isinstance(item, str):
            raise SchemaError(f"{path}[{i}]", "must be a string")
        out.append(item)
    return out
