"""Domain model for geometric problems.

A problem is a straight-line construction (free points with coordinates,
then derived objects) plus one conjecture over the constructed points.
Values are immutable; validation is a separate pass so partially built
values can exist in tests.

Coordinates are kept as the literal decimal strings they were written with,
so emitting a problem never re-formats numbers and round trips are
byte-exact.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import ArityError, Redefinition, SchemaError, UndefinedName

# op name -> (argument kinds, result kind)
OPERATIONS: dict[str, tuple[tuple[str, ...], str]] = {
    "line": (("point", "point"), "line"),
    "intersection": (("line", "line"), "point"),
    "midpoint": (("point", "point"), "point"),
    "parallel_through": (("line", "point"), "line"),
    "perpendicular_through": (("line", "point"), "line"),
    "foot": (("point", "line"), "point"),
    "circle": (("point", "point"), "circle"),
}

CONJECTURE_ARITY: dict[str, int] = {
    "collinear": 3,
    "parallel": 4,
    "perpendicular": 4,
    "midpoint": 3,
    "equal_distance": 4,
    "concyclic": 4,
}

NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9']*\Z")
PROBLEM_ID_RE = re.compile(r"GEO\d{4}\Z")
COORD_RE = re.compile(r"-?\d+(?:\.\d+)?\Z")

DEFAULT_PROBLEM_ID = "GEO0000"


@dataclass(frozen=True)
class FreePoint:
    name: str
    x: str
    y: str


@dataclass(frozen=True)
class Step:
    op: str
    args: tuple[str, ...]
    out: tuple[str, ...]


@dataclass(frozen=True)
class Construction:
    free_points: tuple[FreePoint, ...]
    steps: tuple[Step, ...]


@dataclass(frozen=True)
class Conjecture:
    predicate: str
    args: tuple[str, ...]


@dataclass(frozen=True)
class GeoProblem:
    id: str
    construction: Construction
    conjecture: Conjecture


def name_kinds(construction: Construction) -> dict[str, str]:
    """Map every defined name to its kind, checking definitions as we go."""
    kinds: dict[str, str] = {}
    for fp in construction.free_points:
        _check_name(fp.name)
        if fp.name in kinds:
            raise Redefinition(fp.name)
        for coord in (fp.x, fp.y):
            if not isinstance(coord, str) or not COORD_RE.match(coord):
                raise SchemaError(f"free point {fp.name}", f"bad coordinate {coord!r}")
        kinds[fp.name] = "point"
    for step in construction.steps:
        if step.op not in OPERATIONS:
            raise ArityError(f"unknown operation {step.op!r}")
        arg_kinds, out_kind = OPERATIONS[step.op]
        if len(step.args) != len(arg_kinds):
            raise ArityError(
                f"{step.op} takes {len(arg_kinds)} arguments, got {len(step.args)}"
            )
        if len(step.out) != 1:
            raise ArityError(f"{step.op} produces one result, got {len(step.out)}")
        for arg, want in zip(step.args, arg_kinds):
            got = kinds.get(arg)
            if got is None:
                raise UndefinedName(arg, f"argument of {step.op}")
            if got != want:
                raise ArityError(f"{step.op} expects a {want} but {arg!r} is a {got}")
        result = step.out[0]
        _check_name(result)
        if result in kinds:
            raise Redefinition(result)
        kinds[result] = out_kind
    return kinds


def validate_problem(problem: GeoProblem) -> None:
    """Raise a diagnostic if the problem violates any structural invariant."""
    if not PROBLEM_ID_RE.match(problem.id):
        raise SchemaError("id", f"{problem.id!r} does not match GEO followed by 4 digits")
    if not problem.construction.free_points:
        raise SchemaError("free_points", "a construction needs at least one free point")
    kinds = name_kinds(problem.construction)
    conj = problem.conjecture
    arity = CONJECTURE_ARITY.get(conj.predicate)
    if arity is None:
        raise ArityError(f"unknown predicate {conj.predicate!r}")
    if len(conj.args) != arity:
        raise ArityError(f"{conj.predicate} takes {arity} points, got {len(conj.args)}")
    for arg in conj.args:
        got = kinds.get(arg)
        if got is None:
            raise UndefinedName(arg, "conjecture argument")
        if got != "point":
            raise ArityError(f"conjecture arguments must be points, {arg!r} is a {got}")


def _check_name(name: str) -> None:
    if not isinstance(name, str) or not NAME_RE.match(name):
        raise SchemaError("name", f"{name!r} is not a valid identifier")
