"""Seeded random problem and corpus generators for tests and scale runs."""

from __future__ import annotations

import random
import string
from pathlib import Path

from .geoform import (
    CONJECTURE_ARITY,
    OPERATIONS,
    Conjecture,
    Construction,
    FreePoint,
    GeoProblem,
    Step,
    validate_problem,
)
from .geoform.exchange import write_exchange_file
from .jsonutil import write_canonical

AXIOM_SYSTEMS = ("neutral", "euclidean", "hyperbolic", "projective", "other")
CONJECTURE_TYPES = ("constructive", "ruler_compass", "inequality", "other")


def _fresh_name(rng: random.Random, taken: set[str]) -> str:
    while True:
        name = rng.choice(string.ascii_uppercase)
        if rng.random() < 0.3:
            name += rng.choice("0123456789'")
        if name not in taken:
            taken.add(name)
            return name


def _coord(rng: random.Random) -> str:
    whole = rng.randint(-99, 99)
    if rng.random() < 0.4:
        return f"{whole}.{rng.randint(0, 99):02d}"
    return str(whole)


def random_problem(rng: random.Random, problem_id: str = "GEO0000", max_steps: int = 20) -> GeoProblem:
    """A structurally valid random problem with at most max_steps construction lines."""
    taken: set[str] = set()
    by_kind: dict[str, list[str]] = {"point": [], "line": [], "circle": []}

    n_free = rng.randint(2, min(4, max_steps - 1) if max_steps > 2 else 2)
    free_points = []
    for _ in range(n_free):
        name = _fresh_name(rng, taken)
        by_kind["point"].append(name)
        free_points.append(FreePoint(name, _coord(rng), _coord(rng)))

    steps = []
    n_steps = rng.randint(0, max(0, max_steps - n_free))
    for _ in range(n_steps):
        feasible = [
            op
            for op, (arg_kinds, _) in OPERATIONS.items()
            if all(by_kind[k] for k in arg_kinds)
        ]
        op = rng.choice(feasible)
        arg_kinds, out_kind = OPERATIONS[op]
        args = tuple(rng.choice(by_kind[k]) for k in arg_kinds)
        out = _fresh_name(rng, taken)
        by_kind[out_kind].append(out)
        steps.append(Step(op, args, (out,)))

    predicate = rng.choice(sorted(CONJECTURE_ARITY))
    conj_args = tuple(
        rng.choice(by_kind["point"]) for _ in range(CONJECTURE_ARITY[predicate])
    )
    problem = GeoProblem(
        id=problem_id,
        construction=Construction(tuple(free_points), tuple(steps)),
        conjecture=Conjecture(predicate, conj_args),
    )
    validate_problem(problem)
    return problem


def generate_corpus(out_dir, count: int, seed: int = 0, name: str = "synthetic") -> Path:
    """Write a corpus of `count` random problems; returns the manifest path.

    Also writes answers.json (problem id -> expected status) so mock provers
    can answer from ground truth.
    """
    rng = random.Random(seed)
    out_dir = Path(out_dir)
    problems_dir = out_dir / "problems"
    problems_dir.mkdir(parents=True, exist_ok=True)

    entries = []
    answers = {}
    for i in range(1, count + 1):
        problem_id = f"GEO{i:04d}"
        problem = random_problem(rng, problem_id=problem_id)
        rel = f"problems/{problem_id}.gf.json"
        write_exchange_file(problem, out_dir / rel)
        expected = rng.choices(["proved", "disproved", "open"], weights=[7, 2, 1])[0]
        entries.append(
            {
                "problem": rel,
                "axiom_system": rng.choice(AXIOM_SYSTEMS),
                "conjecture_type": rng.choice(CONJECTURE_TYPES),
                "expected_status": expected,
                "source": f"{name} generator seed={seed}",
            }
        )
        answers[problem_id] = expected

    manifest_path = out_dir / "corpus.json"
    write_canonical(manifest_path, {"name": name, "version": "1", "entries": entries})
    write_canonical(out_dir / "answers.json", answers)
    return manifest_path
