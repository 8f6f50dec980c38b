"""One-way filter to a GeoGebra-style command script.

One construction command per line, no spaces inside calls, final line is a
single Prove(...) whose boolean encodes the conjecture:

    collinear A B C        Prove(AreCollinear(A,B,C))
    parallel A B C D       Prove(AreParallel(Line(A,B),Line(C,D)))
    perpendicular A B C D  Prove(ArePerpendicular(Line(A,B),Line(C,D)))
    midpoint M A B         Prove(AreEqual(Distance(M,A),Distance(M,B)))
    equal_distance A B C D Prove(AreEqual(Distance(A,B),Distance(C,D)))
    concyclic A B C D      Prove(AreConcyclic(A,B,C,D))
"""

from __future__ import annotations

from .model import GeoProblem, Step


def _command(step: Step) -> str:
    out = step.out[0]
    a = step.args
    if step.op == "line":
        return f"{out}=Line({a[0]},{a[1]})"
    if step.op == "intersection":
        return f"{out}=Intersect({a[0]},{a[1]})"
    if step.op == "midpoint":
        return f"{out}=Midpoint({a[0]},{a[1]})"
    if step.op == "parallel_through":
        return f"{out}=Line({a[1]},{a[0]})"
    if step.op == "perpendicular_through":
        return f"{out}=PerpendicularLine({a[1]},{a[0]})"
    if step.op == "foot":
        return f"{out}=ClosestPoint({a[1]},{a[0]})"
    if step.op == "circle":
        return f"{out}=Circle({a[0]},{a[1]})"
    raise ValueError(f"no GeoGebra mapping for operation {step.op!r}")


def _prove_line(predicate: str, args: tuple[str, ...]) -> str:
    a = args
    if predicate == "collinear":
        body = f"AreCollinear({a[0]},{a[1]},{a[2]})"
    elif predicate == "parallel":
        body = f"AreParallel(Line({a[0]},{a[1]}),Line({a[2]},{a[3]}))"
    elif predicate == "perpendicular":
        body = f"ArePerpendicular(Line({a[0]},{a[1]}),Line({a[2]},{a[3]}))"
    elif predicate == "midpoint":
        body = f"AreEqual(Distance({a[0]},{a[1]}),Distance({a[0]},{a[2]}))"
    elif predicate == "equal_distance":
        body = f"AreEqual(Distance({a[0]},{a[1]}),Distance({a[2]},{a[3]}))"
    elif predicate == "concyclic":
        body = f"AreConcyclic({a[0]},{a[1]},{a[2]},{a[3]})"
    else:
        raise ValueError(f"no GeoGebra mapping for predicate {predicate!r}")
    return f"Prove({body})"


def emit_ggb_script(problem: GeoProblem) -> str:
    lines = [f"# {problem.id}"]
    for fp in problem.construction.free_points:
        lines.append(f"{fp.name}=({fp.x},{fp.y})")
    for step in problem.construction.steps:
        lines.append(_command(step))
    lines.append(_prove_line(problem.conjecture.predicate, problem.conjecture.args))
    return "\n".join(lines) + "\n"
