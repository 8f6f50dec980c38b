"""Parser and emitter for the gcl construction dialect.

The dialect is line oriented, one statement per line, ``%`` starts a comment.

    problem GEO0001                      optional, defaults to GEO0000
    point <P> <x> <y>                    free point with decimal coordinates
    line <l> <P> <Q>                     line through two points
    intersection <P> <l> <m>             intersection of two lines
    midpoint <M> <P> <Q>
    parallel <m> <l> <P>                 line through P parallel to l
    perpendicular <m> <l> <P>            line through P perpendicular to l
    foot <F> <P> <l>                     foot of the perpendicular from P to l
    circle <c> <O> <P>                   circle centered at O through P
    prove { <predicate> <points...> }    exactly one per problem

Identifiers are ``[A-Za-z][A-Za-z0-9']*``; every name must be defined before
use and defined only once. No macros, no includes, one problem per file.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import (
    ArityError,
    LexError,
    MissingConjecture,
    Redefinition,
    UndefinedName,
)
from .model import (
    CONJECTURE_ARITY,
    DEFAULT_PROBLEM_ID,
    NAME_RE,
    OPERATIONS,
    PROBLEM_ID_RE,
    Conjecture,
    Construction,
    FreePoint,
    GeoProblem,
    Step,
    validate_problem,
)

# statement keyword -> model op
KEYWORD_TO_OP = {
    "line": "line",
    "intersection": "intersection",
    "midpoint": "midpoint",
    "parallel": "parallel_through",
    "perpendicular": "perpendicular_through",
    "foot": "foot",
    "circle": "circle",
}
OP_TO_KEYWORD = {op: kw for kw, op in KEYWORD_TO_OP.items()}

# word tokens may carry underscores (predicates like equal_distance);
# defined names are restricted further when they are introduced
_TOKEN_RE = re.compile(r"[A-Za-z][A-Za-z0-9_']*|-?\d+(?:\.\d+)?|[{}]")
_WS_RE = re.compile(r"[ \t\r]+")


@dataclass(frozen=True)
class _Token:
    text: str
    kind: str  # name | number | lbrace | rbrace
    line: int
    col: int


def _tokenize_line(text: str, lineno: int) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        ws = _WS_RE.match(text, pos)
        if ws:
            pos = ws.end()
            continue
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise LexError(f"unknown token {text[pos]!r}", lineno, pos + 1)
        lexeme = m.group()
        if lexeme == "{":
            kind = "lbrace"
        elif lexeme == "}":
            kind = "rbrace"
        elif lexeme[0].isalpha():
            kind = "name"
        else:
            kind = "number"
        tokens.append(_Token(lexeme, kind, lineno, pos + 1))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self):
        self.problem_id: str | None = None
        self.free_points: list[FreePoint] = []
        self.steps: list[Step] = []
        self.conjecture: Conjecture | None = None
        self.kinds: dict[str, str] = {}

    def feed(self, tokens: list[_Token]) -> None:
        head = tokens[0]
        if head.kind != "name":
            raise LexError(f"expected a statement keyword, got {head.text!r}", head.line, head.col)
        if head.text == "problem":
            self._problem(tokens)
        elif head.text == "point":
            self._point(tokens)
        elif head.text == "prove":
            self._prove(tokens)
        elif head.text in KEYWORD_TO_OP:
            self._step(tokens)
        else:
            raise LexError(f"unknown statement {head.text!r}", head.line, head.col)

    def _problem(self, tokens):
        head = tokens[0]
        if self.problem_id is not None:
            raise LexError("duplicate problem line", head.line, head.col)
        if len(tokens) != 2 or tokens[1].kind != "name":
            raise LexError("expected: problem <id>", head.line, head.col)
        ident = tokens[1].text
        if not PROBLEM_ID_RE.match(ident):
            raise LexError(f"problem id {ident!r} must look like GEO0001", tokens[1].line, tokens[1].col)
        self.problem_id = ident

    def _point(self, tokens):
        head = tokens[0]
        if len(tokens) != 4:
            raise ArityError(f"point takes a name and two coordinates (line {head.line})")
        name_tok, x_tok, y_tok = tokens[1], tokens[2], tokens[3]
        if name_tok.kind != "name":
            raise LexError("point name expected", name_tok.line, name_tok.col)
        for tok in (x_tok, y_tok):
            if tok.kind != "number":
                raise LexError(f"coordinate expected, got {tok.text!r}", tok.line, tok.col)
        self._define(name_tok, "point")
        self.free_points.append(FreePoint(name_tok.text, x_tok.text, y_tok.text))

    def _step(self, tokens):
        head = tokens[0]
        op = KEYWORD_TO_OP[head.text]
        arg_kinds, out_kind = OPERATIONS[op]
        if len(tokens) != 2 + len(arg_kinds):
            raise ArityError(
                f"{head.text} takes a result name and {len(arg_kinds)} arguments (line {head.line})"
            )
        for tok in tokens[1:]:
            if tok.kind != "name":
                raise LexError(f"identifier expected, got {tok.text!r}", tok.line, tok.col)
        out_tok = tokens[1]
        args = []
        for tok, want in zip(tokens[2:], arg_kinds):
            got = self.kinds.get(tok.text)
            if got is None:
                raise UndefinedName(tok.text, f"line {tok.line}")
            if got != want:
                raise ArityError(
                    f"{head.text} expects a {want} but {tok.text!r} is a {got} (line {tok.line})"
                )
            args.append(tok.text)
        self._define(out_tok, out_kind)
        self.steps.append(Step(op, tuple(args), (out_tok.text,)))

    def _prove(self, tokens):
        head = tokens[0]
        if self.conjecture is not None:
            raise LexError("more than one prove block", head.line, head.col)
        if len(tokens) < 4 or tokens[1].kind != "lbrace" or tokens[-1].kind != "rbrace":
            raise LexError("expected: prove { <predicate> <points...> }", head.line, head.col)
        inner = tokens[2:-1]
        if not inner:
            raise LexError("empty prove block", head.line, head.col)
        pred_tok = inner[0]
        arity = CONJECTURE_ARITY.get(pred_tok.text)
        if pred_tok.kind != "name" or arity is None:
            raise LexError(f"unknown predicate {pred_tok.text!r}", pred_tok.line, pred_tok.col)
        arg_toks = inner[1:]
        if len(arg_toks) != arity:
            raise ArityError(
                f"{pred_tok.text} takes {arity} points, got {len(arg_toks)} (line {head.line})"
            )
        args = []
        for tok in arg_toks:
            if tok.kind != "name":
                raise LexError(f"point name expected, got {tok.text!r}", tok.line, tok.col)
            got = self.kinds.get(tok.text)
            if got is None:
                raise UndefinedName(tok.text, f"line {tok.line}")
            if got != "point":
                raise ArityError(f"conjecture arguments must be points, {tok.text!r} is a {got}")
            args.append(tok.text)
        self.conjecture = Conjecture(pred_tok.text, tuple(args))

    def _define(self, tok: _Token, kind: str) -> None:
        if not NAME_RE.match(tok.text):
            raise LexError(f"invalid name {tok.text!r}", tok.line, tok.col)
        if tok.text in self.kinds:
            raise Redefinition(tok.text, f"line {tok.line}")
        self.kinds[tok.text] = kind

    def finish(self) -> GeoProblem:
        if self.conjecture is None:
            raise MissingConjecture()
        problem = GeoProblem(
            id=self.problem_id or DEFAULT_PROBLEM_ID,
            construction=Construction(tuple(self.free_points), tuple(self.steps)),
            conjecture=self.conjecture,
        )
        validate_problem(problem)
        return problem


def parse_gclc_subset(text: str) -> GeoProblem:
    """Parse one problem in the gcl dialect; raises a GeoformError diagnostic."""
    parser = _Parser()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        code = raw.split("%", 1)[0]
        tokens = _tokenize_line(code, lineno)
        if tokens:
            parser.feed(tokens)
    return parser.finish()


def emit_gclc(problem: GeoProblem) -> str:
    """Render a problem in the gcl dialect; inverse of parse_gclc_subset."""
    lines = [f"problem {problem.id}"]
    for fp in problem.construction.free_points:
        lines.append(f"point {fp.name} {fp.x} {fp.y}")
    for step in problem.construction.steps:
        lines.append(" ".join([OP_TO_KEYWORD[step.op], step.out[0], *step.args]))
    conj = problem.conjecture
    lines.append(f"prove {{ {conj.predicate} {' '.join(conj.args)} }}")
    return "\n".join(lines) + "\n"
