"""Declarative prover adapters: how to invoke a prover and read its verdict.

An adapter is data, not code, so new provers join the competition without
touching the harness. An adapter file is a JSON array of objects:

    {
      "name": "gclc-wu",
      "method": "Wu's method",
      "input_dialect": "gclc",                  gclc | exchange | ggb
      "command_template": ["gclc", "{input}", "-w"],
      "classification_rules": [["proved", "Proved"], ...],   regex, first match wins
      "exit_code_map": {"1": "Error"},          optional fallback by exit code
      "proof_artifact": "*.proof",              optional glob, resolved in the job workdir
      "readable_proofs": "maybe"                maybe | not_available
    }

``{input}`` must appear exactly once across the template; ``{workdir}`` may
appear any number of times. Timeout and MemOut can never come from rules or
the exit-code map: only the runner assigns them, from measured limits.
"""

from __future__ import annotations

import json
import re
import shutil
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .errors import AdapterSchemaError, BadPattern, DuplicateAdapterName

VERDICTS = ("Proved", "Disproved", "Unknown", "Timeout", "MemOut", "Error", "Unparseable")
RULE_VERDICTS = ("Proved", "Disproved", "Unknown", "Error", "Unparseable")
INPUT_DIALECTS = ("gclc", "exchange", "ggb")
READABLE_FLAGS = ("maybe", "not_available")


@dataclass(frozen=True)
class ClassificationRule:
    pattern: str
    verdict: str
    regex: re.Pattern = field(compare=False, repr=False, default=None)


@dataclass(frozen=True)
class AdapterSpec:
    name: str
    method: str
    input_dialect: str
    command_template: tuple[str, ...]
    classification_rules: tuple[ClassificationRule, ...]
    exit_code_map: tuple[tuple[int, str], ...] = ()
    proof_artifact: str | None = None
    readable_proofs: str = "not_available"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "method": self.method,
            "input_dialect": self.input_dialect,
            "command_template": list(self.command_template),
            "classification_rules": [[r.pattern, r.verdict] for r in self.classification_rules],
            "exit_code_map": {str(code): v for code, v in self.exit_code_map},
            "proof_artifact": self.proof_artifact,
            "readable_proofs": self.readable_proofs,
        }


def parse_adapter(obj) -> AdapterSpec:
    if not isinstance(obj, dict):
        raise AdapterSchemaError("adapter spec must be a JSON object")
    name = obj.get("name")
    if not isinstance(name, str) or not name:
        raise AdapterSchemaError("adapter needs a non-empty string 'name'")

    template = obj.get("command_template")
    if not isinstance(template, list) or not template or not all(
        isinstance(t, str) for t in template
    ):
        raise AdapterSchemaError(f"{name}: 'command_template' must be a non-empty string array")
    joined = "\x00".join(template)
    if joined.count("{input}") != 1:
        raise AdapterSchemaError(f"{name}: command_template must contain {{input}} exactly once")

    dialect = obj.get("input_dialect")
    if dialect not in INPUT_DIALECTS:
        raise AdapterSchemaError(f"{name}: input_dialect must be one of {INPUT_DIALECTS}")

    raw_rules = obj.get("classification_rules", [])
    if not isinstance(raw_rules, list):
        raise AdapterSchemaError(f"{name}: classification_rules must be an array")
    rules = []
    for raw in raw_rules:
        if not (isinstance(raw, (list, tuple)) and len(raw) == 2):
            raise AdapterSchemaError(f"{name}: each rule is a [pattern, verdict] pair")
        pattern, verdict = raw
        if verdict not in RULE_VERDICTS:
            raise AdapterSchemaError(
                f"{name}: rule verdict {verdict!r} not allowed (runner-only verdicts excluded)"
            )
        try:
            regex = re.compile(pattern)
        except re.error as exc:
            raise BadPattern(pattern, str(exc)) from exc
        rules.append(ClassificationRule(pattern, verdict, regex))

    raw_map = obj.get("exit_code_map", {}) or {}
    if not isinstance(raw_map, dict):
        raise AdapterSchemaError(f"{name}: exit_code_map must be an object")
    exit_map = []
    for code, verdict in sorted(raw_map.items()):
        try:
            code_int = int(code)
        except (TypeError, ValueError):
            raise AdapterSchemaError(f"{name}: exit_code_map keys must be integers")
        if verdict not in RULE_VERDICTS:
            raise AdapterSchemaError(f"{name}: exit_code_map verdict {verdict!r} not allowed")
        exit_map.append((code_int, verdict))

    if not rules and not exit_map:
        raise AdapterSchemaError(
            f"{name}: need classification_rules or exit_code_map to read verdicts"
        )

    readable = obj.get("readable_proofs", "not_available")
    if readable not in READABLE_FLAGS:
        raise AdapterSchemaError(f"{name}: readable_proofs must be one of {READABLE_FLAGS}")

    proof_artifact = obj.get("proof_artifact")
    if proof_artifact is not None and not isinstance(proof_artifact, str):
        raise AdapterSchemaError(f"{name}: proof_artifact must be a glob string")

    return AdapterSpec(
        name=name,
        method=str(obj.get("method", "")),
        input_dialect=dialect,
        command_template=tuple(template),
        classification_rules=tuple(rules),
        exit_code_map=tuple(exit_map),
        proof_artifact=proof_artifact,
        readable_proofs=readable,
    )


def load_adapters(path) -> list[AdapterSpec]:
    path = Path(path)
    if not path.is_file():
        raise AdapterSchemaError(f"no adapter file at {path}")
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise AdapterSchemaError(f"{path}: {exc}") from exc
    if not isinstance(doc, list):
        raise AdapterSchemaError(f"{path}: top level must be an array of adapter specs")
    specs = []
    seen = set()
    for obj in doc:
        spec = parse_adapter(obj)
        if spec.name in seen:
            raise DuplicateAdapterName(spec.name)
        seen.add(spec.name)
        specs.append(spec)
    return specs


def classify_output(spec: AdapterSpec, output: str, exit_code: int | None) -> str:
    """First matching rule wins; exit-code map is the fallback; else Unparseable."""
    for rule in spec.classification_rules:
        if rule.regex.search(output):
            return rule.verdict
    for code, verdict in spec.exit_code_map:
        if exit_code == code:
            return verdict
    return "Unparseable"


def executable_available(spec: AdapterSpec) -> bool:
    head = spec.command_template[0]
    if "/" in head:
        path = Path(head)
        return path.is_file()
    return shutil.which(head) is not None


# --- mock adapters for hermetic runs ----------------------------------------

_MOCK_RULES = [["RESULT: proved", "Proved"], ["RESULT: disproved", "Disproved"]]


def mock_spec(
    name: str,
    behavior: str,
    *,
    delay_wall: float = 0.0,
    burn_cpu: float = 0.0,
    answers=None,
    input_dialect: str = "gclc",
    python: str | None = None,
    extra_args: tuple[str, ...] = (),
    proof_artifact: str | None = "*.proof",
    readable_proofs: str = "not_available",
) -> AdapterSpec:
    """Adapter spec invoking the bundled mock prover with the given behavior."""
    argv = [python or sys.executable, "-m", "gasc.mockprover", "--behavior", behavior]
    if delay_wall:
        argv += ["--delay-wall", str(delay_wall)]
    if burn_cpu:
        argv += ["--burn-cpu", str(burn_cpu)]
    if answers is not None:
        argv += ["--answers", str(answers)]
    argv += list(extra_args)
    argv.append("{input}")
    return parse_adapter(
        {
            "name": name,
            "method": f"mock ({behavior})",
            "input_dialect": input_dialect,
            "command_template": argv,
            "classification_rules": _MOCK_RULES,
            "exit_code_map": {"3": "Error"},
            "proof_artifact": proof_artifact,
            "readable_proofs": readable_proofs,
        }
    )


def mock_competition_specs(answers_path, python: str | None = None) -> list[AdapterSpec]:
    """The standard four-mock field: two honest solvers, a hanger, a liar."""
    return [
        mock_spec(
            "fast-solver",
            "oracle",
            delay_wall=0.2,
            answers=answers_path,
            input_dialect="gclc",
            python=python,
            readable_proofs="maybe",
        ),
        mock_spec(
            "slow-solver",
            "oracle",
            delay_wall=0.8,
            answers=answers_path,
            input_dialect="ggb",
            python=python,
        ),
        mock_spec(
            "hanger", "hang", input_dialect="exchange", python=python, proof_artifact=None
        ),
        mock_spec("liar", "wrong", input_dialect="gclc", python=python),
    ]
