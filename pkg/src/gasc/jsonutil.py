"""Canonical JSON helpers used by every artifact writer.

Canonical form: sorted keys, UTF-8, no ASCII escaping. Files get a 2-space
indent and a trailing newline; event-log lines are compact. Writing the same
value twice must yield identical bytes.
"""

import hashlib
import json
from pathlib import Path


def canonical_dumps(obj, indent=None) -> str:
    if indent is None:
        return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":"))
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, indent=indent)


def write_canonical(path, obj) -> Path:
    path = Path(path)
    path.write_text(canonical_dumps(obj, indent=2) + "\n", encoding="utf-8")
    return path


def load_json(path):
    return json.loads(Path(path).read_text(encoding="utf-8"))


def sha256_hex(obj) -> str:
    return hashlib.sha256(canonical_dumps(obj).encode("utf-8")).hexdigest()
