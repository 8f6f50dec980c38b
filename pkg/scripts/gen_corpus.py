#!/usr/bin/env python3
"""Generate a synthetic corpus of N random problems for scale experiments.

Usage:
    python3 scripts/gen_corpus.py OUT_DIR [COUNT] [SEED]
"""

import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from gasc.synth import generate_corpus


def main() -> int:
    if len(sys.argv) < 2:
        print(__doc__.strip(), file=sys.stderr)
        return 2
    out_dir = Path(sys.argv[1])
    count = int(sys.argv[2]) if len(sys.argv) > 2 else 224
    seed = int(sys.argv[3]) if len(sys.argv) > 3 else 0
    manifest = generate_corpus(out_dir, count=count, seed=seed)
    print(f"wrote {count} problems, manifest at {manifest}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
