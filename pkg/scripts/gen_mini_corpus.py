#!/usr/bin/env python3
"""Regenerate the bundled mini corpus (corpora/mini) and the mock adapter file.

The 20 problems are written in the gcl dialect below and converted through
the parser, so the bundled files are guaranteed to satisfy every invariant
the loader checks. Expected statuses are the ground truth used by scoring
and by the oracle mock behavior (answers.json).
"""

import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from gasc.geoform import parse_gclc_subset
from gasc.geoform.exchange import write_exchange_file
from gasc.jsonutil import write_canonical

# id, axiom_system, conjecture_type, expected_status, informal proof or None, gcl source
PROBLEMS = [
    (
        "GEO0001", "euclidean", "constructive", "proved",
        "M is constructed as the midpoint of segment AB, so AM = MB and M lies "
        "between A and B by definition.",
        """
        point A 10 10
        point B 50 10
        midpoint M A B
        prove { midpoint M A B }
        """,
    ),
    (
        "GEO0002", "euclidean", "constructive", "proved",
        "M and N are midpoints of AB and AC, so MN is a midline of triangle ABC. "
        "A homothety centered at A with ratio 2 maps M to B and N to C, hence MN "
        "is parallel to BC.",
        """
        point A 0 0
        point B 40 0
        point C 20 30
        midpoint M A B
        midpoint N A C
        prove { parallel M N B C }
        """,
    ),
    (
        "GEO0003", "euclidean", "constructive", "proved",
        "X lies on the perpendicular bisector of AB: the bisector is the locus of "
        "points equidistant from A and B, because triangles XMA and XMB are "
        "congruent by side-angle-side.",
        """
        point A 0 0
        point B 40 0
        point C 10 25
        point D 30 -15
        line l A B
        midpoint M A B
        perpendicular p l M
        line m C D
        intersection X p m
        prove { equal_distance X A X B }
        """,
    ),
    (
        "GEO0004", "euclidean", "constructive", "proved", None,
        """
        point A 0 0
        point B 50 5
        point C 20 30
        line l A B
        foot F C l
        prove { perpendicular C F A B }
        """,
    ),
    (
        "GEO0005", "euclidean", "constructive", "disproved", None,
        """
        point A 3 7
        point B 20 11
        point C 35 29
        prove { collinear A B C }
        """,
    ),
    (
        "GEO0006", "euclidean", "constructive", "proved",
        "ABDC is a parallelogram by construction, and the diagonals of a "
        "parallelogram bisect each other, so the midpoint of AC is also the "
        "midpoint of BD.",
        """
        point A 0 0
        point B 40 10
        point C 50 40
        line l A B
        line m B C
        parallel p m A
        parallel q l C
        intersection D p q
        midpoint M A C
        prove { midpoint M B D }
        """,
    ),
    (
        "GEO0007", "euclidean", "constructive", "proved", None,
        """
        point O 20 20
        point A 50 20
        circle c O A
        midpoint M O A
        prove { midpoint M O A }
        """,
    ),
    (
        "GEO0008", "euclidean", "constructive", "disproved", None,
        """
        point A 0 0
        point B 30 4
        point C 41 27
        point D 12 35
        prove { concyclic A B C D }
        """,
    ),
    (
        "GEO0009", "euclidean", "ruler_compass", "proved",
        "By construction AB is perpendicular to the lines through A and B, and CD "
        "is parallel to AB, so ABCD has right angles at every vertex. A rectangle "
        "is cyclic: its diagonals are equal and bisect each other, so all four "
        "vertices lie on the circle centered at the diagonal intersection.",
        """
        point A 0 0
        point B 40 0
        point P 0 30
        line l A B
        perpendicular pA l A
        perpendicular pB l B
        parallel m l P
        intersection C m pB
        intersection D m pA
        prove { concyclic A B C D }
        """,
    ),
    (
        "GEO0010", "neutral", "constructive", "proved", None,
        """
        point A 0 0
        point B 36 9
        point P 12 28
        line l A B
        perpendicular m l P
        foot F A m
        prove { perpendicular A B P F }
        """,
    ),
    (
        "GEO0011", "euclidean", "constructive", "proved",
        "The midpoint of a segment is equidistant from its endpoints, directly "
        "from the definition of midpoint.",
        """
        point A -12 5
        point B 28.5 17
        midpoint M A B
        prove { equal_distance M A M B }
        """,
    ),
    (
        "GEO0012", "euclidean", "constructive", "disproved", None,
        """
        point A 0 0
        point B 25 10
        point C 5 30
        point D 42 18
        prove { parallel A B C D }
        """,
    ),
    (
        "GEO0013", "euclidean", "constructive", "disproved", None,
        """
        point A 2 3
        point B 38 7
        point C 19 33
        midpoint M A B
        midpoint N B C
        midpoint P C A
        prove { collinear M N P }
        """,
    ),
    (
        "GEO0014", "neutral", "constructive", "proved",
        "The foot of the perpendicular from C to the line AB lies on that line by "
        "definition of foot.",
        """
        point A -5 -5
        point B 45 -5
        point C 15 22
        line l A B
        foot F C l
        prove { collinear A B F }
        """,
    ),
    (
        "GEO0015", "euclidean", "constructive", "proved",
        "MN is a midline of triangle ABC and PQ is a midline of triangle ACD, so "
        "both are parallel to the diagonal AC and hence to each other.",
        """
        point A 0 0
        point B 34 -6
        point C 46 28
        point D 8 36
        midpoint M A B
        midpoint N B C
        midpoint P C D
        midpoint Q D A
        prove { parallel M N Q P }
        """,
    ),
    (
        "GEO0016", "projective", "constructive", "proved", None,
        """
        point A 0 0
        point B 30 12
        point C 6 28
        point D 36 -4
        line l A B
        line m C D
        intersection X l m
        prove { collinear A B X }
        """,
    ),
    (
        "GEO0017", "hyperbolic", "other", "open", None,
        """
        point A 0 0
        point B 32 8
        point C 12 26
        line l A B
        foot F C l
        midpoint M C F
        prove { concyclic A B C M }
        """,
    ),
    (
        "GEO0018", "euclidean", "ruler_compass", "proved", None,
        """
        point O 0 0
        point A 26 0
        point B 9 14
        point C 31 22
        circle c O A
        line l B C
        midpoint M O A
        prove { equal_distance O M M A }
        """,
    ),
    (
        "GEO0019", "neutral", "constructive", "proved", None,
        """
        point A 0 0
        point B 40 6
        point C 14 30
        line l A B
        foot F C l
        line m A C
        foot G F m
        prove { perpendicular F G A C }
        """,
    ),
    (
        "GEO0020", "hyperbolic", "constructive", "proved", None,
        """
        point A 4 -2
        point B 38 10
        point C 16 24.5
        midpoint M B C
        midpoint N A C
        prove { equal_distance M C M B }
        """,
    ),
]

MOCK_RULES = [["RESULT: proved", "Proved"], ["RESULT: disproved", "Disproved"]]


def mock_stanza(name, behavior, dialect, extra, readable):
    # python3 resolves on PATH; tests build equivalent specs with sys.executable
    argv = ["python3", "-m", "gasc.mockprover", "--behavior", behavior, *extra, "{input}"]
    return {
        "name": name,
        "method": f"mock ({behavior})",
        "input_dialect": dialect,
        "command_template": argv,
        "classification_rules": MOCK_RULES,
        "exit_code_map": {"3": "Error"},
        "proof_artifact": "*.proof",
        "readable_proofs": readable,
    }


def main():
    corpus_dir = REPO / "corpora" / "mini"
    problems_dir = corpus_dir / "problems"
    problems_dir.mkdir(parents=True, exist_ok=True)

    entries = []
    answers = {}
    for pid, axiom, ctype, expected, informal, source in PROBLEMS:
        text = "\n".join(line.strip() for line in source.strip().splitlines())
        problem = parse_gclc_subset(f"problem {pid}\n{text}\n")
        assert problem.id == pid
        rel = f"problems/{pid}.gf.json"
        write_exchange_file(problem, corpus_dir / rel)
        entry = {
            "problem": rel,
            "axiom_system": axiom,
            "conjecture_type": ctype,
            "expected_status": expected,
            "source": "hand-authored mini benchmark, edition 0",
        }
        if informal:
            entry["informal_proof"] = informal
        entries.append(entry)
        answers[pid] = expected

    write_canonical(
        corpus_dir / "corpus.json",
        {"name": "mini", "version": "1", "entries": entries},
    )
    write_canonical(corpus_dir / "answers.json", answers)

    answers_rel = "corpora/mini/answers.json"
    mocks = [
        mock_stanza("fast-solver", "oracle", "gclc",
                    ["--delay-wall", "0.2", "--answers", answers_rel], "maybe"),
        mock_stanza("slow-solver", "oracle", "ggb",
                    ["--delay-wall", "0.8", "--answers", answers_rel], "not_available"),
        mock_stanza("hanger", "hang", "exchange", [], "not_available"),
        mock_stanza("liar", "wrong", "gclc", [], "not_available"),
    ]
    mocks_path = REPO / "adapters" / "mocks.json"
    mocks_path.parent.mkdir(exist_ok=True)
    write_canonical(mocks_path, mocks)

    print(f"wrote {len(entries)} problems to {corpus_dir}")
    print(f"wrote {mocks_path}")


if __name__ == "__main__":
    main()
