import sys
from pathlib import Path

import pytest

from gasc.adapters import mock_spec
from gasc.corpus import load_corpus
from gasc.runner import RunConfig, run_competition

REPO_ROOT = Path(__file__).resolve().parent.parent


@pytest.fixture(scope="session")
def repo_root() -> Path:
    return REPO_ROOT


@pytest.fixture(scope="session")
def mini_corpus_dir() -> Path:
    return REPO_ROOT / "corpora" / "mini"


@pytest.fixture(scope="session")
def answers_path(mini_corpus_dir) -> Path:
    return mini_corpus_dir / "answers.json"


@pytest.fixture(scope="session")
def mini_corpus(mini_corpus_dir):
    return load_corpus(mini_corpus_dir)


@pytest.fixture(scope="session")
def small_run_dir(tmp_path_factory, mini_corpus, answers_path) -> Path:
    """A finished four-problem run shared by service/report/CLI tests."""
    out = tmp_path_factory.mktemp("small-run") / "run"
    entries = [e for e in mini_corpus.entries if e.problem_id <= "GEO0004"]
    adapters = [
        mock_spec("prover", "oracle", answers=answers_path, python=sys.executable),
        mock_spec("crasher", "crash", python=sys.executable),
    ]
    config = RunConfig(wall_limit_s=5, cpu_limit_s=5, mem_limit_mib=512, workers=2)
    run_competition(entries, adapters, config, out)
    return out
