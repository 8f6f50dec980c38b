import json
import sys

import pytest

from gasc.cli import main
from gasc.geoform import parse_gclc_subset
from gasc.jsonutil import load_json, write_canonical

MIDPOINT_SRC = "point A 10 10\npoint B 50 10\nmidpoint M A B\nprove { midpoint M A B }\n"

SUBCOMMANDS = ["convert", "corpus", "run", "score", "report", "serve", "watch"]


def _mock_adapters_file(tmp_path, answers_path):
    path = tmp_path / "adapters.json"
    write_canonical(
        path,
        [
            {
                "name": "prover",
                "method": "mock",
                "input_dialect": "gclc",
                "command_template": [
                    sys.executable, "-m", "gasc.mockprover",
                    "--behavior", "oracle", "--answers", str(answers_path), "{input}",
                ],
                "classification_rules": [
                    ["RESULT: proved", "Proved"],
                    ["RESULT: disproved", "Disproved"],
                ],
                "exit_code_map": {"3": "Error"},
                "proof_artifact": "*.proof",
                "readable_proofs": "maybe",
            }
        ],
    )
    return path


class TestUsage:
    def test_help_exits_zero(self, capsys):
        assert main(["--help"]) == 0
        assert "convert" in capsys.readouterr().out

    @pytest.mark.parametrize("subcommand", SUBCOMMANDS)
    def test_subcommand_help_exits_zero(self, subcommand, capsys):
        assert main([subcommand, "--help"]) == 0
        capsys.readouterr()

    def test_run_without_corpus_is_usage_error(self, capsys):
        assert main(["run"]) == 2
        assert "usage" in capsys.readouterr().err

    def test_unknown_flag_is_usage_error(self, capsys):
        assert main(["corpus", "validate", "--frobnicate"]) == 2
        capsys.readouterr()

    def test_run_flags_cover_documented_surface(self, capsys):
        main(["run", "--help"])
        text = capsys.readouterr().out
        for flag in ("--corpus", "--adapters", "--wall", "--cpu", "--mem",
                     "--workers", "--timing", "--reps", "--out"):
            assert flag in text

    def test_serve_and_watch_flags(self, capsys):
        main(["serve", "--help"])
        text = capsys.readouterr().out
        assert "--run" in text and "--bind" in text
        main(["watch", "--help"])
        text = capsys.readouterr().out
        assert "--interval" in text

    def test_convert_flags(self, capsys):
        main(["convert", "--help"])
        text = capsys.readouterr().out
        assert "--from" in text and "--to" in text


class TestConvert:
    def test_gclc_to_exchange_and_back(self, tmp_path, capsys):
        src = tmp_path / "p.gcl"
        src.write_text(MIDPOINT_SRC)
        mid = tmp_path / "p.gf.json"
        back = tmp_path / "back.gcl"
        assert main(["convert", "--from", "gclc", "--to", "exchange",
                     str(src), str(mid)]) == 0
        assert main(["convert", "--from", "exchange", "--to", "gclc",
                     str(mid), str(back)]) == 0
        assert parse_gclc_subset(back.read_text()) == parse_gclc_subset(MIDPOINT_SRC)
        capsys.readouterr()

    def test_to_ggb(self, tmp_path, capsys):
        src = tmp_path / "p.gcl"
        src.write_text(MIDPOINT_SRC)
        out = tmp_path / "p.ggb"
        assert main(["convert", "--from", "gclc", "--to", "ggb", str(src), str(out)]) == 0
        assert out.read_text().strip().endswith("Prove(AreEqual(Distance(M,A),Distance(M,B)))")
        capsys.readouterr()

    def test_parse_error_is_operational(self, tmp_path, capsys):
        src = tmp_path / "bad.gcl"
        src.write_text("point A 1 2\n")  # no conjecture
        assert main(["convert", "--from", "gclc", "--to", "exchange",
                     str(src), str(tmp_path / "o.json")]) == 1
        assert "gasc:" in capsys.readouterr().err


class TestCorpus:
    def test_validate_bundled_corpus(self, repo_root, capsys):
        assert main(["corpus", "validate", str(repo_root / "corpora" / "mini")]) == 0
        out = capsys.readouterr().out
        assert out.count("PASS") == 20
        assert "OK: 20 entries" in out

    def test_validate_broken_corpus(self, tmp_path, capsys):
        write_canonical(
            tmp_path / "corpus.json",
            {"name": "x", "version": "1",
             "entries": [{"problem": "problems/missing.gf.json",
                          "axiom_system": "euclidean",
                          "conjecture_type": "constructive",
                          "expected_status": "proved"}]},
        )
        assert main(["corpus", "validate", str(tmp_path)]) == 1
        assert "FAIL" in capsys.readouterr().out

    def test_list_with_filter(self, repo_root, capsys):
        assert main(["corpus", "list", str(repo_root / "corpora" / "mini"),
                     "--axiom", "euclidean"]) == 0
        ids = capsys.readouterr().out.split()
        assert len(ids) == 14
        assert ids == sorted(ids)


class TestPipeline:
    def test_run_score_report(self, tmp_path, repo_root, answers_path, capsys):
        adapters = _mock_adapters_file(tmp_path, answers_path)
        run_dir = tmp_path / "run"
        corpus_dir = str(repo_root / "corpora" / "mini")
        assert main([
            "run", "--corpus", corpus_dir, "--adapters", str(adapters),
            "--out", str(run_dir), "--wall", "5", "--cpu", "5", "--mem", "512",
            "--workers", "4", "--timing", "parallel", "--reps", "1",
        ]) == 0
        assert (run_dir / "events.jsonl").is_file()
        results = load_json(run_dir / "results.json")
        assert len(results["records"]) == 20

        assert main(["score", "--results", str(run_dir), "--corpus", corpus_dir]) == 0
        payload = capsys.readouterr().out
        assert json.loads(payload)["entries"][0]["adapter_name"] == "prover"
        assert (run_dir / "ranking.json").is_file()
        assert (run_dir / "adjudicated.json").is_file()

        report_dir = tmp_path / "report"
        assert main(["report", "--results", str(run_dir),
                     "--format", "html,csv,json", "--out", str(report_dir)]) == 0
        capsys.readouterr()
        assert (report_dir / "leaderboard.html").is_file()
        assert (report_dir / "matrix.csv").is_file()
        assert (report_dir / "report.json").is_file()

    def test_bundled_mocks_file_works_from_repo_root(
        self, tmp_path, repo_root, monkeypatch, capsys
    ):
        # the workflow documented in the README: relative paths, repo root cwd
        monkeypatch.chdir(repo_root)
        run_dir = tmp_path / "run"
        assert main([
            "run", "--corpus", "corpora/mini", "--adapters", "adapters/mocks.json",
            "--out", str(run_dir), "--wall", "2", "--workers", "4",
        ]) == 0
        capsys.readouterr()
        assert main(["score", "--results", str(run_dir), "--corpus", "corpora/mini"]) == 0
        ranking = json.loads(capsys.readouterr().out)
        assert [e["adapter_name"] for e in ranking["entries"]] == [
            "fast-solver", "slow-solver", "hanger", "liar",
        ]

    def test_score_without_corpus_uses_embedded_truth(self, small_run_dir, capsys):
        assert main(["score", "--results", str(small_run_dir)]) == 0
        ranking = json.loads(capsys.readouterr().out)
        assert {e["adapter_name"] for e in ranking["entries"]} == {"prover", "crasher"}

    def test_report_before_score_fails_cleanly(self, tmp_path, small_run_dir, capsys):
        fresh = tmp_path / "fresh"
        fresh.mkdir()
        (fresh / "results.json").write_bytes((small_run_dir / "results.json").read_bytes())
        assert main(["report", "--results", str(fresh), "--out", str(tmp_path / "r")]) == 1
        assert "score" in capsys.readouterr().err


class TestConfigPrecedence:
    def test_config_file_supplies_defaults_flags_override(
        self, tmp_path, repo_root, answers_path, monkeypatch, capsys
    ):
        adapters = _mock_adapters_file(tmp_path, answers_path)
        config_path = tmp_path / "config.json"
        write_canonical(config_path, {"run": {"wall": 7.5, "workers": 2}})
        monkeypatch.setenv("GASC_CONFIG", str(config_path))
        run_dir = tmp_path / "run"
        assert main([
            "run", "--corpus", str(repo_root / "corpora" / "mini"),
            "--adapters", str(adapters), "--out", str(run_dir),
            "--workers", "3",
        ]) == 0
        capsys.readouterr()
        manifest = load_json(run_dir / "results.json")["manifest"]
        assert manifest["config"]["wall_limit_s"] == 7.5  # from config file
        assert manifest["config"]["workers"] == 3  # flag wins
        assert manifest["config"]["cpu_limit_s"] == 10.0  # built-in default

    def test_bad_config_file(self, tmp_path, monkeypatch, capsys):
        config_path = tmp_path / "config.json"
        config_path.write_text("{broken")
        monkeypatch.setenv("GASC_CONFIG", str(config_path))
        assert main(["corpus", "list", "nowhere"]) == 1
        capsys.readouterr()

    def test_color_flag_beats_config(self, tmp_path, repo_root, monkeypatch, capsys):
        config_path = tmp_path / "config.json"
        write_canonical(config_path, {"color": True})
        monkeypatch.setenv("GASC_CONFIG", str(config_path))
        corpus_dir = str(repo_root / "corpora" / "mini")
        assert main(["corpus", "validate", corpus_dir]) == 0
        assert "\x1b[32m" in capsys.readouterr().out  # config turns color on
        assert main(["--no-color", "corpus", "validate", corpus_dir]) == 0
        assert "\x1b[" not in capsys.readouterr().out  # flag wins over config
