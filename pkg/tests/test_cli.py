from __future__ import annotations

import json
import socket
import subprocess
import sys

import pytest

from persona_workbench.cli import main
from tests.conftest import FIXTURE_CORPUS


class TestIngest:
    def test_fixture_stats(self, capsys):
        assert main(["ingest", str(FIXTURE_CORPUS), "--stats"]) == 0
        out = capsys.readouterr().out
        assert "ok: 12 records" in out
        assert "Employment: 4" in out
        assert "Education: 4" in out
        assert "Family: 4" in out

    def test_corrupted_record_line_numbered_error(self, tmp_path, capsys):
        lines = FIXTURE_CORPUS.read_text(encoding="utf-8").splitlines()
        corrupted = json.loads(lines[3])
        corrupted["labels"] = ["Wrestling"]
        lines[3] = json.dumps(corrupted)
        bad = tmp_path / "corrupted.jsonl"
        bad.write_text("\n".join(lines) + "\n", encoding="utf-8")

        assert main(["ingest", str(bad), "--stats"]) == 1
        err = capsys.readouterr().err
        assert "line 4" in err
        assert "unknown theme" in err

    def test_missing_file(self, capsys):
        assert main(["ingest", "/nonexistent/corpus.jsonl"]) == 1
        assert "error" in capsys.readouterr().err


class TestAsk:
    def test_grounded_stub_exchange(self, capsys):
        code = main(
            ["ask", "--theme", "Employment", "--question", "What helps at work?", "--stub"]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "[source:R-EMP-" in out
        assert "grounded on: R-EMP-" in out

    def test_empty_question_is_usage_error(self, capsys):
        assert main(["ask", "--theme", "Employment", "--question", "  ", "--stub"]) == 2
        assert "question must be non-empty" in capsys.readouterr().err

    def test_unknown_theme_fails(self, capsys):
        assert main(["ask", "--theme", "Cooking", "--question", "Hi?", "--stub"]) == 1
        assert "unknown theme" in capsys.readouterr().err


class TestSearch:
    def test_prints_id_score_snippet(self, capsys):
        assert main(["search", "Employment", "memory color labels", "-k", "2"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines
        passage_id, score, snippet = lines[0].split("\t")
        assert passage_id.isdigit()
        float(score)
        assert snippet.startswith("[R-EMP-")

    def test_no_matches(self, capsys):
        assert main(["search", "Family", "zzzunmatchable", "-k", "3"]) == 0
        assert "no matches" in capsys.readouterr().out


class TestServe:
    def test_occupied_port_exits_nonzero(self, tmp_path):
        blocker = socket.socket()
        blocker.bind(("127.0.0.1", 0))
        port = blocker.getsockname()[1]
        config = {
            "host": "127.0.0.1",
            "port": port,
            "store_dir": str(tmp_path / "store"),
        }
        config_path = tmp_path / "config.json"
        config_path.write_text(json.dumps(config), encoding="utf-8")
        try:
            result = subprocess.run(
                [sys.executable, "-m", "persona_workbench.cli", "serve", "--config", str(config_path)],
                capture_output=True,
                text=True,
                timeout=30,
            )
        finally:
            blocker.close()
        assert result.returncode != 0

    def test_bad_config_rejected(self, tmp_path, capsys):
        config_path = tmp_path / "config.json"
        config_path.write_text('{"provider": "psychic"}', encoding="utf-8")
        assert main(["serve", "--config", str(config_path)]) == 1
        assert "provider" in capsys.readouterr().err


def test_unknown_subcommand_is_parse_error():
    with pytest.raises(SystemExit):
        main(["frobnicate"])
