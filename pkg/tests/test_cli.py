"""CLI subcommands: simulate, check, chat."""

import io

import pytest

from tourdesk.cli import main


def test_check_passes_on_shipped_assets(capsys, monkeypatch, tmp_path):
    monkeypatch.setenv("DATA_DIR", str(tmp_path))
    assert main(["check"]) == 0
    out = capsys.readouterr().out
    assert "template coverage: OK" in out
    assert "18 intents" in out


def test_simulate_reference_script(capsys, monkeypatch, tmp_path, app_config):
    from pathlib import Path

    monkeypatch.setenv("DATA_DIR", str(tmp_path))
    script = Path(str(app_config.ontology_path)).parent / "scripts" / "reference_replay.yaml"
    assert main(["simulate", "--script", str(script)]) == 0
    out = capsys.readouterr().out
    assert "recommend_target" in out
    assert "final phase: QuestionAnswering" in out


def test_simulate_fails_on_expectation_mismatch(capsys, monkeypatch, tmp_path):
    monkeypatch.setenv("DATA_DIR", str(tmp_path))
    script = tmp_path / "script.yaml"
    script.write_text(
        "steps:\n  - silence: true\n    expect: [goodbye]\n", encoding="utf-8"
    )
    assert main(["simulate", "--script", str(script)]) == 1


def test_chat_reads_stdin(capsys, monkeypatch, tmp_path):
    monkeypatch.setenv("DATA_DIR", str(tmp_path))
    monkeypatch.setattr("sys.stdin", io.StringIO("my name is Hana\ngoodbye\n"))
    assert main(["chat", "--show-das"]) == 0
    out = capsys.readouterr().out
    assert "Welcome" in out
    assert "goodbye ()" in out
    assert "(session over)" in out
