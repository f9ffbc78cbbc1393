"""Command-line front end: trip lifecycle, polling and the eval table."""

from __future__ import annotations

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from tripminder.cli import main

from conftest import FIXTURES

EMAIL = str(FIXTURES / "emails" / "newport_invitation.txt")
MANIFEST = str(FIXTURES / "packing" / "manifest.txt")
SCRIPT = str(FIXTURES / "packing" / "script.json")
CORPUS = str(FIXTURES / "eval" / "qualitative_rows.jsonl")
BASELINES = str(FIXTURES / "eval" / "baseline_predictions.json")
RECEIVED = "2020-11-20T12:00:00+00:00"


@pytest.fixture
def config_file(tmp_path: Path) -> str:
    path = tmp_path / "config.toml"
    path.write_text(
        "[providers]\n"
        f'fixture_root = "{FIXTURES}"\n'
        "\n"
        "[scheduler]\n"
        'journal = "journal.jsonl"\n'
    )
    return str(path)


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


def invoke(runner: CliRunner, *args: str):
    return runner.invoke(main, list(args))


def create_trip(runner: CliRunner, config_file: str) -> dict:
    result = invoke(
        runner, "trip", "create", "--email", EMAIL,
        "--received-at", RECEIVED, "--consent", "--config", config_file,
    )
    assert result.exit_code == 0, result.output
    return json.loads(result.stdout)


def test_create_requires_consent(runner, config_file):
    result = invoke(
        runner, "trip", "create", "--email", EMAIL,
        "--received-at", RECEIVED, "--config", config_file,
    )
    assert result.exit_code == 1
    assert "CONSENT_REQUIRED" in result.output


def test_create_emits_trip_summary(runner, config_file):
    summary = create_trip(runner, config_file)
    assert summary["state"] == "RECOMMENDED"
    assert summary["itinerary"]["destination"] == "Newport"
    assert [r["name"] for r in summary["recommendations"]][:3] == ["id", "card", "jacket"]


def test_show_reads_back_through_the_journal(runner, config_file):
    summary = create_trip(runner, config_file)
    result = invoke(runner, "trip", "show", summary["id"], "--config", config_file)
    assert result.exit_code == 0
    assert json.loads(result.stdout)["id"] == summary["id"]


def test_show_unknown_trip_fails(runner, config_file):
    result = invoke(runner, "trip", "show", "zzz", "--config", config_file)
    assert result.exit_code == 1
    assert "TRIP_NOT_FOUND" in result.output


def test_select_validates_items(runner, config_file):
    summary = create_trip(runner, config_file)
    bad = invoke(
        runner, "trip", "select", summary["id"], "id", "unicycle",
        "--config", config_file,
    )
    assert bad.exit_code == 1
    assert "UNKNOWN_ITEM" in bad.output

    ok = invoke(
        runner, "trip", "select", summary["id"],
        "id", "card", "jacket", "water", "hat",
        "--config", config_file,
    )
    assert ok.exit_code == 0
    assert json.loads(ok.stdout)["state"] == "SELECTED"


def test_full_packing_flow(runner, config_file):
    summary = create_trip(runner, config_file)
    invoke(
        runner, "trip", "select", summary["id"],
        "id", "card", "jacket", "water", "hat",
        "--config", config_file,
    )
    frames = invoke(
        runner, "trip", "frames", summary["id"],
        "--manifest", MANIFEST, "--script", SCRIPT,
        "--config", config_file,
    )
    assert frames.exit_code == 0, frames.output
    payload = json.loads(frames.stdout)
    assert payload["accepted"] == 30
    assert payload["rejected_blur"] == 5
    assert payload["confirmed"] == ["bottle", "cap", "jacket"]

    alert = invoke(runner, "trip", "alert", summary["id"], "--config", config_file)
    assert alert.exit_code == 0
    assert json.loads(alert.stdout)["payload"] == ["id", "card"]


def test_notify_poll_fires_once(runner, config_file):
    create_trip(runner, config_file)
    first = invoke(
        runner, "notify", "poll", "--now", "2020-11-24T09:00:00+00:00",
        "--config", config_file,
    )
    assert first.exit_code == 0
    events = json.loads(first.stdout)
    assert [e["kind"] for e in events] == ["RECOMMEND"]

    second = invoke(
        runner, "notify", "poll", "--now", "2020-11-24T09:00:00+00:00",
        "--config", config_file,
    )
    assert json.loads(second.stdout) == []


def test_eval_run_renders_canonical_table(runner):
    result = invoke(
        runner, "eval", "run", "--corpus", CORPUS, "--baselines", BASELINES,
    )
    assert result.exit_code == 0, result.output
    lines = result.stdout.splitlines()
    assert "MACRO" in lines[0]
    names = [ln.split()[0] for ln in lines[1:] if ln.strip()]
    assert names == ["lda", "tfidf", "popular_mentions", "qna", "spacy_ner", "pattern"]
    pattern_line = lines[1:][names.index("pattern")]
    assert "93.75" in pattern_line and "100.00" in pattern_line


def test_eval_run_micro_mode(runner):
    result = invoke(
        runner, "eval", "run", "--corpus", CORPUS, "--baselines", BASELINES,
        "--mode", "micro",
    )
    assert result.exit_code == 0
    assert "MICRO" in result.stdout.splitlines()[0]


def test_eval_run_without_baselines(runner):
    result = invoke(runner, "eval", "run", "--corpus", CORPUS)
    assert result.exit_code == 0
    names = [ln.split()[0] for ln in result.stdout.splitlines()[1:] if ln.strip()]
    assert names == ["tfidf", "pattern"]
