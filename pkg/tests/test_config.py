"""Configuration loading and path resolution."""

from __future__ import annotations

from pathlib import Path

from tripminder.config import TOKEN_ENV_VAR, AppConfig, load_config


def test_defaults_without_a_file():
    cfg = load_config(env={})
    assert cfg == AppConfig()
    assert cfg.fixture_root == Path("fixtures")
    assert cfg.poi_limit == 10
    assert cfg.reviews_per_poi == 30
    assert cfg.tracker.gamma == 40.0
    assert cfg.tracker.delta == 0.7
    assert cfg.api_token is None


def test_full_file_overrides(tmp_path: Path):
    path = tmp_path / "config.toml"
    path.write_text(
        "[providers]\n"
        'fixture_root = "data/fixtures"\n'
        'search = "otheradvisor"\n'
        "poi_limit = 5\n"
        "reviews_per_poi = 12\n"
        "\n"
        "[itinerary]\n"
        'timezone = "America/New_York"\n'
        "default_departure_hour = 7\n"
        "\n"
        "[tracker]\n"
        "gamma = 25.0\n"
        "delta = 0.5\n"
        "window = 11\n"
        "quorum = 4\n"
        "\n"
        "[scheduler]\n"
        'journal = "runtime/journal.jsonl"\n'
        'webhook_url = "http://hooks.test/x"\n'
        "\n"
        "[server]\n"
        'api_token = "from-file"\n'
        'static_dir = "dist"\n'
    )
    cfg = load_config(path, env={})
    assert cfg.fixture_root == tmp_path / "data/fixtures"
    assert cfg.search_provider == "otheradvisor"
    assert cfg.poi_limit == 5
    assert cfg.reviews_per_poi == 12
    assert cfg.timezone == "America/New_York"
    assert cfg.default_departure_hour == 7
    assert (cfg.tracker.gamma, cfg.tracker.delta) == (25.0, 0.5)
    assert (cfg.tracker.window, cfg.tracker.quorum) == (11, 4)
    assert cfg.journal_path == tmp_path / "runtime/journal.jsonl"
    assert cfg.webhook_url == "http://hooks.test/x"
    assert cfg.api_token == "from-file"
    assert cfg.static_dir == tmp_path / "dist"


def test_absolute_paths_kept_as_is(tmp_path: Path):
    path = tmp_path / "config.toml"
    path.write_text(f'[providers]\nfixture_root = "{tmp_path / "abs"}"\n')
    cfg = load_config(path, env={})
    assert cfg.fixture_root == tmp_path / "abs"


def test_env_token_beats_file_token(tmp_path: Path):
    path = tmp_path / "config.toml"
    path.write_text('[server]\napi_token = "from-file"\n')
    cfg = load_config(path, env={TOKEN_ENV_VAR: "from-env"})
    assert cfg.api_token == "from-env"


def test_env_token_without_file():
    cfg = load_config(env={TOKEN_ENV_VAR: "tok"})
    assert cfg.api_token == "tok"


def test_partial_file_keeps_defaults(tmp_path: Path):
    path = tmp_path / "config.toml"
    path.write_text("[tracker]\nquorum = 2\n")
    cfg = load_config(path, env={})
    assert cfg.tracker.quorum == 2
    assert cfg.tracker.window == 15
    assert cfg.search_provider == "tripadvisor"
    assert cfg.journal_path is None
