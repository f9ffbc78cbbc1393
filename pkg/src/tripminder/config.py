"""Application configuration: a small TOML file plus env-var secrets.

Relative paths in the file resolve against the file's own directory, so
a config can travel with its fixtures.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping

try:
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - Python 3.10
    import tomli as tomllib

from .tracker import TrackerConfig

TOKEN_ENV_VAR = "TRIPMINDER_API_TOKEN"

_TRACKER_DEFAULTS = TrackerConfig()


@dataclass(frozen=True)
class AppConfig:
    fixture_root: Path = Path("fixtures")
    search_provider: str = "tripadvisor"
    weather_provider: str = "darksky"
    poi_limit: int = 10
    reviews_per_poi: int = 30
    timezone: str = "UTC"
    default_departure_hour: int = 9
    tracker: TrackerConfig = field(default_factory=TrackerConfig)
    journal_path: Path | None = None
    webhook_url: str | None = None
    api_token: str | None = None
    static_dir: Path | None = None


def _resolve(base: Path, raw: str) -> Path:
    path = Path(raw)
    return path if path.is_absolute() else base / path


def load_config(
    path: str | Path | None = None, env: Mapping[str, str] | None = None
) -> AppConfig:
    """Defaults, overlaid with the TOML file (if given) and the token env var."""
    if env is None:
        env = os.environ
    if path is None:
        cfg = AppConfig()
        token = env.get(TOKEN_ENV_VAR)
        return replace(cfg, api_token=token) if token else cfg

    path = Path(path)
    base = path.parent
    raw = tomllib.loads(path.read_text("utf-8"))
    providers = raw.get("providers", {})
    itinerary = raw.get("itinerary", {})
    tracker = raw.get("tracker", {})
    scheduler = raw.get("scheduler", {})
    server = raw.get("server", {})

    defaults = AppConfig()
    token = env.get(TOKEN_ENV_VAR) or server.get("api_token") or None
    return AppConfig(
        fixture_root=_resolve(base, providers.get("fixture_root", "fixtures")),
        search_provider=providers.get("search", defaults.search_provider),
        weather_provider=providers.get("weather", defaults.weather_provider),
        poi_limit=int(providers.get("poi_limit", defaults.poi_limit)),
        reviews_per_poi=int(
            providers.get("reviews_per_poi", defaults.reviews_per_poi)
        ),
        timezone=itinerary.get("timezone", defaults.timezone),
        default_departure_hour=int(
            itinerary.get("default_departure_hour", defaults.default_departure_hour)
        ),
        tracker=TrackerConfig(
            gamma=float(tracker.get("gamma", _TRACKER_DEFAULTS.gamma)),
            delta=float(tracker.get("delta", _TRACKER_DEFAULTS.delta)),
            window=int(tracker.get("window", _TRACKER_DEFAULTS.window)),
            quorum=int(tracker.get("quorum", _TRACKER_DEFAULTS.quorum)),
        ),
        journal_path=(
            _resolve(base, scheduler["journal"]) if scheduler.get("journal") else None
        ),
        webhook_url=scheduler.get("webhook_url") or None,
        api_token=token,
        static_dir=(
            _resolve(base, server["static_dir"]) if server.get("static_dir") else None
        ),
    )
