"""Stay-window forecast clipping and the packing rule engine.

Rules aggregate over the clipped stay: coldest daily minimum, hottest
daily maximum and highest rain probability.  Thresholds are strict
inequalities, so exact-boundary values trigger nothing.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import date
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Protocol, Sequence

try:
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - Python 3.10
    import tomli as tomllib

from .errors import EmptyForecastError, NoForecastError, ProviderUnavailableError
from .itinerary import Itinerary
from .transport import Transport

COLD_MIN_F = 30.0
COOL_MAX_F = 50.0
MILD_MAX_F = 70.0
RAIN_THRESHOLD_PCT = 40.0


class WeatherRule(Enum):
    MIN_TEMP_COLD = "MIN_TEMP_COLD"
    MIN_TEMP_COOL = "MIN_TEMP_COOL"
    MAX_TEMP_MILD = "MAX_TEMP_MILD"
    MAX_TEMP_HOT = "MAX_TEMP_HOT"
    RAIN = "RAIN"


@dataclass(frozen=True)
class DailyForecast:
    date: date
    min_temp_f: float
    max_temp_f: float
    summary: str
    rain_chance_pct: float

    def __post_init__(self):
        if self.min_temp_f > self.max_temp_f:
            raise ValueError("min_temp_f above max_temp_f")
        if not 0.0 <= self.rain_chance_pct <= 100.0:
            raise ValueError("rain_chance_pct outside 0..100")


@dataclass(frozen=True)
class WeatherAdvice:
    items: tuple[str, ...]
    triggered_rules: frozenset[WeatherRule]


def load_rule_items(path: Path | None = None) -> dict[WeatherRule, list[str]]:
    """Item lists per rule, from the packaged TOML unless overridden."""
    if path is None:
        raw = resources.files("tripminder.data").joinpath("weather_rules.toml").read_bytes()
    else:
        raw = Path(path).read_bytes()
    table = tomllib.loads(raw.decode("utf-8"))["rules"]
    return {WeatherRule(rule_id): list(items) for rule_id, items in table.items()}


def clip_forecast(provider_days: Sequence[DailyForecast], itinerary: Itinerary) -> list[DailyForecast]:
    """Days of the stay window that the provider horizon actually covers."""
    clipped = [
        d for d in provider_days if itinerary.arrival <= d.date <= itinerary.departure
    ]
    if not clipped:
        raise NoForecastError(
            "forecast horizon does not cover the stay",
            arrival=itinerary.arrival.isoformat(),
            departure=itinerary.departure.isoformat(),
        )
    return clipped


def recommend_for_weather(
    days: Sequence[DailyForecast],
    rule_items: dict[WeatherRule, list[str]] | None = None,
) -> WeatherAdvice:
    """Apply the min-temp, max-temp and rain rules over the stay."""
    if not days:
        raise EmptyForecastError("no forecast days to evaluate")
    if rule_items is None:
        rule_items = load_rule_items()

    t_min = min(d.min_temp_f for d in days)
    t_max = max(d.max_temp_f for d in days)
    rain = max(d.rain_chance_pct for d in days)

    triggered: list[WeatherRule] = []
    if t_min < COLD_MIN_F:
        triggered.append(WeatherRule.MIN_TEMP_COLD)
    elif COLD_MIN_F < t_min < COOL_MAX_F:
        triggered.append(WeatherRule.MIN_TEMP_COOL)
    if COOL_MAX_F < t_max < MILD_MAX_F:
        triggered.append(WeatherRule.MAX_TEMP_MILD)
    elif t_max > MILD_MAX_F:
        triggered.append(WeatherRule.MAX_TEMP_HOT)
    if rain > RAIN_THRESHOLD_PCT:
        triggered.append(WeatherRule.RAIN)

    items: list[str] = []
    for rule in triggered:
        for item in rule_items[rule]:
            if item not in items:
                items.append(item)
    return WeatherAdvice(items=tuple(items), triggered_rules=frozenset(triggered))


class WeatherProvider(Protocol):
    def forecast(self, place: str, start: date, end: date) -> list[DailyForecast]: ...


@dataclass
class TransportWeatherProvider:
    """Provider over a transport; request key is 'forecast|<place>|<start>|<end>'."""

    transport: Transport

    def forecast(self, place: str, start: date, end: date) -> list[DailyForecast]:
        key = f"forecast|{place}|{start.isoformat()}|{end.isoformat()}"
        response = self.transport.get(key)
        if response.status != 200:
            raise ProviderUnavailableError(
                f"forecast returned status {response.status}", place=place
            )
        return [
            DailyForecast(
                date=date.fromisoformat(day["date"]),
                min_temp_f=float(day["min_temp_f"]),
                max_temp_f=float(day["max_temp_f"]),
                summary=day.get("summary", ""),
                rain_chance_pct=float(day.get("rain_chance_pct", 0.0)),
            )
            for day in json.loads(response.text)["days"]
        ]


@dataclass
class StaticWeatherProvider:
    """In-memory provider for unit tests."""

    days: list[DailyForecast]

    def forecast(self, place: str, start: date, end: date) -> list[DailyForecast]:
        return list(self.days)
