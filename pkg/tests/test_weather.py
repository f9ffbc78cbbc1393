"""Forecast clipping and the weather-to-items rule engine."""

from __future__ import annotations

from datetime import date, datetime, timezone

import pytest
from hypothesis import given, strategies as st

from tripminder.errors import EmptyForecastError, NoForecastError, ProviderUnavailableError
from tripminder.itinerary import Itinerary
from tripminder.transport import FixtureTransport, Response, write_fixture
from tripminder.weather import (
    DailyForecast,
    StaticWeatherProvider,
    TransportWeatherProvider,
    WeatherRule,
    clip_forecast,
    load_rule_items,
    recommend_for_weather,
)

COOL_ITEMS = ["light sweaters", "long pants", "gloves", "hats", "acrylic fibre clothes"]
HOT_ITEMS = ["light-colored dress", "cotton clothes", "water bottle"]
RAIN_ITEMS = ["Ankle boot", "Umbrella", "Raincoat"]


def day(d: str, lo: float, hi: float, rain: float = 0.0) -> DailyForecast:
    return DailyForecast(
        date=date.fromisoformat(d), min_temp_f=lo, max_temp_f=hi,
        summary="", rain_chance_pct=rain,
    )


def _itinerary(arrival: str, departure: str) -> Itinerary:
    return Itinerary(
        destination="X",
        arrival=date.fromisoformat(arrival),
        departure=date.fromisoformat(departure),
        departure_defaulted=True,
        depart_home_at=datetime(2020, 1, 1, tzinfo=timezone.utc),
    )


def test_daily_forecast_validation():
    with pytest.raises(ValueError):
        day("2020-11-25", 50.0, 40.0)
    with pytest.raises(ValueError):
        day("2020-11-25", 40.0, 50.0, rain=101.0)


def test_rule_items_cover_every_rule():
    items = load_rule_items()
    assert set(items) == set(WeatherRule)
    assert all(items[rule] for rule in WeatherRule)


def test_clip_keeps_only_stay_days():
    days = [day(f"2020-11-{n:02d}", 40, 60) for n in range(20, 30)]
    clipped = clip_forecast(days, _itinerary("2020-11-25", "2020-11-27"))
    assert [d.date.day for d in clipped] == [25, 26, 27]


def test_clip_outside_horizon_raises():
    days = [day("2020-11-01", 40, 60)]
    with pytest.raises(NoForecastError):
        clip_forecast(days, _itinerary("2020-11-25", "2020-11-27"))


def test_empty_forecast_raises():
    with pytest.raises(EmptyForecastError):
        recommend_for_weather([])


def test_cool_stay_golden():
    """Coldest minimum in (30, 50) with a mild-free maximum: COOL items only."""
    days = [
        day("2020-11-25", 35.16, 42.60, 17.0),
        day("2020-11-26", 34.79, 42.22, 17.0),
        day("2020-11-27", 34.42, 41.85, 17.0),
    ]
    advice = recommend_for_weather(days)
    assert list(advice.items) == COOL_ITEMS
    assert advice.triggered_rules == frozenset({WeatherRule.MIN_TEMP_COOL})


def test_hot_rainy_stay_golden():
    days = [
        day("2020-11-05", 67.18, 78.14, 4.0),
        day("2020-11-06", 63.48, 75.17, 4.0),
        day("2020-11-07", 58.48, 73.62, 85.0),
    ]
    advice = recommend_for_weather(days)
    assert list(advice.items) == HOT_ITEMS + RAIN_ITEMS
    assert advice.triggered_rules == frozenset({WeatherRule.MAX_TEMP_HOT, WeatherRule.RAIN})


def test_cold_beats_cool():
    advice = recommend_for_weather([day("2020-01-01", 20, 45)])
    assert WeatherRule.MIN_TEMP_COLD in advice.triggered_rules
    assert WeatherRule.MIN_TEMP_COOL not in advice.triggered_rules


def test_mild_band():
    advice = recommend_for_weather([day("2020-01-01", 55, 65)])
    assert advice.triggered_rules == frozenset({WeatherRule.MAX_TEMP_MILD})
    assert "water bottle" in advice.items


def test_boundaries_are_strict():
    # aggregates sitting exactly on a threshold trigger nothing on that axis
    assert recommend_for_weather([day("2020-01-01", 30.0, 50.0)]).triggered_rules == frozenset()
    assert recommend_for_weather([day("2020-01-01", 50.0, 70.0)]).triggered_rules == frozenset()
    advice = recommend_for_weather([day("2020-01-01", 55.0, 60.0, rain=40.0)])
    assert WeatherRule.RAIN not in advice.triggered_rules


def test_mild_and_hot_share_water_bottle_once():
    rule_items = load_rule_items()
    # force both max-temp rules' items through a crafted two-rule trigger:
    # a cool minimum plus a hot maximum, with the shared string appearing in
    # the COOL list via override
    override = dict(rule_items)
    override[WeatherRule.MIN_TEMP_COOL] = ["water bottle", "gloves"]
    advice = recommend_for_weather(
        [day("2020-01-01", 45.0, 75.0)], rule_items=override
    )
    assert advice.items.count("water bottle") == 1
    assert advice.items[0] == "water bottle"  # earlier rule claims it


def test_aggregation_uses_extremes_across_days():
    days = [
        day("2020-01-01", 55, 60, 10.0),
        day("2020-01-02", 28, 58, 10.0),   # coldest min
        day("2020-01-03", 54, 70.5, 45.0),  # hottest max, wettest day
    ]
    advice = recommend_for_weather(days)
    assert advice.triggered_rules == frozenset(
        {WeatherRule.MIN_TEMP_COLD, WeatherRule.MAX_TEMP_HOT, WeatherRule.RAIN}
    )


@given(perm=st.permutations(list(range(5))))
def test_day_order_never_changes_advice(perm):
    base = [
        day("2020-01-01", 31, 52, 5.0),
        day("2020-01-02", 33, 55, 50.0),
        day("2020-01-03", 40, 60, 0.0),
        day("2020-01-04", 45, 69.5, 20.0),
        day("2020-01-05", 38, 51, 41.0),
    ]
    shuffled = [base[i] for i in perm]
    assert recommend_for_weather(shuffled) == recommend_for_weather(base)


@given(
    r1=st.floats(min_value=0, max_value=100, allow_nan=False),
    r2=st.floats(min_value=0, max_value=100, allow_nan=False),
)
def test_rain_rule_is_monotone_in_rain_chance(r1, r2):
    lo, hi = sorted((r1, r2))
    advice_lo = recommend_for_weather([day("2020-01-01", 55, 60, lo)])
    advice_hi = recommend_for_weather([day("2020-01-01", 55, 60, hi)])
    if WeatherRule.RAIN in advice_lo.triggered_rules:
        assert WeatherRule.RAIN in advice_hi.triggered_rules


@given(
    t_min=st.floats(min_value=-40, max_value=80, allow_nan=False),
    spread=st.floats(min_value=0, max_value=60, allow_nan=False),
)
def test_min_temp_rules_are_mutually_exclusive(t_min, spread):
    advice = recommend_for_weather([day("2020-01-01", t_min, t_min + spread)])
    both_min = {WeatherRule.MIN_TEMP_COLD, WeatherRule.MIN_TEMP_COOL}
    both_max = {WeatherRule.MAX_TEMP_MILD, WeatherRule.MAX_TEMP_HOT}
    assert len(advice.triggered_rules & both_min) <= 1
    assert len(advice.triggered_rules & both_max) <= 1


def test_transport_provider_parses_fixture_payload(tmp_path):
    body = (
        b'{"days": [{"date": "2020-11-25", "min_temp_f": 35.16, '
        b'"max_temp_f": 42.6, "summary": "Partly cloudy", "rain_chance_pct": 17.0}]}'
    )
    write_fixture(tmp_path, "darksky", "forecast|Utopia|2020-11-25|2020-11-25",
                  Response(200, body))
    provider = TransportWeatherProvider(FixtureTransport(tmp_path, "darksky"))
    days = provider.forecast("Utopia", date(2020, 11, 25), date(2020, 11, 25))
    assert len(days) == 1
    assert days[0].date == date(2020, 11, 25)
    assert days[0].min_temp_f == 35.16
    assert days[0].max_temp_f == 42.6
    assert days[0].rain_chance_pct == 17.0
    assert days[0].summary == "Partly cloudy"


def test_transport_provider_non_200_raises(tmp_path):
    write_fixture(tmp_path, "darksky", "forecast|X|2020-01-01|2020-01-02",
                  Response(500, b"oops"))
    provider = TransportWeatherProvider(FixtureTransport(tmp_path, "darksky"))
    with pytest.raises(ProviderUnavailableError):
        provider.forecast("X", date(2020, 1, 1), date(2020, 1, 2))


def test_newport_fixture_forecast_golden(fixtures_root):
    provider = TransportWeatherProvider(FixtureTransport(fixtures_root, "darksky"))
    days = provider.forecast("Newport", date(2020, 11, 25), date(2020, 12, 2))
    assert [d.date.isoformat() for d in days] == ["2020-11-25", "2020-11-26", "2020-11-27"]
    advice = recommend_for_weather(days)
    assert list(advice.items) == COOL_ITEMS


def test_static_provider_round_trip():
    days = [day("2020-01-01", 40, 60)]
    provider = StaticWeatherProvider(days)
    assert provider.forecast("anywhere", date(2020, 1, 1), date(2020, 1, 2)) == days
