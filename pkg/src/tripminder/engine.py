"""End-to-end pipeline: one email in, an itinerary plus a merged
recommendation list out.

Discovery and forecast failures degrade gracefully (no places found or
no forecast coverage just means fewer sources); transport failures
propagate so callers can report them.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timezone

from .config import AppConfig
from .errors import NoForecastError, NoResultsError
from .itinerary import (
    EntityTagger,
    EmailDocument,
    Itinerary,
    ItineraryConfig,
    default_tagger,
    extract_entities,
    resolve_itinerary,
)
from .poi import Poi, PoiProvider, TransportPoiProvider, fetch_pois
from .reviews import (
    PatternExtractor,
    RecommendationList,
    aggregate_recommendations,
    load_verb_lexicon,
    mine_poi_reviews,
    mine_text,
)
from .transport import FixtureTransport
from .weather import (
    TransportWeatherProvider,
    WeatherAdvice,
    WeatherProvider,
    WeatherRule,
    clip_forecast,
    load_rule_items,
    recommend_for_weather,
)


@dataclass
class TripPlan:
    """What the pipeline worked out for one email."""

    itinerary: Itinerary
    recommendations: RecommendationList
    pois: list[Poi]
    weather: WeatherAdvice | None


class PipelineEngine:
    """Wires the extraction stages behind one ``build_plan`` call."""

    def __init__(
        self,
        config: AppConfig | None = None,
        poi_provider: PoiProvider | None = None,
        weather_provider: WeatherProvider | None = None,
        tagger: EntityTagger | None = None,
    ):
        self.config = config or AppConfig()
        if poi_provider is None:
            poi_provider = TransportPoiProvider(
                FixtureTransport(self.config.fixture_root, self.config.search_provider)
            )
        if weather_provider is None:
            weather_provider = TransportWeatherProvider(
                FixtureTransport(self.config.fixture_root, self.config.weather_provider)
            )
        self._pois = poi_provider
        self._weather = weather_provider
        self._tagger = tagger or default_tagger()
        self._lexicon = load_verb_lexicon()
        self._extractor = PatternExtractor()
        self._rule_items = load_rule_items()

    def build_plan(
        self, email_text: str, received_at: datetime | None = None
    ) -> TripPlan:
        if received_at is None:
            received_at = datetime.now(timezone.utc)
        doc = EmailDocument(body=email_text, received_at=received_at)
        entities = extract_entities(doc, self._tagger)
        itinerary = resolve_itinerary(
            entities,
            reference=received_at.date(),
            config=ItineraryConfig(
                default_departure_hour=self.config.default_departure_hour,
                timezone=self.config.timezone,
            ),
        )

        email_pairs = [
            (f.item, f.sentence)
            for f in mine_text(doc.body, self._lexicon, self._extractor)
        ]

        try:
            pois = fetch_pois(
                itinerary.destination,
                self._pois,
                limit=self.config.poi_limit,
                reviews_per_poi=self.config.reviews_per_poi,
            )
        except NoResultsError:
            pois = []
        review_pairs = [
            (finding.item, finding.sentence)
            for _, finding in mine_poi_reviews(pois, self._lexicon, self._extractor)
        ]

        advice = None
        try:
            days = self._weather.forecast(
                itinerary.destination, itinerary.arrival, itinerary.departure
            )
            clipped = clip_forecast(days, itinerary)
            advice = recommend_for_weather(clipped, self._rule_items)
        except NoForecastError:
            advice = None
        weather_pairs = []
        if advice is not None:
            claimed: set[str] = set()
            for rule in WeatherRule:
                if rule not in advice.triggered_rules:
                    continue
                for item in self._rule_items[rule]:
                    lowered = item.lower()
                    if lowered not in claimed:
                        claimed.add(lowered)
                        weather_pairs.append((item, rule.value))

        recommendations = aggregate_recommendations(
            email_pairs, review_pairs, weather_pairs
        )
        return TripPlan(
            itinerary=itinerary,
            recommendations=recommendations,
            pois=pois,
            weather=advice,
        )
