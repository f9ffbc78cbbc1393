"""Trip planning helpers: itinerary extraction from email, packing
recommendations from weather and reviews, packing verification from
video frames, and the reminder scheduler that ties them together."""

from .config import AppConfig, load_config
from .engine import PipelineEngine, TripPlan
from .errors import TripMinderError
from .gateway import create_app
from .itinerary import EmailDocument, Itinerary, extract_entities, resolve_itinerary
from .reviews import (
    PatternExtractor,
    RecommendationList,
    RecommendedItem,
    Source,
    aggregate_recommendations,
)
from .scheduler import NotificationEvent, Scheduler, TripRecord, TripState
from .tracker import PackingSession, TrackerConfig, missed_items
from .weather import DailyForecast, WeatherAdvice, recommend_for_weather

__version__ = "0.1.0"

__all__ = [
    "AppConfig",
    "DailyForecast",
    "EmailDocument",
    "Itinerary",
    "NotificationEvent",
    "PackingSession",
    "PatternExtractor",
    "PipelineEngine",
    "RecommendationList",
    "RecommendedItem",
    "Scheduler",
    "Source",
    "TrackerConfig",
    "TripMinderError",
    "TripPlan",
    "TripRecord",
    "TripState",
    "WeatherAdvice",
    "aggregate_recommendations",
    "create_app",
    "extract_entities",
    "load_config",
    "missed_items",
    "recommend_for_weather",
    "resolve_itinerary",
    "__version__",
]
