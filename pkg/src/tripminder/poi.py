"""Places-of-interest discovery with recent reviews and popular mentions.

Provider payloads are JSON documents served through the record/replay
transport, so the whole module is deterministic under test fixtures.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Protocol

from .errors import EmptyDestinationError, NoResultsError, ProviderUnavailableError
from .transport import Transport

QUERY_PREFIX = "things to do in "
QUERY_SUFFIX = " tripadvisor.com"
DEFAULT_PROVIDER_TOKEN = "tripadvisor"

DEFAULT_POI_LIMIT = 10
DEFAULT_REVIEWS_PER_POI = 30


@dataclass(frozen=True)
class PoiQuery:
    text: str


@dataclass(frozen=True)
class Review:
    text: str
    fetched_at: datetime


@dataclass(frozen=True)
class Poi:
    name: str
    url: str
    reviews: tuple[Review, ...] = ()
    popular_mentions: tuple[str, ...] = ()


class PoiProvider(Protocol):
    """search() returns result URLs; fetch_poi() returns one POI page payload."""

    token: str

    def search(self, query: PoiQuery) -> list[str]: ...

    def fetch_poi(self, url: str) -> dict: ...


def build_poi_query(destination: str) -> PoiQuery:
    if not destination.strip():
        raise EmptyDestinationError("destination is empty")
    return PoiQuery(text=f"{QUERY_PREFIX}{destination}{QUERY_SUFFIX}")


def filter_provider_urls(urls: list[str], token: str = DEFAULT_PROVIDER_TOKEN) -> list[str]:
    """Keep URLs whose lowercase form contains the provider token, in order."""
    token = token.lower()
    return [u for u in urls if token in u.lower()]


def parse_popular_mentions(payload: dict) -> list[str]:
    """Ordered, deduplicated mention tokens from a POI page payload."""
    seen: set[str] = set()
    out: list[str] = []
    for token in payload.get("popular_mentions", []):
        if token not in seen:
            seen.add(token)
            out.append(token)
    return out


def _parse_instant(value: str) -> datetime:
    parsed = datetime.fromisoformat(value.replace("Z", "+00:00"))
    if parsed.tzinfo is None:
        parsed = parsed.replace(tzinfo=timezone.utc)
    return parsed


def parse_poi_payload(payload: dict, url: str, reviews_per_poi: int) -> Poi:
    reviews = [
        Review(text=r["text"], fetched_at=_parse_instant(r["at"]))
        for r in payload.get("reviews", [])
        if r.get("text")
    ]
    reviews.sort(key=lambda r: r.fetched_at, reverse=True)
    return Poi(
        name=payload.get("name", url),
        url=payload.get("url", url),
        reviews=tuple(reviews[:reviews_per_poi]),
        popular_mentions=tuple(parse_popular_mentions(payload)),
    )


def fetch_pois(
    destination: str,
    provider: PoiProvider,
    limit: int = DEFAULT_POI_LIMIT,
    reviews_per_poi: int = DEFAULT_REVIEWS_PER_POI,
) -> list[Poi]:
    """Search the provider, filter its URLs and load up to ``limit`` POIs.

    POI pages are fetched concurrently but results keep request order.
    """
    query = build_poi_query(destination)
    urls = filter_provider_urls(provider.search(query), provider.token)[:limit]
    if not urls:
        raise NoResultsError(f"no provider results for {destination!r}")

    def load(url: str) -> Poi:
        return parse_poi_payload(provider.fetch_poi(url), url, reviews_per_poi)

    with ThreadPoolExecutor(max_workers=min(8, len(urls))) as pool:
        return list(pool.map(load, urls))


@dataclass
class TransportPoiProvider:
    """Provider over a transport; request keys are 'search|<query>' and 'poi|<url>'."""

    transport: Transport
    token: str = DEFAULT_PROVIDER_TOKEN

    def search(self, query: PoiQuery) -> list[str]:
        response = self.transport.get(f"search|{query.text}")
        if response.status != 200:
            raise ProviderUnavailableError(
                f"search returned status {response.status}", query=query.text
            )
        return list(json.loads(response.text)["urls"])

    def fetch_poi(self, url: str) -> dict:
        response = self.transport.get(f"poi|{url}")
        if response.status != 200:
            raise ProviderUnavailableError(
                f"poi page returned status {response.status}", url=url
            )
        return json.loads(response.text)


@dataclass
class StaticPoiProvider:
    """In-memory provider for unit tests."""

    urls: list[str]
    pages: dict[str, dict] = field(default_factory=dict)
    token: str = DEFAULT_PROVIDER_TOKEN

    def search(self, query: PoiQuery) -> list[str]:
        return list(self.urls)

    def fetch_poi(self, url: str) -> dict:
        return self.pages.get(url, {"name": url, "url": url, "reviews": []})
