"""Email parsing: entity tagging, date normalization, itinerary resolution.

The tagging backend is pluggable.  The default shipped here is fully
deterministic: a gazetteer of location names, a gazetteer of person name
tokens and a small date-pattern grammar.  Statistical taggers can be swapped
in by implementing :class:`EntityTagger`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import date, datetime, timedelta
from enum import Enum
from importlib import resources
from typing import Iterable, Protocol, Sequence
from zoneinfo import ZoneInfo

from .errors import EmptyDocumentError, NoFutureDateError, NoLocationError

DEFAULT_STAY_DAYS = 7  # departure falls back to one week after arrival


class EntityClass(Enum):
    LOCATION = "LOCATION"
    PERSON = "PERSON"
    ORGANIZATION = "ORGANIZATION"
    MONEY = "MONEY"
    PERCENT = "PERCENT"
    DATE = "DATE"
    TIME = "TIME"


@dataclass(frozen=True)
class EmailDocument:
    """A raw inbound document (email or SMS body)."""

    body: str
    received_at: datetime
    subject: str | None = None

    def __post_init__(self):
        if not self.body.strip():
            raise EmptyDocumentError("document body is blank")


@dataclass(frozen=True, order=True)
class EntitySpan:
    start: int
    end: int
    klass: EntityClass = field(compare=False)
    surface: str = field(compare=False)

    def __post_init__(self):
        if not 0 <= self.start < self.end:
            raise ValueError(f"bad span offsets {self.start}..{self.end}")


@dataclass(frozen=True)
class EntitySet:
    """Tagger output: spans sorted by offset, plus the source text they index."""

    text: str
    spans: tuple[EntitySpan, ...]

    @classmethod
    def build(cls, text: str, spans: Iterable[EntitySpan]) -> "EntitySet":
        seen: set[tuple[int, int, EntityClass]] = set()
        unique = []
        for span in sorted(spans, key=lambda s: (s.start, s.end, s.klass.value)):
            key = (span.start, span.end, span.klass)
            if key in seen:
                continue
            if text[span.start:span.end] != span.surface:
                raise ValueError(f"span {key} does not round-trip against the text")
            seen.add(key)
            unique.append(span)
        return cls(text=text, spans=tuple(unique))

    def by_class(self, klass: EntityClass) -> list[EntitySpan]:
        return [s for s in self.spans if s.klass is klass]


@dataclass(frozen=True)
class Itinerary:
    destination: str
    arrival: date
    departure: date
    departure_defaulted: bool
    depart_home_at: datetime

    def __post_init__(self):
        if self.arrival > self.departure:
            raise ValueError("arrival must not be after departure")


@dataclass(frozen=True)
class ItineraryConfig:
    default_departure_hour: int = 9
    timezone: str = "UTC"


class EntityTagger(Protocol):
    """Pluggable tagging backend."""

    def tag(self, text: str) -> list[EntitySpan]: ...


# --- date grammar -----------------------------------------------------------

_MONTHS = {
    "jan": 1, "january": 1, "feb": 2, "february": 2, "mar": 3, "march": 3,
    "apr": 4, "april": 4, "may": 5, "jun": 6, "june": 6, "jul": 7, "july": 7,
    "aug": 8, "august": 8, "sep": 9, "sept": 9, "september": 9,
    "oct": 10, "october": 10, "nov": 11, "november": 11,
    "dec": 12, "december": 12,
}

_MONTH_ALT = "|".join(sorted(_MONTHS, key=len, reverse=True))
_DAY = r"\d{1,2}(?:st|nd|rd|th)?"

DATE_PATTERNS = [
    # Nov 30, 2020 / November 5 / Nov. 5th
    re.compile(rf"\b(?:{_MONTH_ALT})\.?\s+{_DAY}(?:\s*,\s*\d{{4}})?\b", re.IGNORECASE),
    # 30 November 2020 / 5 Nov
    re.compile(rf"\b{_DAY}\s+(?:{_MONTH_ALT})\.?(?:\s*,?\s*\d{{4}})?\b", re.IGNORECASE),
    # ISO 2020-11-25
    re.compile(r"\b\d{4}-\d{1,2}-\d{1,2}\b"),
]

_TOKEN_RE = re.compile(r"[A-Za-z0-9]+")

# connectors that mark an arrival..departure pair in prose
_RANGE_CONNECTORS = {"to", "-", "--", "–", "—", "until", "till", "through", "thru"}


def _leftmost_longest(matches: list[tuple[int, int]]) -> list[tuple[int, int]]:
    chosen: list[tuple[int, int]] = []
    for start, end in sorted(matches, key=lambda m: (m[0], -(m[1] - m[0]))):
        if chosen and start < chosen[-1][1]:
            continue
        chosen.append((start, end))
    return chosen


class GazetteerTagger:
    """Deterministic default tagger.

    Locations are matched as full gazetteer phrases (longest match wins),
    person names token-by-token, dates by the built-in pattern grammar with
    one DATE span emitted per token so downstream grouping mirrors
    token-level taggers.
    """

    def __init__(
        self,
        locations: Iterable[str] | None = None,
        person_names: Iterable[str] | None = None,
    ):
        if locations is None:
            locations = _load_data_lines("locations.txt")
        if person_names is None:
            person_names = _load_data_lines("person_names.txt")
        self._locations = [e for e in locations if e]
        self._location_res = [
            re.compile(rf"(?<![A-Za-z0-9]){re.escape(entry)}(?![A-Za-z0-9])")
            for entry in self._locations
        ]
        self._person_tokens = {e for e in person_names if e}

    def tag(self, text: str) -> list[EntitySpan]:
        spans: list[EntitySpan] = []
        loc_matches: list[tuple[int, int]] = []
        for rx in self._location_res:
            loc_matches.extend(m.span() for m in rx.finditer(text))
        for start, end in _leftmost_longest(loc_matches):
            spans.append(EntitySpan(start, end, EntityClass.LOCATION, text[start:end]))

        for m in _TOKEN_RE.finditer(text):
            if m.group() in self._person_tokens:
                spans.append(EntitySpan(m.start(), m.end(), EntityClass.PERSON, m.group()))

        date_matches: list[tuple[int, int]] = []
        for rx in DATE_PATTERNS:
            date_matches.extend(m.span() for m in rx.finditer(text))
        for start, end in _leftmost_longest(date_matches):
            for tok in _TOKEN_RE.finditer(text, start, end):
                spans.append(EntitySpan(tok.start(), tok.end(), EntityClass.DATE, tok.group()))
        return spans


def default_tagger() -> GazetteerTagger:
    return GazetteerTagger()


def extract_entities(doc: EmailDocument, tagger: EntityTagger | None = None) -> EntitySet:
    """Run the tagging backend over the document body."""
    if not doc.body.strip():
        raise EmptyDocumentError("document body is blank")
    if tagger is None:
        tagger = default_tagger()
    return EntitySet.build(doc.body, tagger.tag(doc.body))


# --- date normalization -----------------------------------------------------

def _group_date_spans(spans: Sequence[EntitySpan], max_gap: int = 3) -> list[list[EntitySpan]]:
    groups: list[list[EntitySpan]] = []
    for span in spans:
        if groups and span.start - groups[-1][-1].end <= max_gap:
            groups[-1].append(span)
        else:
            groups.append([span])
    return groups


def _month_of(token: str) -> int | None:
    return _MONTHS.get(token.lower().rstrip("."))


def _day_of(token: str) -> int | None:
    m = re.fullmatch(r"(\d{1,2})(?:st|nd|rd|th)?", token, re.IGNORECASE)
    if not m:
        return None
    day = int(m.group(1))
    return day if 1 <= day <= 31 else None


def _year_of(token: str) -> int | None:
    return int(token) if re.fullmatch(r"\d{4}", token) else None


def _next_occurrence(month: int, day: int, reference: date) -> date | None:
    for year in (reference.year, reference.year + 1):
        try:
            candidate = date(year, month, day)
        except ValueError:
            continue
        if candidate >= reference:
            return candidate
    return None


def _parse_token_group(tokens: list[str], reference: date) -> list[date]:
    """Greedy parse of merged DATE tokens into calendar dates.

    Unparseable fragments are skipped, not errors.
    """
    out: list[date] = []
    i = 0
    while i < len(tokens):
        three = tokens[i:i + 3]
        if len(three) == 3:
            m, d, y = _month_of(three[0]), _day_of(three[1]), _year_of(three[2])
            if m and d and y:
                try:
                    out.append(date(y, m, d))
                    i += 3
                    continue
                except ValueError:
                    pass
            d, m, y = _day_of(three[0]), _month_of(three[1]), _year_of(three[2])
            if m and d and y:
                try:
                    out.append(date(y, m, d))
                    i += 3
                    continue
                except ValueError:
                    pass
            y, mm, dd = _year_of(three[0]), three[1], three[2]
            if y and re.fullmatch(r"\d{1,2}", mm) and re.fullmatch(r"\d{1,2}", dd):
                try:
                    out.append(date(y, int(mm), int(dd)))
                    i += 3
                    continue
                except ValueError:
                    pass
        two = tokens[i:i + 2]
        if len(two) == 2:
            m, d = _month_of(two[0]), _day_of(two[1])
            if not (m and d):
                d, m = _day_of(two[0]), _month_of(two[1])
            if m and d:
                resolved = _next_occurrence(m, d, reference)
                if resolved is not None:
                    out.append(resolved)
                    i += 2
                    continue
        i += 1
    return out


def _as_date(reference: date | datetime) -> date:
    return reference.date() if isinstance(reference, datetime) else reference


def _dated_groups(entities: EntitySet, reference: date | datetime) -> list[tuple[int, int, list[date]]]:
    """(start_offset, end_offset, parsed dates) per merged DATE token group."""
    ref_date = _as_date(reference)
    result = []
    for group in _group_date_spans(entities.by_class(EntityClass.DATE)):
        parsed = _parse_token_group([s.surface for s in group], ref_date)
        if parsed:
            result.append((group[0].start, group[-1].end, parsed))
    return result


def normalize_dates(entities: EntitySet, reference: date | datetime) -> list[date]:
    """Merge adjacent DATE tokens into calendar dates, sorted and deduplicated.

    Month-day dates without a year resolve to the next occurrence on or
    after the reference date.
    """
    dates: set[date] = set()
    for _, _, parsed in _dated_groups(entities, reference):
        dates.update(parsed)
    return sorted(dates)


# --- itinerary resolution ---------------------------------------------------

def _load_data_lines(name: str) -> list[str]:
    raw = resources.files("tripminder.data").joinpath(name).read_text("utf-8")
    return [
        line.strip()
        for line in raw.splitlines()
        if line.strip() and not line.lstrip().startswith("#")
    ]


def _state_names() -> set[str]:
    return {line.lower() for line in _load_data_lines("state_names.txt")}


def _pick_destination(locations: Sequence[EntitySpan]) -> str:
    # bare state names/abbreviations are rarely the trip destination; skip
    # them unless nothing else was tagged
    states = _state_names()
    for span in locations:
        if span.surface.lower() not in states:
            return span.surface
    return locations[0].surface


def _range_departure(
    entities: EntitySet, groups: list[tuple[int, int, list[date]]], arrival: date
) -> date | None:
    """Departure from an explicit 'X to Y' style pair starting at the arrival."""
    for (s1, e1, d1), (s2, e2, d2) in zip(groups, groups[1:]):
        connector = entities.text[e1:s2].strip().strip(",").strip().lower()
        if connector not in _RANGE_CONNECTORS:
            continue
        if len(d1) == 1 and len(d2) == 1 and d1[0] == arrival and d2[0] >= arrival:
            return d2[0]
    # a tight 'Nov 5-Nov 9' merges into one token group of exactly two dates
    for _, _, parsed in groups:
        if len(parsed) == 2 and parsed[0] == arrival and parsed[1] >= arrival:
            return parsed[1]
    return None


def resolve_itinerary(
    entities: EntitySet,
    reference: date | datetime,
    config: ItineraryConfig | None = None,
) -> Itinerary:
    """Resolve destination, arrival and departure from tagged entities.

    Arrival is the earliest future date.  Departure comes from an explicit
    date range when present, else defaults to a week after arrival.
    """
    config = config or ItineraryConfig()
    locations = entities.by_class(EntityClass.LOCATION)
    if not locations:
        raise NoLocationError("no LOCATION entity tagged")

    groups = _dated_groups(entities, reference)
    future = sorted(d for _, _, parsed in groups for d in parsed if d >= _as_date(reference))
    if not future:
        raise NoFutureDateError("no normalizable future DATE entity")

    arrival = future[0]
    departure = _range_departure(entities, groups, arrival)
    defaulted = departure is None
    if defaulted:
        departure = arrival + timedelta(days=DEFAULT_STAY_DAYS)

    depart_home_at = datetime(
        arrival.year, arrival.month, arrival.day,
        hour=config.default_departure_hour,
        tzinfo=ZoneInfo(config.timezone),
    )
    return Itinerary(
        destination=_pick_destination(locations),
        arrival=arrival,
        departure=departure,
        departure_defaulted=defaulted,
        depart_home_at=depart_home_at,
    )
