"""Trip lifecycle and the two notification triggers: the packing-list
push a day before leaving and the missed-items alert an hour before.

All state lives behind a single lock and every mutation appends one line
to a JSONL journal; replaying the journal at startup reconstructs trips,
selections, session summaries, and which events already fired.
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass
from datetime import date, datetime, timedelta, timezone
from enum import Enum
from pathlib import Path
from typing import Callable, Iterable, Mapping

from .errors import (
    AlreadyScheduledError,
    BadStateError,
    NoSelectionError,
    TripNotFoundError,
    UnknownItemError,
)
from .itinerary import Itinerary
from .reviews import RecommendationList, RecommendedItem, Source, normalize_item
from .tracker import PackingSession, TrackerConfig, load_label_synonyms, missed_items

RECOMMEND_LEAD = timedelta(hours=24)
ALERT_LEAD = timedelta(hours=1)

Clock = Callable[[], datetime]


def utc_now() -> datetime:
    return datetime.now(timezone.utc)


class TripState(Enum):
    CREATED = "CREATED"
    RECOMMENDED = "RECOMMENDED"
    SELECTED = "SELECTED"
    PACKING = "PACKING"
    ALERTED = "ALERTED"


_STATE_ORDER = list(TripState)


class EventKind(Enum):
    RECOMMEND = "RECOMMEND"
    ALERT = "ALERT"


@dataclass
class NotificationEvent:
    event_id: str
    trip_id: str
    kind: EventKind
    fire_at: datetime
    payload: list[str]
    fired: bool = False

    def to_dict(self) -> dict:
        return {
            "event_id": self.event_id,
            "trip_id": self.trip_id,
            "kind": self.kind.value,
            "fire_at": self.fire_at.isoformat(),
            "payload": list(self.payload),
            "fired": self.fired,
        }


@dataclass
class TripRecord:
    id: str
    itinerary: Itinerary
    recommendations: RecommendationList
    selection: list[str] | None = None
    session: PackingSession | None = None
    state: TripState = TripState.CREATED


def _itinerary_to_dict(it: Itinerary) -> dict:
    return {
        "destination": it.destination,
        "arrival": it.arrival.isoformat(),
        "departure": it.departure.isoformat(),
        "departure_defaulted": it.departure_defaulted,
        "depart_home_at": it.depart_home_at.isoformat(),
    }


def _itinerary_from_dict(raw: dict) -> Itinerary:
    return Itinerary(
        destination=raw["destination"],
        arrival=date.fromisoformat(raw["arrival"]),
        departure=date.fromisoformat(raw["departure"]),
        departure_defaulted=bool(raw["departure_defaulted"]),
        depart_home_at=datetime.fromisoformat(raw["depart_home_at"]),
    )


def _recommendations_to_list(recs: RecommendationList) -> list[dict]:
    return [
        {"name": item.name, "source": item.source.value, "evidence": item.evidence}
        for item in recs
    ]


def _recommendations_from_list(raw: list[dict]) -> RecommendationList:
    return RecommendationList(
        tuple(
            RecommendedItem(r["name"], Source(r["source"]), r.get("evidence", ""))
            for r in raw
        )
    )


class Scheduler:
    """Single-writer registry of trips and their notification events."""

    def __init__(
        self,
        journal_path: str | Path | None = None,
        clock: Clock = utc_now,
        synonyms: Mapping[str, str] | None = None,
        webhook: Callable[[dict], None] | None = None,
        tracker_config: TrackerConfig | None = None,
    ):
        self._lock = threading.RLock()
        self._clock = clock
        self._journal_path = Path(journal_path) if journal_path else None
        self._synonyms = dict(synonyms) if synonyms is not None else None
        self._webhook = webhook
        self._tracker_config = tracker_config or TrackerConfig()
        self._trips: dict[str, TripRecord] = {}
        self._events: dict[str, NotificationEvent] = {}
        self._pending_delivery: list[str] = []
        if self._journal_path is not None and self._journal_path.exists():
            self._replay()

    # -- journal ------------------------------------------------------------

    def _append(self, record: dict) -> None:
        if self._journal_path is None:
            return
        self._journal_path.parent.mkdir(parents=True, exist_ok=True)
        with self._journal_path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(record, sort_keys=True) + "\n")

    def _replay(self) -> None:
        for line in self._journal_path.read_text("utf-8").splitlines():
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            op = rec["op"]
            if op == "trip":
                trip = TripRecord(
                    id=rec["trip_id"],
                    itinerary=_itinerary_from_dict(rec["itinerary"]),
                    recommendations=_recommendations_from_list(rec["recommendations"]),
                    state=TripState(rec["state"]),
                )
                self._trips[trip.id] = trip
            elif op == "events":
                for ev in rec["events"]:
                    event = NotificationEvent(
                        event_id=ev["event_id"],
                        trip_id=rec["trip_id"],
                        kind=EventKind(ev["kind"]),
                        fire_at=datetime.fromisoformat(ev["fire_at"]),
                        payload=list(ev["payload"]),
                    )
                    self._events[event.event_id] = event
            elif op == "selection":
                self._trips[rec["trip_id"]].selection = list(rec["items"])
            elif op == "state":
                self._trips[rec["trip_id"]].state = TripState(rec["state"])
            elif op == "frames":
                trip = self._trips[rec["trip_id"]]
                if trip.session is None:
                    trip.session = PackingSession(
                        None, None, None, self._tracker_config
                    )
                trip.session.restore(
                    rec["confirmed"], rec["accepted"], rec["rejected_blur"]
                )
            elif op == "fired":
                event = self._events[rec["event_id"]]
                event.fired = True
                event.payload = list(rec["payload"])

    # -- helpers ------------------------------------------------------------

    def _trip(self, trip_id: str) -> TripRecord:
        try:
            return self._trips[trip_id]
        except KeyError:
            raise TripNotFoundError(f"no trip {trip_id!r}", trip_id=trip_id) from None

    def _advance(self, trip: TripRecord, target: TripState) -> None:
        cur = _STATE_ORDER.index(trip.state)
        new = _STATE_ORDER.index(target)
        if new < cur:
            raise BadStateError(
                f"cannot move {trip.state.value} -> {target.value}",
                trip_id=trip.id,
                state=trip.state.value,
            )
        if new == cur:
            return
        trip.state = target
        self._append({"op": "state", "trip_id": trip.id, "state": target.value})

    def _synonym_map(self) -> Mapping[str, str]:
        if self._synonyms is None:
            self._synonyms = load_label_synonyms()
        return self._synonyms

    def _missed_payload(self, trip: TripRecord) -> list[str]:
        selection = trip.selection or []
        confirmed = trip.session.confirmed if trip.session is not None else set()
        return missed_items(selection, confirmed, self._synonym_map())

    def _deliver(self, event: NotificationEvent) -> None:
        if self._webhook is None:
            return
        try:
            self._webhook(event.to_dict())
        except Exception:
            self._pending_delivery.append(event.event_id)

    # -- public API ---------------------------------------------------------

    def register_trip(
        self,
        itinerary: Itinerary,
        recommendations: RecommendationList,
        trip_id: str | None = None,
    ) -> TripRecord:
        with self._lock:
            trip = TripRecord(
                id=trip_id or uuid.uuid4().hex[:12],
                itinerary=itinerary,
                recommendations=recommendations,
            )
            self._trips[trip.id] = trip
            self._append(
                {
                    "op": "trip",
                    "trip_id": trip.id,
                    "itinerary": _itinerary_to_dict(itinerary),
                    "recommendations": _recommendations_to_list(recommendations),
                    "state": trip.state.value,
                }
            )
            return trip

    def schedule_triggers(self, trip_id: str) -> list[NotificationEvent]:
        """Create the RECOMMEND (T−24h) and ALERT (T−1h) events."""
        with self._lock:
            trip = self._trip(trip_id)
            if any(e.trip_id == trip_id for e in self._events.values()):
                raise AlreadyScheduledError(
                    "triggers already scheduled", trip_id=trip_id
                )
            depart = trip.itinerary.depart_home_at
            events = [
                NotificationEvent(
                    event_id=f"{trip_id}:recommend",
                    trip_id=trip_id,
                    kind=EventKind.RECOMMEND,
                    fire_at=depart - RECOMMEND_LEAD,
                    payload=list(trip.recommendations.names),
                ),
                NotificationEvent(
                    event_id=f"{trip_id}:alert",
                    trip_id=trip_id,
                    kind=EventKind.ALERT,
                    fire_at=depart - ALERT_LEAD,
                    payload=[],
                ),
            ]
            for event in events:
                self._events[event.event_id] = event
            self._append(
                {
                    "op": "events",
                    "trip_id": trip_id,
                    "events": [
                        {
                            "event_id": e.event_id,
                            "kind": e.kind.value,
                            "fire_at": e.fire_at.isoformat(),
                            "payload": list(e.payload),
                        }
                        for e in events
                    ],
                }
            )
            return events

    def open_trip(
        self,
        itinerary: Itinerary,
        recommendations: RecommendationList,
        trip_id: str | None = None,
    ) -> TripRecord:
        """Register, schedule both triggers, and mark RECOMMENDED."""
        with self._lock:
            trip = self.register_trip(itinerary, recommendations, trip_id)
            self.schedule_triggers(trip.id)
            self._advance(trip, TripState.RECOMMENDED)
            return trip

    def record_selection(self, trip_id: str, items: Iterable[str]) -> TripRecord:
        with self._lock:
            trip = self._trip(trip_id)
            if trip.state is not TripState.RECOMMENDED:
                raise BadStateError(
                    "selection only allowed while RECOMMENDED",
                    trip_id=trip_id,
                    state=trip.state.value,
                )
            items = list(items)
            known = {name for name in trip.recommendations.names}
            unknown = [i for i in items if normalize_item(i) not in known]
            if unknown:
                raise UnknownItemError(
                    "items not on the recommendation list", items=unknown
                )
            trip.selection = items
            self._append({"op": "selection", "trip_id": trip_id, "items": items})
            self._advance(trip, TripState.SELECTED)
            return trip

    def record_frames(self, trip_id: str, session: PackingSession) -> TripRecord:
        """Adopt the session and journal its summary after a frame batch."""
        with self._lock:
            trip = self._trip(trip_id)
            if trip.state not in (TripState.SELECTED, TripState.PACKING):
                raise BadStateError(
                    "frames only accepted after selection",
                    trip_id=trip_id,
                    state=trip.state.value,
                )
            trip.session = session
            self._append(
                {
                    "op": "frames",
                    "trip_id": trip_id,
                    "accepted": session.accepted,
                    "rejected_blur": session.rejected_blur,
                    "confirmed": sorted(session.confirmed),
                }
            )
            self._advance(trip, TripState.PACKING)
            return trip

    def due_events(self, now: datetime | None = None) -> list[NotificationEvent]:
        """Unfired events whose time has come, oldest first, fired exactly once."""
        with self._lock:
            self.flush_webhooks()
            if now is None:
                now = self._clock()
            due = sorted(
                (
                    e
                    for e in self._events.values()
                    if not e.fired and e.fire_at <= now
                ),
                key=lambda e: (e.fire_at, e.event_id),
            )
            for event in due:
                self._fire(event)
            return due

    def _fire(self, event: NotificationEvent) -> None:
        trip = self._trip(event.trip_id)
        if event.kind is EventKind.ALERT:
            event.payload = self._missed_payload(trip)
        event.fired = True
        self._append(
            {"op": "fired", "event_id": event.event_id, "payload": list(event.payload)}
        )
        if event.kind is EventKind.ALERT and trip.state is not TripState.ALERTED:
            self._advance(trip, TripState.ALERTED)
        elif event.kind is EventKind.RECOMMEND and trip.state is TripState.CREATED:
            self._advance(trip, TripState.RECOMMENDED)
        self._deliver(event)

    def finalize_alert(self, trip_id: str) -> NotificationEvent:
        """Fire the missed-items alert directly (requires a selection)."""
        with self._lock:
            trip = self._trip(trip_id)
            if trip.selection is None:
                raise NoSelectionError("no selection recorded", trip_id=trip_id)
            if trip.state is TripState.ALERTED:
                raise BadStateError("alert already delivered", trip_id=trip_id)
            event = self._events.get(f"{trip_id}:alert")
            if event is None:
                event = NotificationEvent(
                    event_id=f"{trip_id}:alert",
                    trip_id=trip_id,
                    kind=EventKind.ALERT,
                    fire_at=trip.itinerary.depart_home_at - ALERT_LEAD,
                    payload=[],
                )
                self._events[event.event_id] = event
                self._append(
                    {
                        "op": "events",
                        "trip_id": trip_id,
                        "events": [
                            {
                                "event_id": event.event_id,
                                "kind": event.kind.value,
                                "fire_at": event.fire_at.isoformat(),
                                "payload": [],
                            }
                        ],
                    }
                )
            self._fire(event)
            return event

    def preview_alert(self, trip_id: str) -> dict:
        """Read-only view of the alert: fired payload, or what it would be."""
        with self._lock:
            trip = self._trip(trip_id)
            event = self._events.get(f"{trip_id}:alert")
            if event is not None and event.fired:
                return event.to_dict()
            return {
                "event_id": f"{trip_id}:alert",
                "trip_id": trip_id,
                "kind": EventKind.ALERT.value,
                "fire_at": (
                    event.fire_at if event is not None
                    else trip.itinerary.depart_home_at - ALERT_LEAD
                ).isoformat(),
                "payload": self._missed_payload(trip) if trip.selection is not None else [],
                "fired": False,
            }

    def flush_webhooks(self) -> None:
        """Retry webhook deliveries that previously failed."""
        if self._webhook is None or not self._pending_delivery:
            return
        with self._lock:
            retry, self._pending_delivery = self._pending_delivery, []
            for event_id in retry:
                self._deliver(self._events[event_id])

    def get_trip(self, trip_id: str) -> TripRecord:
        with self._lock:
            return self._trip(trip_id)

    def trips(self) -> list[TripRecord]:
        with self._lock:
            return sorted(self._trips.values(), key=lambda t: t.id)

    def events_for(self, trip_id: str) -> list[NotificationEvent]:
        with self._lock:
            self._trip(trip_id)
            return sorted(
                (e for e in self._events.values() if e.trip_id == trip_id),
                key=lambda e: e.fire_at,
            )


def make_webhook_poster(url: str) -> Callable[[dict], None]:
    """POST event payloads as JSON; exceptions bubble to the retry queue."""
    import urllib.request

    def post(payload: dict) -> None:
        request = urllib.request.Request(
            url,
            data=json.dumps(payload).encode("utf-8"),
            headers={"Content-Type": "application/json"},
            method="POST",
        )
        with urllib.request.urlopen(request, timeout=5):
            pass

    return post
