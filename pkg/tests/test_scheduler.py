"""Trip lifecycle, the two notification triggers and journal durability."""

from __future__ import annotations

from datetime import datetime, timedelta, timezone

import pytest

from tripminder.errors import (
    AlreadyScheduledError,
    BadStateError,
    NoSelectionError,
    TripNotFoundError,
    UnknownItemError,
)
from tripminder.itinerary import Itinerary
from tripminder.reviews import RecommendationList, RecommendedItem, Source
from tripminder.scheduler import (
    ALERT_LEAD,
    RECOMMEND_LEAD,
    EventKind,
    Scheduler,
    TripState,
)
from tripminder.tracker import PackingSession

DEPART = datetime(2020, 11, 25, 9, 0, tzinfo=timezone.utc)
SYNONYMS = {"bottle": "water", "cap": "hat"}


def make_itinerary(depart_home_at: datetime = DEPART) -> Itinerary:
    return Itinerary(
        destination="Newport",
        arrival=depart_home_at.date(),
        departure=depart_home_at.date() + timedelta(days=7),
        departure_defaulted=True,
        depart_home_at=depart_home_at,
    )


def recs(*names: str) -> RecommendationList:
    return RecommendationList(
        tuple(RecommendedItem(name, Source.REVIEW) for name in names)
    )


class FakeClock:
    def __init__(self, at: datetime):
        self.at = at

    def __call__(self) -> datetime:
        return self.at


@pytest.fixture
def clock() -> FakeClock:
    return FakeClock(DEPART - timedelta(days=30))


@pytest.fixture
def scheduler(clock: FakeClock) -> Scheduler:
    return Scheduler(clock=clock, synonyms=SYNONYMS)


def open_default(scheduler: Scheduler, *names: str):
    if not names:
        names = ("water", "hat", "jacket", "id")
    return scheduler.open_trip(make_itinerary(), recs(*names), trip_id="t1")


# --- scheduling -------------------------------------------------------------

def test_open_trip_schedules_both_triggers(scheduler):
    trip = open_default(scheduler)
    assert trip.state is TripState.RECOMMENDED
    events = scheduler.events_for(trip.id)
    assert [e.event_id for e in events] == ["t1:recommend", "t1:alert"]
    assert events[0].fire_at == DEPART - RECOMMEND_LEAD
    assert events[0].fire_at == datetime(2020, 11, 24, 9, 0, tzinfo=timezone.utc)
    assert events[1].fire_at == DEPART - ALERT_LEAD
    assert events[1].fire_at == datetime(2020, 11, 25, 8, 0, tzinfo=timezone.utc)
    assert events[0].payload == ["water", "hat", "jacket", "id"]
    assert events[1].payload == []


def test_triggers_cannot_be_scheduled_twice(scheduler):
    trip = open_default(scheduler)
    with pytest.raises(AlreadyScheduledError):
        scheduler.schedule_triggers(trip.id)


def test_unknown_trip_raises(scheduler):
    with pytest.raises(TripNotFoundError):
        scheduler.get_trip("nope")
    with pytest.raises(TripNotFoundError):
        scheduler.events_for("nope")


# --- exactly-once firing ----------------------------------------------------

def test_nothing_due_before_first_trigger(scheduler, clock):
    open_default(scheduler)
    clock.at = DEPART - RECOMMEND_LEAD - timedelta(seconds=1)
    assert scheduler.due_events() == []


def test_recommend_fires_exactly_once(scheduler, clock):
    open_default(scheduler)
    clock.at = DEPART - RECOMMEND_LEAD
    fired = scheduler.due_events()
    assert [e.kind for e in fired] == [EventKind.RECOMMEND]
    assert fired[0].payload == ["water", "hat", "jacket", "id"]
    for _ in range(100):
        assert scheduler.due_events() == []


def test_past_due_events_fire_on_next_poll_in_order(scheduler, clock):
    open_default(scheduler)
    clock.at = DEPART  # both triggers are already past
    fired = scheduler.due_events()
    assert [e.kind for e in fired] == [EventKind.RECOMMEND, EventKind.ALERT]
    assert scheduler.due_events() == []


def test_explicit_now_overrides_clock(scheduler):
    open_default(scheduler)
    fired = scheduler.due_events(now=DEPART - RECOMMEND_LEAD)
    assert len(fired) == 1


# --- selection --------------------------------------------------------------

def test_selection_happy_path_preserves_surface(scheduler):
    trip = open_default(scheduler)
    updated = scheduler.record_selection(trip.id, ["Water ", "hat"])
    assert updated.selection == ["Water ", "hat"]
    assert updated.state is TripState.SELECTED


def test_selection_rejects_items_off_the_list(scheduler):
    trip = open_default(scheduler)
    with pytest.raises(UnknownItemError) as err:
        scheduler.record_selection(trip.id, ["water", "grappling hook"])
    assert err.value.details["items"] == ["grappling hook"]
    assert scheduler.get_trip(trip.id).selection is None


def test_selection_requires_recommended_state(scheduler):
    trip = scheduler.register_trip(make_itinerary(), recs("water"), trip_id="t9")
    with pytest.raises(BadStateError):
        scheduler.record_selection(trip.id, ["water"])


def test_second_selection_rejected(scheduler):
    trip = open_default(scheduler)
    scheduler.record_selection(trip.id, ["water"])
    with pytest.raises(BadStateError):
        scheduler.record_selection(trip.id, ["hat"])


# --- frames -----------------------------------------------------------------

def _session(confirmed: set[str], accepted: int = 10, rejected: int = 1) -> PackingSession:
    session = PackingSession(None, None, None)
    session.restore(confirmed=confirmed, accepted=accepted, rejected_blur=rejected)
    return session


def test_frames_require_selection(scheduler):
    trip = open_default(scheduler)
    with pytest.raises(BadStateError):
        scheduler.record_frames(trip.id, _session(set()))


def test_frames_advance_to_packing_and_stick(scheduler):
    trip = open_default(scheduler)
    scheduler.record_selection(trip.id, ["water", "hat"])
    updated = scheduler.record_frames(trip.id, _session({"bottle"}))
    assert updated.state is TripState.PACKING
    # second batch stays in PACKING
    updated = scheduler.record_frames(trip.id, _session({"bottle", "cap"}))
    assert updated.state is TripState.PACKING


# --- the alert payload ------------------------------------------------------

def test_alert_payload_is_the_missed_diff(scheduler, clock):
    trip = open_default(scheduler)
    scheduler.record_selection(trip.id, ["water", "hat", "jacket", "id"])
    scheduler.record_frames(trip.id, _session({"bottle", "cap"}))
    clock.at = DEPART - ALERT_LEAD
    fired = scheduler.due_events()
    alert = [e for e in fired if e.kind is EventKind.ALERT][0]
    # bottle/cap confirm water/hat via synonyms; jacket and id stay missed,
    # in selection order
    assert alert.payload == ["jacket", "id"]
    assert scheduler.get_trip(trip.id).state is TripState.ALERTED


def test_alert_without_selection_fires_empty(scheduler, clock):
    trip = open_default(scheduler)
    clock.at = DEPART
    fired = scheduler.due_events()
    alert = [e for e in fired if e.kind is EventKind.ALERT][0]
    assert alert.payload == []
    assert scheduler.get_trip(trip.id).state is TripState.ALERTED


def test_alert_with_selection_but_no_frames_misses_everything(scheduler, clock):
    trip = open_default(scheduler)
    scheduler.record_selection(trip.id, ["water", "jacket"])
    clock.at = DEPART
    fired = scheduler.due_events()
    alert = [e for e in fired if e.kind is EventKind.ALERT][0]
    assert alert.payload == ["water", "jacket"]


def test_finalize_alert_requires_selection(scheduler):
    trip = open_default(scheduler)
    with pytest.raises(NoSelectionError):
        scheduler.finalize_alert(trip.id)


def test_finalize_alert_fires_immediately(scheduler):
    trip = open_default(scheduler)
    scheduler.record_selection(trip.id, ["water", "jacket"])
    scheduler.record_frames(trip.id, _session({"bottle"}))
    event = scheduler.finalize_alert(trip.id)
    assert event.fired is True
    assert event.payload == ["jacket"]
    assert scheduler.get_trip(trip.id).state is TripState.ALERTED
    with pytest.raises(BadStateError):
        scheduler.finalize_alert(trip.id)


def test_preview_alert_does_not_fire(scheduler):
    trip = open_default(scheduler)
    scheduler.record_selection(trip.id, ["water", "jacket"])
    preview = scheduler.preview_alert(trip.id)
    assert preview["fired"] is False
    assert preview["payload"] == ["water", "jacket"]
    assert scheduler.get_trip(trip.id).state is TripState.SELECTED
    assert not any(e.fired for e in scheduler.events_for(trip.id))


def test_preview_after_firing_shows_frozen_payload(scheduler, clock):
    trip = open_default(scheduler)
    scheduler.record_selection(trip.id, ["water", "jacket"])
    scheduler.finalize_alert(trip.id)
    preview = scheduler.preview_alert(trip.id)
    assert preview["fired"] is True
    assert preview["payload"] == ["water", "jacket"]


# --- journal durability -----------------------------------------------------

def full_flow(journal, clock) -> str:
    scheduler = Scheduler(journal_path=journal, clock=clock, synonyms=SYNONYMS)
    trip = scheduler.open_trip(make_itinerary(), recs("water", "hat", "jacket"), trip_id="tj")
    clock.at = DEPART - RECOMMEND_LEAD
    scheduler.due_events()
    scheduler.record_selection(trip.id, ["water", "hat", "jacket"])
    scheduler.record_frames(trip.id, _session({"bottle"}, accepted=20, rejected=3))
    clock.at = DEPART - ALERT_LEAD
    scheduler.due_events()
    return trip.id


def test_journal_replay_restores_everything(tmp_path, clock):
    journal = tmp_path / "journal.jsonl"
    trip_id = full_flow(journal, clock)

    replayed = Scheduler(journal_path=journal, clock=clock, synonyms=SYNONYMS)
    trip = replayed.get_trip(trip_id)
    assert trip.state is TripState.ALERTED
    assert trip.selection == ["water", "hat", "jacket"]
    assert list(trip.recommendations.names) == ["water", "hat", "jacket"]
    assert trip.session is not None
    assert trip.session.accepted == 20
    assert trip.session.rejected_blur == 3
    assert trip.session.confirmed == {"bottle"}

    events = replayed.events_for(trip_id)
    assert all(e.fired for e in events)
    recommend = [e for e in events if e.kind is EventKind.RECOMMEND][0]
    assert recommend.payload == ["water", "hat", "jacket"]
    alert = [e for e in events if e.kind is EventKind.ALERT][0]
    assert alert.payload == ["hat", "jacket"]

    # nothing refires after restart
    clock.at = DEPART + timedelta(days=2)
    assert replayed.due_events() == []


def test_journal_is_append_only_jsonl(tmp_path, clock):
    import json

    journal = tmp_path / "journal.jsonl"
    full_flow(journal, clock)
    lines = journal.read_text("utf-8").splitlines()
    ops = [json.loads(line)["op"] for line in lines]
    assert ops[0] == "trip"
    assert ops.count("fired") == 2
    assert {"events", "selection", "state", "frames"} <= set(ops)


# --- webhook delivery -------------------------------------------------------

def test_webhook_failure_is_retried_until_delivered(clock):
    posted = []
    fail_first = {"remaining": 1}

    def webhook(payload: dict) -> None:
        if fail_first["remaining"] > 0:
            fail_first["remaining"] -= 1
            raise ConnectionError("endpoint down")
        posted.append(payload)

    scheduler = Scheduler(clock=clock, synonyms=SYNONYMS, webhook=webhook)
    scheduler.open_trip(make_itinerary(), recs("water"), trip_id="tw")
    clock.at = DEPART - RECOMMEND_LEAD
    scheduler.due_events()
    assert posted == []  # first delivery attempt failed
    scheduler.due_events()  # poll flushes the retry queue
    assert len(posted) == 1
    assert posted[0]["event_id"] == "tw:recommend"
    assert posted[0]["payload"] == ["water"]


def test_trips_listing_sorted(scheduler):
    scheduler.open_trip(make_itinerary(), recs("water"), trip_id="zz")
    scheduler.open_trip(make_itinerary(), recs("water"), trip_id="aa")
    assert [t.id for t in scheduler.trips()] == ["aa", "zz"]
