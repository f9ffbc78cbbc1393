"""JSON HTTP facade over the pipeline, scheduler, and packing tracker."""

from __future__ import annotations

from datetime import datetime, timezone
from typing import Optional

from fastapi import Depends, FastAPI, Header, Query
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .config import AppConfig
from .engine import PipelineEngine
from .errors import BadStateError, ConsentRequiredError, TripMinderError, UnauthorizedError
from .frames import load_manifest
from .scheduler import (
    NotificationEvent,
    Scheduler,
    TripRecord,
    TripState,
    make_webhook_poster,
)
from .tracker import (
    PackingSession,
    ScriptedClassifier,
    ScriptedDetector,
    WholeFrameSegmenter,
    load_backend_script,
)

STATUS_BY_CODE = {
    "EMPTY_DOCUMENT": 400,
    "BAD_FRAME": 400,
    "FRAME_TOO_SMALL": 400,
    "DIMENSION_MISMATCH": 400,
    "EMPTY_CORPUS": 400,
    "UNAUTHORIZED": 401,
    "CONSENT_REQUIRED": 403,
    "TRIP_NOT_FOUND": 404,
    "ALREADY_SCHEDULED": 409,
    "BAD_STATE": 409,
    "NO_SELECTION": 409,
    "NO_LOCATION": 422,
    "NO_FUTURE_DATE": 422,
    "EMPTY_DESTINATION": 422,
    "UNKNOWN_ITEM": 422,
    "NO_RESULTS": 502,
    "NO_FORECAST": 502,
    "EMPTY_FORECAST": 502,
    "PROVIDER_UNAVAILABLE": 502,
    "BACKEND_FAILURE": 502,
    "INTERNAL": 500,
}


class CreateTripBody(BaseModel):
    email_text: str
    received_at: Optional[datetime] = None
    consent: bool = False


class SelectionBody(BaseModel):
    items: list[str]


class FramesBody(BaseModel):
    manifest: str
    backend_script: Optional[str] = None


def _ensure_aware(dt: datetime) -> datetime:
    return dt if dt.tzinfo is not None else dt.replace(tzinfo=timezone.utc)


def _event_dicts(events: list[NotificationEvent]) -> list[dict]:
    return [e.to_dict() for e in events]


def _session_dict(trip: TripRecord) -> dict | None:
    if trip.session is None:
        return None
    return {
        "accepted": trip.session.accepted,
        "rejected_blur": trip.session.rejected_blur,
        "confirmed": sorted(trip.session.confirmed),
    }


def trip_summary(trip: TripRecord, scheduler: Scheduler) -> dict:
    it = trip.itinerary
    return {
        "id": trip.id,
        "state": trip.state.value,
        "itinerary": {
            "destination": it.destination,
            "arrival": it.arrival.isoformat(),
            "departure": it.departure.isoformat(),
            "departure_defaulted": it.departure_defaulted,
            "depart_home_at": it.depart_home_at.isoformat(),
        },
        "recommendations": [
            {"name": r.name, "source": r.source.value, "evidence": r.evidence}
            for r in trip.recommendations
        ],
        "selection": trip.selection,
        "session": _session_dict(trip),
        "events": _event_dicts(scheduler.events_for(trip.id)),
    }


def build_runtime(config: AppConfig) -> tuple[PipelineEngine, Scheduler]:
    engine = PipelineEngine(config)
    webhook = make_webhook_poster(config.webhook_url) if config.webhook_url else None
    scheduler = Scheduler(
        journal_path=config.journal_path,
        webhook=webhook,
        tracker_config=config.tracker,
    )
    return engine, scheduler


def create_app(
    config: AppConfig | None = None,
    engine: PipelineEngine | None = None,
    scheduler: Scheduler | None = None,
) -> FastAPI:
    config = config or AppConfig()
    if engine is None or scheduler is None:
        built_engine, built_scheduler = build_runtime(config)
        engine = engine or built_engine
        scheduler = scheduler or built_scheduler

    def require_token(authorization: Optional[str] = Header(None)) -> None:
        if config.api_token is None:
            return
        if authorization != f"Bearer {config.api_token}":
            raise UnauthorizedError("missing or wrong bearer token")

    app = FastAPI(title="tripminder", dependencies=[Depends(require_token)])
    app.state.engine = engine
    app.state.scheduler = scheduler
    app.state.config = config

    @app.exception_handler(TripMinderError)
    async def on_domain_error(_, exc: TripMinderError):
        return JSONResponse(
            status_code=STATUS_BY_CODE.get(exc.code, 500),
            content={"error": exc.to_dict()},
        )

    @app.post("/trips", status_code=201)
    def create_trip(body: CreateTripBody):
        if not body.consent:
            raise ConsentRequiredError(
                "location and dates leave the device only with consent"
            )
        received = _ensure_aware(body.received_at) if body.received_at else None
        plan = engine.build_plan(body.email_text, received)
        trip = scheduler.open_trip(plan.itinerary, plan.recommendations)
        return trip_summary(trip, scheduler)

    @app.get("/trips")
    def list_trips():
        return [trip_summary(t, scheduler) for t in scheduler.trips()]

    @app.get("/trips/{trip_id}")
    def get_trip(trip_id: str):
        return trip_summary(scheduler.get_trip(trip_id), scheduler)

    @app.post("/trips/{trip_id}/selection")
    def post_selection(trip_id: str, body: SelectionBody):
        trip = scheduler.record_selection(trip_id, body.items)
        return trip_summary(trip, scheduler)

    @app.post("/trips/{trip_id}/frames")
    def post_frames(trip_id: str, body: FramesBody):
        trip = scheduler.get_trip(trip_id)
        if trip.state not in (TripState.SELECTED, TripState.PACKING):
            raise BadStateError(
                "frames only accepted after selection",
                trip_id=trip_id,
                state=trip.state.value,
            )
        records = (
            load_backend_script(body.backend_script) if body.backend_script else []
        )
        primary = ScriptedDetector.from_records(
            records, known={label for _, label, _ in records}
        )
        fallback = ScriptedClassifier.from_records(records)
        segmenter = WholeFrameSegmenter()
        session = trip.session
        if session is None:
            session = PackingSession(primary, segmenter, fallback, config.tracker)
        else:
            session.rebind(primary, segmenter, fallback)
        for frame in load_manifest(body.manifest):
            session.ingest(frame)
        scheduler.record_frames(trip_id, session)
        return {
            "trip_id": trip_id,
            "state": scheduler.get_trip(trip_id).state.value,
            **_session_dict(scheduler.get_trip(trip_id)),
        }

    @app.get("/trips/{trip_id}/alert")
    def get_alert(trip_id: str):
        return scheduler.preview_alert(trip_id)

    @app.post("/trips/{trip_id}/alert")
    def post_alert(trip_id: str):
        return scheduler.finalize_alert(trip_id).to_dict()

    @app.get("/notifications")
    def poll_notifications(now: Optional[datetime] = Query(None)):
        instant = _ensure_aware(now) if now else None
        return _event_dicts(scheduler.due_events(instant))

    if config.static_dir is not None and config.static_dir.is_dir():
        app.mount(
            "/", StaticFiles(directory=config.static_dir, html=True), name="console"
        )

    return app
