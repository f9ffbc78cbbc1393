"""Command-line mirror of the HTTP API, plus the eval report runner."""

from __future__ import annotations

import json
from datetime import datetime, timezone
from pathlib import Path

import click

from .config import load_config
from .errors import ConsentRequiredError, TripMinderError
from .evalharness import (
    Averaging,
    PatternMethod,
    StaticMethod,
    TfidfMethod,
    load_corpus,
    render_report,
    run_comparison,
)
from .gateway import build_runtime, create_app, trip_summary


def _runtime(config_path):
    config = load_config(config_path)
    engine, scheduler = build_runtime(config)
    return config, engine, scheduler


def _emit(payload) -> None:
    click.echo(json.dumps(payload, indent=2))


def _fail(err: TripMinderError) -> None:
    click.echo(json.dumps({"error": err.to_dict()}, indent=2), err=True)
    raise SystemExit(1)


def _parse_instant(raw: str | None) -> datetime | None:
    if raw is None:
        return None
    stamp = datetime.fromisoformat(raw)
    return stamp if stamp.tzinfo is not None else stamp.replace(tzinfo=timezone.utc)


_config_option = click.option(
    "--config",
    "config_path",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="TOML config file",
)


@click.group()
def main():
    """Travel recommendation and reminder tools."""


@main.group()
def trip():
    """Create and manage trips."""


@trip.command("create")
@click.option(
    "--email",
    "email_path",
    type=click.Path(exists=True, dir_okay=False),
    required=True,
    help="file holding the raw email text",
)
@click.option("--received-at", default=None, help="ISO timestamp the email arrived")
@click.option(
    "--consent",
    is_flag=True,
    default=False,
    help="allow destination and dates to reach the providers",
)
@_config_option
def trip_create(email_path, received_at, consent, config_path):
    try:
        if not consent:
            raise ConsentRequiredError("pass --consent to allow provider lookups")
        _, engine, scheduler = _runtime(config_path)
        plan = engine.build_plan(
            Path(email_path).read_text("utf-8"), _parse_instant(received_at)
        )
        record = scheduler.open_trip(plan.itinerary, plan.recommendations)
        _emit(trip_summary(record, scheduler))
    except TripMinderError as err:
        _fail(err)


@trip.command("show")
@click.argument("trip_id")
@_config_option
def trip_show(trip_id, config_path):
    try:
        _, _, scheduler = _runtime(config_path)
        _emit(trip_summary(scheduler.get_trip(trip_id), scheduler))
    except TripMinderError as err:
        _fail(err)


@trip.command("select")
@click.argument("trip_id")
@click.argument("items", nargs=-1)
@_config_option
def trip_select(trip_id, items, config_path):
    try:
        _, _, scheduler = _runtime(config_path)
        record = scheduler.record_selection(trip_id, list(items))
        _emit(trip_summary(record, scheduler))
    except TripMinderError as err:
        _fail(err)


@trip.command("frames")
@click.argument("trip_id")
@click.option(
    "--manifest",
    type=click.Path(exists=True, dir_okay=False),
    required=True,
    help="file listing frame images in order",
)
@click.option(
    "--script",
    "script_path",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="scripted backend detections (JSON records)",
)
@_config_option
def trip_frames(trip_id, manifest, script_path, config_path):
    from .frames import load_manifest
    from .tracker import (
        PackingSession,
        ScriptedClassifier,
        ScriptedDetector,
        WholeFrameSegmenter,
        load_backend_script,
    )

    try:
        config, _, scheduler = _runtime(config_path)
        record = scheduler.get_trip(trip_id)
        records = load_backend_script(script_path) if script_path else []
        primary = ScriptedDetector.from_records(
            records, known={label for _, label, _ in records}
        )
        fallback = ScriptedClassifier.from_records(records)
        session = record.session
        if session is None:
            session = PackingSession(
                primary, WholeFrameSegmenter(), fallback, config.tracker
            )
        else:
            session.rebind(primary, WholeFrameSegmenter(), fallback)
        for frame in load_manifest(manifest):
            session.ingest(frame)
        scheduler.record_frames(trip_id, session)
        _emit(
            {
                "trip_id": trip_id,
                "accepted": session.accepted,
                "rejected_blur": session.rejected_blur,
                "confirmed": sorted(session.confirmed),
            }
        )
    except TripMinderError as err:
        _fail(err)


@trip.command("alert")
@click.argument("trip_id")
@_config_option
def trip_alert(trip_id, config_path):
    try:
        _, _, scheduler = _runtime(config_path)
        _emit(scheduler.finalize_alert(trip_id).to_dict())
    except TripMinderError as err:
        _fail(err)


@main.group()
def notify():
    """Poll and deliver notifications."""


@notify.command("poll")
@click.option("--now", default=None, help="ISO timestamp to poll at (default: wall clock)")
@_config_option
def notify_poll(now, config_path):
    try:
        _, _, scheduler = _runtime(config_path)
        events = scheduler.due_events(_parse_instant(now))
        _emit([e.to_dict() for e in events])
    except TripMinderError as err:
        _fail(err)


@main.group(name="eval")
def eval_group():
    """Extractor evaluation reports."""


@eval_group.command("run")
@click.option(
    "--corpus",
    type=click.Path(exists=True, dir_okay=False),
    required=True,
    help="JSONL records {text, ground_truth}",
)
@click.option(
    "--baselines",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="JSON map of method name to per-document predictions",
)
@click.option(
    "--mode",
    type=click.Choice(["macro", "micro"]),
    default="macro",
    show_default=True,
)
@click.option("--tfidf-k", default=3, show_default=True, help="top-k for the tf-idf baseline")
def eval_run(corpus, baselines, mode, tfidf_k):
    try:
        docs = load_corpus(corpus)
        methods = {m.name: m for m in (PatternMethod(), TfidfMethod(k=tfidf_k))}
        if baselines:
            # recorded predictions win over recomputation for the same name
            table = json.loads(Path(baselines).read_text("utf-8"))
            for name, preds in table.items():
                methods[name] = StaticMethod(name, preds)
        report = run_comparison(docs, list(methods.values()), Averaging[mode.upper()])
        click.echo(render_report(report), nl=False)
    except TripMinderError as err:
        _fail(err)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
@_config_option
def serve(host, port, config_path):
    """Run the HTTP gateway (serves the console if built)."""
    import uvicorn

    app = create_app(load_config(config_path))
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
