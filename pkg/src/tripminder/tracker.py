"""Packing verification: blur gating, confidence-gated detection with a
salient-mask fallback, sliding-window smoothing, and the missed-item
diff.

Backends are contracts so tests can script them: a primary detector
(label + confidence + known categories), a salient segmenter (binary
mask), and a fallback classifier run on the masked frame.
"""

from __future__ import annotations

import json
from collections import Counter, deque
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Protocol, Sequence

from .errors import BackendFailureError
from .frames import Frame, apply_salient_mask, laplacian_variance
from .reviews import _load_lines, normalize_item

DEFAULT_GAMMA = 40.0
DEFAULT_DELTA = 0.7
DEFAULT_WINDOW = 15
DEFAULT_QUORUM = 8


class Backend(Enum):
    PRIMARY = "PRIMARY"
    FALLBACK = "FALLBACK"


class VerdictStatus(Enum):
    REJECTED_BLUR = "REJECTED_BLUR"
    PRIMARY_ACCEPT = "PRIMARY_ACCEPT"
    FALLBACK_ACCEPT = "FALLBACK_ACCEPT"


@dataclass(frozen=True)
class TrackerConfig:
    gamma: float = DEFAULT_GAMMA
    delta: float = DEFAULT_DELTA
    window: int = DEFAULT_WINDOW
    quorum: int = DEFAULT_QUORUM

    def __post_init__(self):
        if self.gamma < 0:
            raise ValueError("gamma must be non-negative")
        if not 0.0 <= self.delta <= 1.0:
            raise ValueError("delta must lie in [0, 1]")
        if not 1 <= self.quorum <= self.window:
            raise ValueError("need 1 <= quorum <= window")


@dataclass(frozen=True)
class Detection:
    label: str
    confidence: float
    backend: Backend

    def __post_init__(self):
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError("confidence must lie in [0, 1]")


@dataclass(frozen=True)
class FrameVerdict:
    frame_index: int
    status: VerdictStatus
    detection: Detection | None
    blur_score: float

    def __post_init__(self):
        rejected = self.status is VerdictStatus.REJECTED_BLUR
        if rejected != (self.detection is None):
            raise ValueError("detection must be present exactly when accepted")


class PrimaryDetector(Protocol):
    known_categories: frozenset[str]

    def detect(self, frame: Frame) -> list[tuple[str, float]]: ...


class SalientSegmenter(Protocol):
    def segment(self, frame: Frame) -> list[int]: ...


class FallbackClassifier(Protocol):
    def classify(self, frame: Frame) -> str: ...


def process_frame(
    frame: Frame,
    primary: PrimaryDetector,
    segmenter: SalientSegmenter,
    fallback: FallbackClassifier,
    cfg: TrackerConfig | None = None,
) -> FrameVerdict:
    """Run one frame through the gate cascade.

    Frames at or below the blur threshold are rejected without touching
    any backend.  The primary detection wins only when its label is a
    known category and its confidence strictly clears delta; everything
    else goes through mask-and-classify.
    """
    if cfg is None:
        cfg = TrackerConfig()
    blur = laplacian_variance(frame)
    if blur <= cfg.gamma:
        return FrameVerdict(frame.index, VerdictStatus.REJECTED_BLUR, None, blur)

    try:
        candidates = primary.detect(frame)
    except Exception as exc:
        raise BackendFailureError(
            f"primary detector failed: {exc}", frame_index=frame.index
        ) from exc
    best: tuple[str, float] | None = None
    for label, confidence in candidates:
        if best is None or confidence > best[1]:
            best = (label, confidence)
    if best is not None:
        label, confidence = best
        if label in primary.known_categories and confidence > cfg.delta:
            detection = Detection(label, confidence, Backend.PRIMARY)
            return FrameVerdict(frame.index, VerdictStatus.PRIMARY_ACCEPT, detection, blur)

    try:
        mask = segmenter.segment(frame)
        mixed = apply_salient_mask(frame, mask)
        label = fallback.classify(mixed)
    except Exception as exc:
        raise BackendFailureError(
            f"fallback path failed: {exc}", frame_index=frame.index
        ) from exc
    detection = Detection(label, 1.0, Backend.FALLBACK)
    return FrameVerdict(frame.index, VerdictStatus.FALLBACK_ACCEPT, detection, blur)


def smooth_predictions(
    verdicts: Iterable[FrameVerdict], cfg: TrackerConfig | None = None
) -> set[str]:
    """Labels seen at least ``quorum`` times within some ``window``-length
    run of accepted verdicts.  Confirmation is permanent."""
    if cfg is None:
        cfg = TrackerConfig()
    confirmed: set[str] = set()
    window: deque[str] = deque(maxlen=cfg.window)
    counts: Counter = Counter()
    for verdict in verdicts:
        if verdict.status is VerdictStatus.REJECTED_BLUR:
            continue
        if len(window) == cfg.window:
            counts[window[0]] -= 1
        label = verdict.detection.label
        window.append(label)
        counts[label] += 1
        if counts[label] >= cfg.quorum:
            confirmed.add(label)
    return confirmed


class PackingSession:
    """Order-sensitive per-trip tracker state.

    Keeps the raw verdict trace for audit alongside the smoothed
    confirmation set.
    """

    def __init__(
        self,
        primary: PrimaryDetector,
        segmenter: SalientSegmenter,
        fallback: FallbackClassifier,
        config: TrackerConfig | None = None,
    ):
        self.config = config or TrackerConfig()
        self._primary = primary
        self._segmenter = segmenter
        self._fallback = fallback
        self.verdicts: list[FrameVerdict] = []
        self.confirmed: set[str] = set()
        self.accepted = 0
        self.rejected_blur = 0
        self._window: deque[str] = deque(maxlen=self.config.window)
        self._counts: Counter = Counter()

    def ingest(self, frame: Frame) -> FrameVerdict:
        verdict = process_frame(
            frame, self._primary, self._segmenter, self._fallback, self.config
        )
        self.verdicts.append(verdict)
        if verdict.status is VerdictStatus.REJECTED_BLUR:
            self.rejected_blur += 1
            return verdict
        self.accepted += 1
        if len(self._window) == self.config.window:
            self._counts[self._window[0]] -= 1
        label = verdict.detection.label
        self._window.append(label)
        self._counts[label] += 1
        if self._counts[label] >= self.config.quorum:
            self.confirmed.add(label)
        return verdict

    def ingest_all(self, frames: Iterable[Frame]) -> list[FrameVerdict]:
        return [self.ingest(frame) for frame in frames]

    def restore(self, confirmed: Iterable[str], accepted: int, rejected_blur: int) -> None:
        """Re-seed summary state after a journal replay (verdict trace is
        not persisted; the smoothing window restarts empty)."""
        self.confirmed = set(confirmed)
        self.accepted = accepted
        self.rejected_blur = rejected_blur

    def rebind(
        self,
        primary: PrimaryDetector,
        segmenter: SalientSegmenter,
        fallback: FallbackClassifier,
    ) -> None:
        """Attach live backends to a session restored from the journal."""
        self._primary = primary
        self._segmenter = segmenter
        self._fallback = fallback


def load_label_synonyms() -> dict[str, str]:
    """Detector label → item name, from ``data/label_synonyms.txt``."""
    mapping: dict[str, str] = {}
    for line in _load_lines("label_synonyms.txt"):
        label, sep, item = line.partition("->")
        if not sep:
            raise ValueError(f"bad synonym line: {line!r}")
        mapping[normalize_item(label)] = normalize_item(item)
    return mapping


def missed_items(
    pruned: Sequence[str],
    confirmed: Iterable[str],
    synonyms: Mapping[str, str] | None = None,
) -> list[str]:
    """Pruned items never confirmed under any synonym, original order."""
    if synonyms is None:
        synonyms = load_label_synonyms()
    covered = set()
    for label in confirmed:
        norm = normalize_item(label)
        covered.add(synonyms.get(norm, norm))
    return [item for item in pruned if normalize_item(item) not in covered]


# --- scripted mock backends ------------------------------------------------

def load_backend_script(path: str | Path) -> list[tuple[int, str, float]]:
    """Ordered (frame_index, label, confidence) records from a JSON file."""
    records = json.loads(Path(path).read_text("utf-8"))
    return [(int(i), str(label), float(conf)) for i, label, conf in records]


@dataclass
class ScriptedDetector:
    """Replays detections by frame index; the primary-model stand-in."""

    script: Mapping[int, tuple[str, float]]
    known_categories: frozenset[str]

    @classmethod
    def from_records(
        cls, records: Iterable[tuple[int, str, float]], known: Iterable[str]
    ) -> "ScriptedDetector":
        return cls(
            script={i: (label, conf) for i, label, conf in records},
            known_categories=frozenset(known),
        )

    def detect(self, frame: Frame) -> list[tuple[str, float]]:
        hit = self.script.get(frame.index)
        return [hit] if hit is not None else []


class WholeFrameSegmenter:
    """All-ones mask: treat the full frame as salient."""

    def segment(self, frame: Frame) -> list[int]:
        return [1] * (frame.width * frame.height)


@dataclass
class ScriptedClassifier:
    """Replays fallback labels by frame index."""

    script: Mapping[int, str]
    default: str = "unknown"

    @classmethod
    def from_records(
        cls, records: Iterable[tuple[int, str, float]], default: str = "unknown"
    ) -> "ScriptedClassifier":
        return cls(script={i: label for i, label, _ in records}, default=default)

    def classify(self, frame: Frame) -> str:
        return self.script.get(frame.index, self.default)
