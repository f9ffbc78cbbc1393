"""Precision/recall comparison of item extractors over an annotated
corpus, reported per method in a fixed column order."""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Protocol, Sequence

from .errors import EmptyCorpusError
from .reviews import (
    PatternExtractor,
    load_verb_lexicon,
    mine_text,
    normalize_item,
    tfidf_per_document,
)

CANONICAL_METHOD_ORDER = (
    "lda",
    "tfidf",
    "popular_mentions",
    "qna",
    "spacy_ner",
    "pattern",
)


@dataclass(frozen=True)
class AnnotatedReview:
    text: str
    ground_truth: frozenset[str]

    def __post_init__(self):
        object.__setattr__(
            self, "ground_truth", frozenset(normalize_item(g) for g in self.ground_truth)
        )


def load_corpus(path: str | Path) -> list[AnnotatedReview]:
    """Line-delimited JSON records {"text", "ground_truth": [names]}."""
    corpus = []
    for line in Path(path).read_text("utf-8").splitlines():
        line = line.strip()
        if not line:
            continue
        rec = json.loads(line)
        corpus.append(AnnotatedReview(rec["text"], frozenset(rec["ground_truth"])))
    return corpus


def precision(pred: set, gt: set) -> float:
    pred, gt = set(pred), set(gt)
    if not pred:
        return 1.0 if not gt else 0.0
    return len(pred & gt) / len(pred)


def recall(pred: set, gt: set) -> float:
    pred, gt = set(pred), set(gt)
    if not gt:
        return 1.0
    return len(pred & gt) / len(gt)


class ExtractionMethod(Protocol):
    name: str

    def predict(self, corpus: Sequence[AnnotatedReview]) -> list[list[str]]: ...


@dataclass
class StaticMethod:
    """Precomputed per-document predictions (external baselines)."""

    name: str
    predictions: Sequence[Sequence[str]]

    def predict(self, corpus: Sequence[AnnotatedReview]) -> list[list[str]]:
        if len(self.predictions) != len(corpus):
            raise ValueError(
                f"{self.name}: {len(self.predictions)} predictions for {len(corpus)} documents"
            )
        return [list(p) for p in self.predictions]


@dataclass
class PatternMethod:
    """The in-house extractor, run document-by-document."""

    name: str = "pattern"

    def predict(self, corpus: Sequence[AnnotatedReview]) -> list[list[str]]:
        lexicon = load_verb_lexicon()
        extractor = PatternExtractor()
        return [
            [f.item for f in mine_text(doc.text, lexicon, extractor)] for doc in corpus
        ]


@dataclass
class TfidfMethod:
    """Per-document top-k n-grams scored with corpus idf."""

    k: int = 3
    name: str = "tfidf"

    def predict(self, corpus: Sequence[AnnotatedReview]) -> list[list[str]]:
        return tfidf_per_document([doc.text for doc in corpus], self.k)


class Averaging(Enum):
    MACRO = "MACRO"
    MICRO = "MICRO"


@dataclass(frozen=True)
class DocScore:
    precision: float
    recall: float


@dataclass(frozen=True)
class MethodReport:
    name: str
    precision_pct: float
    recall_pct: float
    per_document: tuple[DocScore, ...]


@dataclass(frozen=True)
class MetricsReport:
    mode: Averaging
    methods: tuple[MethodReport, ...]


def _canonical_order(methods: Sequence[ExtractionMethod]) -> list[ExtractionMethod]:
    known = {name: i for i, name in enumerate(CANONICAL_METHOD_ORDER)}
    # names outside the canonical list sort after it, alphabetically, so the
    # report never depends on caller ordering
    return sorted(methods, key=lambda m: (known.get(m.name, len(known)), m.name))


def run_comparison(
    corpus: Sequence[AnnotatedReview],
    methods: Sequence[ExtractionMethod],
    mode: Averaging = Averaging.MACRO,
) -> MetricsReport:
    """Score every method over the corpus.

    MACRO averages per-document scores over documents with non-empty
    ground truth (all documents if there are none); MICRO pools counts.
    """
    if not corpus:
        raise EmptyCorpusError("cannot evaluate an empty corpus")
    names = [m.name for m in methods]
    if len(names) != len(set(names)):
        raise ValueError(f"duplicate method names: {sorted(names)}")
    reports = []
    for method in _canonical_order(methods):
        predictions = [
            {normalize_item(p) for p in preds} for preds in method.predict(corpus)
        ]
        per_doc = tuple(
            DocScore(precision(pred, doc.ground_truth), recall(pred, doc.ground_truth))
            for pred, doc in zip(predictions, corpus)
        )
        if mode is Averaging.MACRO:
            picked = [
                score
                for score, doc in zip(per_doc, corpus)
                if doc.ground_truth
            ] or list(per_doc)
            p = sum(s.precision for s in picked) / len(picked)
            r = sum(s.recall for s in picked) / len(picked)
        else:
            hit = sum(len(pred & doc.ground_truth) for pred, doc in zip(predictions, corpus))
            n_pred = sum(len(pred) for pred in predictions)
            n_gt = sum(len(doc.ground_truth) for doc in corpus)
            p = hit / n_pred if n_pred else (1.0 if n_gt == 0 else 0.0)
            r = hit / n_gt if n_gt else 1.0
        reports.append(
            MethodReport(
                name=method.name,
                precision_pct=100.0 * p,
                recall_pct=100.0 * r,
                per_document=per_doc,
            )
        )
    return MetricsReport(mode=mode, methods=tuple(reports))


def report_rows(report: MetricsReport) -> list[dict]:
    return [
        {
            "method": m.name,
            "precision_pct": m.precision_pct,
            "recall_pct": m.recall_pct,
        }
        for m in report.methods
    ]


def render_report(report: MetricsReport) -> str:
    """Aligned-text table, deterministic for identical inputs."""
    width = max([len("method")] + [len(m.name) for m in report.methods])
    lines = [
        f"{'method'.ljust(width)}  precision%  recall%  ({report.mode.value})"
    ]
    for m in report.methods:
        lines.append(
            f"{m.name.ljust(width)}  {m.precision_pct:>9.2f}  {m.recall_pct:>7.2f}"
        )
    return "\n".join(lines) + "\n"
