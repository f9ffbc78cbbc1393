"""Mining advice out of free text: sentence splitting, imperative
detection, carryable-object extraction, a tf-idf baseline, and the final
recommendation merge.

A sentence counts as advice when its first alphabetic word (ignoring a
leading "please") is a known verb, or when it ends with an exclamation
mark.  Within advice sentences, trigger verbs ("bring", "wear", ...) and
positive heads ("don't forget", "be sure") open item collection, while a
bare negation ("don't", "do not", "never") vetoes the sentence.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from typing import Callable, Iterable, Protocol, Sequence

from .errors import EmptyCorpusError
from .poi import Poi

TRIGGER_VERBS = frozenset(
    {"bring", "take", "carry", "wear", "pack", "apply", "grab", "keep", "buy"}
)
POSITIVE_HEADS = ("don't forget", "dont forget", "do not forget", "be sure")
NEGATIVE_HEADS = ("don't", "dont", "do not", "never")

DEFAULT_EXTRACTOR_QUERY = "Which items would a traveler want to carry on this trip?"

# Trailing words that keep a period from ending the sentence.
_ABBREVIATIONS = frozenset(
    {"mr", "mrs", "ms", "dr", "prof", "rev", "st", "mt", "ft", "vs", "etc",
     "inc", "ltd", "jr", "sr", "ave", "blvd", "dept", "fig", "al", "approx"}
)

_TOKEN_RE = re.compile(r"[a-z0-9']+")
_WS_RE = re.compile(r"\s+")


def _load_lines(name: str) -> list[str]:
    raw = resources.files("tripminder.data").joinpath(name).read_text("utf-8")
    out = []
    for line in raw.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(line)
    return out


def load_verb_lexicon() -> frozenset[str]:
    return frozenset(_load_lines("verb_lexicon.txt"))


def load_carryable_gazetteer() -> frozenset[str]:
    return frozenset(_load_lines("carryable_gazetteer.txt"))


def normalize_item(name: str) -> str:
    """Lowercase with single internal spaces — the item-name normal form."""
    return _WS_RE.sub(" ", name).strip().lower()


def tokenize(sentence: str) -> list[str]:
    # Curly apostrophes fold to straight ones so "don’t" == "don't".
    lowered = sentence.replace("’", "'").lower()
    return _TOKEN_RE.findall(lowered)


class SentenceSource(Enum):
    EMAIL = "EMAIL"
    REVIEW = "REVIEW"


@dataclass(frozen=True)
class Sentence:
    text: str
    source: SentenceSource
    index: int
    poi: str | None = None

    def __post_init__(self):
        if not self.text.strip():
            raise ValueError("sentence text blank")


def _split_chunks(text: str) -> list[str]:
    """Terminator-retaining split with an abbreviation guard on periods."""
    chunks: list[str] = []
    start = 0
    i = 0
    n = len(text)
    while i < n:
        if text[i] not in ".!?":
            i += 1
            continue
        j = i
        while j + 1 < n and text[j + 1] in ".!?":
            j += 1
        boundary = True
        if i == j and text[i] == ".":
            k = i - 1
            while k >= 0 and (text[k].isalnum() or text[k] == "'"):
                k -= 1
            if text[k + 1 : i].lower() in _ABBREVIATIONS:
                boundary = False
        if boundary:
            chunk = text[start : j + 1].strip()
            if chunk:
                chunks.append(chunk)
            start = j + 1
        i = j + 1
    tail = text[start:].strip()
    if tail:
        chunks.append(tail)
    return chunks


def split_sentences(
    text: str,
    source: SentenceSource = SentenceSource.EMAIL,
    poi: str | None = None,
) -> list[Sentence]:
    return [
        Sentence(text=chunk, source=source, index=pos, poi=poi)
        for pos, chunk in enumerate(_split_chunks(text))
    ]


def _text_of(sentence: Sentence | str) -> str:
    return sentence.text if isinstance(sentence, Sentence) else sentence


def is_imperative(sentence: Sentence | str, lexicon: frozenset[str] | None = None) -> bool:
    """First alphabetic word (after an optional "please") is a verb, or '!'-final."""
    if lexicon is None:
        lexicon = load_verb_lexicon()
    text = _text_of(sentence)
    if text.rstrip().endswith("!"):
        return True
    words = [t for t in tokenize(text) if any(c.isalpha() for c in t)]
    if words and words[0] == "please":
        words = words[1:]
    return bool(words) and words[0] in lexicon


@dataclass(frozen=True)
class ExtractorConfig:
    """Knobs for the pattern extractor; defaults mirror the shipped data."""

    trigger_verbs: frozenset[str] = TRIGGER_VERBS
    positive_heads: tuple[str, ...] = POSITIVE_HEADS
    negative_heads: tuple[str, ...] = NEGATIVE_HEADS
    gazetteer: frozenset[str] = field(default_factory=load_carryable_gazetteer)

    def __post_init__(self):
        if not self.gazetteer:
            raise ValueError("carryable gazetteer must not be empty")
        if set(self.positive_heads) & set(self.negative_heads):
            raise ValueError("head phrase sets must be disjoint")


class ObjectExtractor(Protocol):
    def extract(self, sentence: Sentence | str) -> list[str]: ...


def _match_gazetteer(
    tokens: Sequence[str], start: int, gazetteer: frozenset[str], max_words: int
) -> tuple[str, int] | None:
    """Longest gazetteer phrase at ``start``; returns (canonical form, words used).

    A trailing-s mismatch on the final word still matches, and the
    gazetteer spelling is what gets reported.
    """
    for length in range(min(max_words, len(tokens) - start), 0, -1):
        phrase = " ".join(tokens[start : start + length])
        if phrase in gazetteer:
            return phrase, length
        if phrase + "s" in gazetteer:
            return phrase + "s", length
        if phrase.endswith("s") and phrase[:-1] in gazetteer:
            return phrase[:-1], length
    return None


class PatternExtractor:
    """Deterministic trigger-and-gazetteer extractor.

    A bare negation met before collection starts vetoes the whole
    sentence; one met mid-collection just stops further matching.
    """

    def __init__(self, config: ExtractorConfig | None = None):
        self.config = config or ExtractorConfig()
        by_length = lambda heads: sorted((tuple(tokenize(h)) for h in heads), key=len, reverse=True)
        self._positive = by_length(self.config.positive_heads)
        self._negative = by_length(self.config.negative_heads)
        self._max_words = max(p.count(" ") + 1 for p in self.config.gazetteer)

    @staticmethod
    def _head_at(tokens: list[str], i: int, heads: list[tuple[str, ...]]) -> int:
        for head in heads:
            if tuple(tokens[i : i + len(head)]) == head:
                return len(head)
        return 0

    def extract(self, sentence: Sentence | str) -> list[str]:
        cfg = self.config
        tokens = tokenize(_text_of(sentence))
        found: list[str] = []
        collecting = False
        i = 0
        while i < len(tokens):
            used = self._head_at(tokens, i, self._positive)
            if used:
                collecting = True
                i += used
                continue
            used = self._head_at(tokens, i, self._negative)
            if used:
                if collecting:
                    break
                return []
            if tokens[i] in cfg.trigger_verbs:
                collecting = True
                i += 1
                continue
            if collecting:
                hit = _match_gazetteer(tokens, i, cfg.gazetteer, self._max_words)
                if hit is not None:
                    canonical, width = hit
                    if canonical not in found:
                        found.append(canonical)
                    i += width
                    continue
            i += 1
        return found


@dataclass
class RemoteExtractor:
    """Adapter for a span-model service.

    ``post`` carries the transport: it takes ``{"sentence", "query"}`` and
    must return ``{"spans": [{"start", "end"}, ...]}`` with offsets into
    the sentence text.
    """

    post: Callable[[dict], dict]
    query: str = DEFAULT_EXTRACTOR_QUERY

    def extract(self, sentence: Sentence | str) -> list[str]:
        text = _text_of(sentence)
        response = self.post({"sentence": text, "query": self.query})
        out: list[str] = []
        for span in response.get("spans", []):
            name = normalize_item(text[span["start"] : span["end"]])
            if name and name not in out:
                out.append(name)
        return out


def extract_objects(sentence: Sentence | str, extractor: ObjectExtractor | None = None) -> list[str]:
    if extractor is None:
        extractor = PatternExtractor()
    return extractor.extract(sentence)


@dataclass(frozen=True)
class Finding:
    """One recommended item and the sentence that produced it."""

    item: str
    sentence: str


def mine_text(
    text: str,
    lexicon: frozenset[str] | None = None,
    extractor: ObjectExtractor | None = None,
) -> list[Finding]:
    """All items advised anywhere in ``text``, first evidence kept."""
    if lexicon is None:
        lexicon = load_verb_lexicon()
    if extractor is None:
        extractor = PatternExtractor()
    findings: list[Finding] = []
    seen: set[str] = set()
    for chunk in _split_chunks(text):
        if not is_imperative(chunk, lexicon):
            continue
        for item in extractor.extract(chunk):
            if item not in seen:
                seen.add(item)
                findings.append(Finding(item=item, sentence=chunk))
    return findings


def mine_poi_reviews(
    pois: Iterable[Poi],
    lexicon: frozenset[str] | None = None,
    extractor: ObjectExtractor | None = None,
) -> list[tuple[str, Finding]]:
    """(poi name, finding) pairs across all reviews, ordered, deduped by item."""
    if lexicon is None:
        lexicon = load_verb_lexicon()
    if extractor is None:
        extractor = PatternExtractor()
    out: list[tuple[str, Finding]] = []
    seen: set[str] = set()
    for poi in pois:
        for review in poi.reviews:
            for finding in mine_text(review.text, lexicon, extractor):
                if finding.item not in seen:
                    seen.add(finding.item)
                    out.append((poi.name, finding))
    return out


# --- tf-idf baseline -------------------------------------------------------

def _ngrams(tokens: Sequence[str], max_n: int = 3) -> list[str]:
    grams = []
    for n in range(1, max_n + 1):
        for i in range(len(tokens) - n + 1):
            grams.append(" ".join(tokens[i : i + n]))
    return grams


def _corpus_counts(reviews: Sequence[str]) -> tuple[list[Counter], Counter]:
    docs = [Counter(_ngrams(tokenize(r))) for r in reviews]
    df: Counter = Counter()
    for doc in docs:
        df.update(doc.keys())
    return docs, df


def tfidf_baseline(reviews: Sequence[str], k: int) -> list[str]:
    """Top-k n-grams (n ≤ 3) by tf·idf with idf = ln(N/df).

    A gram's corpus score is its best single-review score; ties break
    lexicographically.
    """
    if not reviews:
        raise EmptyCorpusError("tf-idf needs at least one review")
    if k < 1:
        raise ValueError("k must be ≥ 1")
    docs, df = _corpus_counts(reviews)
    n = len(reviews)
    best: dict[str, float] = {}
    for doc in docs:
        for gram, tf in doc.items():
            score = tf * math.log(n / df[gram])
            if score > best.get(gram, float("-inf")):
                best[gram] = score
    ranked = sorted(best, key=lambda g: (-best[g], g))
    return ranked[:k]


def tfidf_per_document(reviews: Sequence[str], k: int) -> list[list[str]]:
    """Per-review top-k by tf(review)·idf(corpus) — the eval-harness variant."""
    if not reviews:
        raise EmptyCorpusError("tf-idf needs at least one review")
    if k < 1:
        raise ValueError("k must be ≥ 1")
    docs, df = _corpus_counts(reviews)
    n = len(reviews)
    out: list[list[str]] = []
    for doc in docs:
        scores = {g: tf * math.log(n / df[g]) for g, tf in doc.items()}
        ranked = sorted(scores, key=lambda g: (-scores[g], g))
        out.append(ranked[:k])
    return out


# --- aggregation -----------------------------------------------------------

class Source(Enum):
    EMAIL_NOTE = "EMAIL_NOTE"
    WEATHER = "WEATHER"
    REVIEW = "REVIEW"


@dataclass(frozen=True)
class RecommendedItem:
    name: str
    source: Source
    evidence: str = ""

    def __post_init__(self):
        object.__setattr__(self, "name", normalize_item(self.name))
        if not self.name:
            raise ValueError("item name blank")


@dataclass(frozen=True)
class RecommendationList:
    items: tuple[RecommendedItem, ...] = ()

    def __post_init__(self):
        names = [item.name for item in self.items]
        if len(names) != len(set(names)):
            raise ValueError("recommendation names must be unique")

    @property
    def names(self) -> list[str]:
        return [item.name for item in self.items]

    def __iter__(self):
        return iter(self.items)

    def __len__(self):
        return len(self.items)


def _entries(source: Source, raw: Iterable) -> Iterable[RecommendedItem]:
    for entry in raw:
        if isinstance(entry, RecommendedItem):
            yield RecommendedItem(entry.name, source, entry.evidence)
        elif isinstance(entry, tuple):
            name, evidence = entry
            yield RecommendedItem(name, source, evidence)
        else:
            yield RecommendedItem(entry, source)


def aggregate_recommendations(
    email_items: Iterable,
    review_items: Iterable,
    weather_items: Iterable,
) -> RecommendationList:
    """Merge per-source items; first occurrence of a name wins.

    Output order is email notes, then weather, then review findings.
    Inputs may be bare names, (name, evidence) pairs, or RecommendedItems.
    """
    merged: list[RecommendedItem] = []
    seen: set[str] = set()
    for source, raw in (
        (Source.EMAIL_NOTE, email_items),
        (Source.WEATHER, weather_items),
        (Source.REVIEW, review_items),
    ):
        for item in _entries(source, raw):
            if item.name not in seen:
                seen.add(item.name)
                merged.append(item)
    return RecommendationList(tuple(merged))
