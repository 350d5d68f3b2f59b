"""Lexicon sentiment scoring and composite polarity scores.

A document gets a (label, score) verdict either from the shipped
financial polarity lexicon or from an imported file of externally
produced transformer verdicts. The composite score is the label weight
(+1 / 0 / -1) times the score, a signed value in [-1, 1].
"""

from __future__ import annotations

import csv
import json
import re
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Optional

from .corpus import Document, Source
from .errors import InvariantError, SchemaError
from .util import atomic_write_text

VerdictKey = tuple[str, str]  # (source, id)

_URL_RE = re.compile(r"(?:https?://|www\.)\S+")
_MENTION_RE = re.compile(r"@\w+")
_TOKEN_RE = re.compile(r"[a-z0-9]+(?:'[a-z]+)*")

# A negator flips the polarity of a lexicon hit it precedes by at most
# this many tokens.
NEGATION_WINDOW = 3


class SentimentLabel(Enum):
    POSITIVE = "positive"
    NEUTRAL = "neutral"
    NEGATIVE = "negative"


_WEIGHTS = {
    SentimentLabel.POSITIVE: 1,
    SentimentLabel.NEUTRAL: 0,
    SentimentLabel.NEGATIVE: -1,
}


def weight(label: SentimentLabel) -> int:
    """Signed weight of a sentiment label: +1, 0 or -1."""
    return _WEIGHTS[label]


@dataclass(frozen=True)
class SentimentVerdict:
    """Label plus a confidence/intensity score in [0, 1]."""

    label: SentimentLabel
    score: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.score <= 1.0:
            raise InvariantError(f"sentiment score {self.score} outside [0, 1]")


def composite(verdict: SentimentVerdict) -> float:
    """Signed composite polarity in [-1, 1]: label weight times score."""
    return weight(verdict.label) * verdict.score


@dataclass(frozen=True)
class Lexicon:
    """Polarity word lists: positive terms, negative terms, and negators."""

    positive_terms: frozenset[str]
    negative_terms: frozenset[str]
    negators: frozenset[str]

    def __post_init__(self) -> None:
        overlap = self.positive_terms & self.negative_terms
        if overlap:
            sample = ", ".join(sorted(overlap)[:5])
            raise InvariantError(f"terms listed as both positive and negative: {sample}")
        for name in ("positive_terms", "negative_terms", "negators"):
            for term in getattr(self, name):
                if not term or term != term.lower() or any(c.isspace() for c in term):
                    raise InvariantError(f"bad lexicon entry in {name}: {term!r}")

    def swapped(self) -> "Lexicon":
        """Lexicon with positive and negative term lists exchanged."""
        return Lexicon(self.negative_terms, self.positive_terms, self.negators)


def _parse_terms(text: str) -> frozenset[str]:
    terms = set()
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        terms.add(line.lower())
    return frozenset(terms)


def load_lexicon(directory: Path) -> Lexicon:
    """Load a lexicon from positive.txt, negative.txt and negators.txt.

    One lowercase term per line; '#' lines are comments.
    """
    directory = Path(directory)
    parts = []
    for name in ("positive.txt", "negative.txt", "negators.txt"):
        path = directory / name
        if not path.exists():
            raise SchemaError(f"lexicon file missing: {path}")
        parts.append(_parse_terms(path.read_text(encoding="utf-8")))
    return Lexicon(*parts)


def default_lexicon() -> Lexicon:
    """The finance-oriented word lists shipped with the package."""
    root = resources.files("esgsent").joinpath("data", "lexicon")
    return Lexicon(
        _parse_terms(root.joinpath("positive.txt").read_text(encoding="utf-8")),
        _parse_terms(root.joinpath("negative.txt").read_text(encoding="utf-8")),
        _parse_terms(root.joinpath("negators.txt").read_text(encoding="utf-8")),
    )


def tokenize(text: str) -> list[str]:
    """Lowercase word tokens with URLs, @-mentions and punctuation removed.

    '#' is stripped from hashtags so the tag body still scores.
    """
    cleaned = text.lower().replace("’", "'")
    cleaned = _URL_RE.sub(" ", cleaned)
    cleaned = _MENTION_RE.sub(" ", cleaned)
    cleaned = cleaned.replace("#", "")
    return _TOKEN_RE.findall(cleaned)


def score_tokens(tokens: list[str], lexicon: Lexicon) -> SentimentVerdict:
    """Dictionary verdict over a token list.

    Counts positive and negative lexicon hits, flipping a hit's polarity
    when a negator occurs within the NEGATION_WINDOW tokens before it.
    Score is |p - n| / (p + n); no hits or a tie is Neutral with score 0.
    Repeated words count once per occurrence.
    """
    positives = negatives = 0
    for i, token in enumerate(tokens):
        if token in lexicon.positive_terms:
            polarity = 1
        elif token in lexicon.negative_terms:
            polarity = -1
        else:
            continue
        preceding = tokens[max(0, i - NEGATION_WINDOW):i]
        if any(t in lexicon.negators for t in preceding):
            polarity = -polarity
        if polarity > 0:
            positives += 1
        else:
            negatives += 1
    total = positives + negatives
    if total == 0 or positives == negatives:
        return SentimentVerdict(SentimentLabel.NEUTRAL, 0.0)
    label = SentimentLabel.POSITIVE if positives > negatives else SentimentLabel.NEGATIVE
    return SentimentVerdict(label, abs(positives - negatives) / total)


def scoring_text(doc: Document) -> str:
    """What gets scored: news scores on its headline, tweets on full text."""
    if doc.source is Source.NEWS and doc.title:
        return doc.title
    return doc.text


def score_document(doc: Document, lexicon: Lexicon) -> SentimentVerdict:
    return score_tokens(tokenize(scoring_text(doc)), lexicon)


@dataclass(frozen=True)
class ScoredDocument:
    """A document with its verdict and the composite derived from it."""

    document: Document
    verdict: SentimentVerdict
    composite: float

    def __post_init__(self) -> None:
        expected = composite(self.verdict)
        if self.composite != expected:
            raise InvariantError(
                f"composite {self.composite} inconsistent with verdict "
                f"({self.verdict.label.value}, {self.verdict.score})"
            )

    @property
    def key(self) -> VerdictKey:
        return self.document.key

    @classmethod
    def from_verdict(cls, doc: Document, verdict: SentimentVerdict) -> "ScoredDocument":
        return cls(document=doc, verdict=verdict, composite=composite(verdict))


_EXTERNAL_HEADER = ["id", "source", "label", "score"]


def import_external_verdicts(path: Path) -> dict[VerdictKey, SentimentVerdict]:
    """Load externally produced verdicts (e.g. transformer output) from CSV.

    Expected header: ``id,source,label,score``. Labels are normalized
    case-insensitively; scores must lie in [0, 1]; duplicate (source, id)
    keys are rejected rather than silently resolved.
    """
    verdicts: dict[VerdictKey, SentimentVerdict] = {}
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames != _EXTERNAL_HEADER:
            raise SchemaError(
                f"{path}: expected header {','.join(_EXTERNAL_HEADER)}, "
                f"got {','.join(reader.fieldnames or [])}"
            )
        for row_no, row in enumerate(reader, start=2):
            label_raw = (row["label"] or "").strip().lower()
            try:
                label = SentimentLabel(label_raw)
            except ValueError:
                raise SchemaError(f"{path}:{row_no}: unknown label {row['label']!r}") from None
            try:
                score = float(row["score"])
            except (TypeError, ValueError):
                raise SchemaError(f"{path}:{row_no}: bad score {row['score']!r}") from None
            if not 0.0 <= score <= 1.0:
                raise SchemaError(f"{path}:{row_no}: score {score} outside [0, 1]")
            source_raw = (row["source"] or "").strip().lower()
            if source_raw not in (s.value for s in Source):
                raise SchemaError(f"{path}:{row_no}: unknown source {row['source']!r}")
            key = (source_raw, row["id"])
            if key in verdicts:
                raise SchemaError(f"{path}:{row_no}: duplicate verdict for {key}")
            verdicts[key] = SentimentVerdict(label, score)
    return verdicts


def score_corpus(
    docs: Iterable[Document],
    lexicon: Lexicon,
    external: Optional[Mapping[VerdictKey, SentimentVerdict]] = None,
) -> list[ScoredDocument]:
    """Score every document, preserving input order.

    An external verdict wins when one exists for the document's key;
    the lexicon scores everything else.
    """
    external = external or {}
    scored = []
    for doc in docs:
        verdict = external.get(doc.key)
        if verdict is None:
            verdict = score_document(doc, lexicon)
        scored.append(ScoredDocument.from_verdict(doc, verdict))
    return scored


def serialize_scored(sd: ScoredDocument) -> str:
    """One scored line: document key, label, score, composite."""
    obj = {
        "id": sd.document.id,
        "source": sd.document.source.value,
        "label": sd.verdict.label.value,
        "score": sd.verdict.score,
        "composite": sd.composite,
    }
    return json.dumps(obj, ensure_ascii=False, separators=(", ", ": "))


def write_scored(scored: Iterable[ScoredDocument], path: Path) -> None:
    atomic_write_text(path, "".join(serialize_scored(sd) + "\n" for sd in scored))


def read_scored(path: Path, documents: Iterable[Document]) -> list[ScoredDocument]:
    """Load a scored file back, re-attaching documents by (source, id) key."""
    by_key = {doc.key: doc for doc in documents}
    scored = []
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"{path}:{lineno}: malformed JSON: {exc}") from exc
            for field_name in ("id", "source", "label", "score", "composite"):
                if field_name not in obj:
                    raise SchemaError(f"{path}:{lineno}: missing field {field_name!r}")
            key = (obj["source"], obj["id"])
            doc = by_key.get(key)
            if doc is None:
                raise SchemaError(f"{path}:{lineno}: scored line has no corpus document {key}")
            try:
                verdict = SentimentVerdict(SentimentLabel(obj["label"]), float(obj["score"]))
            except (ValueError, InvariantError) as exc:
                raise SchemaError(f"{path}:{lineno}: {exc}") from exc
            if float(obj["composite"]) != composite(verdict):
                raise SchemaError(f"{path}:{lineno}: composite inconsistent with verdict")
            scored.append(ScoredDocument.from_verdict(doc, verdict))
    return scored
