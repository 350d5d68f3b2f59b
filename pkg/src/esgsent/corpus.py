"""Unified document model and corpus ingestion.

One ticker-tagged ``Document`` represents either a tweet or a news
article. Documents arrive through a transport (live HTTP or recorded
fixtures), get deduplicated and window-filtered, and persist as one JSON
object per line so corpus files stay append-friendly and diffable.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from datetime import date, datetime, timezone
from enum import Enum
from pathlib import Path
from typing import TYPE_CHECKING, Iterable, Optional

from .errors import SchemaError

if TYPE_CHECKING:
    from .transport import DocumentTransport

logger = logging.getLogger(__name__)

QUERY_PREFIX = "ESG Investing "

# The four companies the default configuration tracks.
DEFAULT_COMPANIES = {
    "HSBC": "HSBC",
    "TSLA": "Tesla",
    "AMZN": "Amazon",
    "GS": "Goldman Sachs",
}


class Source(Enum):
    """Where a document came from."""

    TWEET = "tweet"
    NEWS = "news"


@dataclass(frozen=True)
class Ticker:
    """Company identity used to key documents, prices, and reports."""

    key: str
    display_name: str

    def __post_init__(self) -> None:
        if not self.key:
            raise ValueError("ticker key must be non-empty")
        if self.key != self.key.upper():
            raise ValueError(f"ticker key must be uppercase: {self.key!r}")
        if not self.display_name.strip():
            raise ValueError("ticker display name must be non-empty")

    @property
    def query_label(self) -> str:
        return QUERY_PREFIX + self.display_name

    @classmethod
    def from_key(cls, key: str) -> "Ticker":
        """Build a ticker from a bare key, using the built-in company names
        when known and a title-cased fallback otherwise."""
        key = key.strip().upper()
        return cls(key=key, display_name=DEFAULT_COMPANIES.get(key, key.title()))


def build_query(ticker: Ticker) -> str:
    """Search query used by document transports for this company."""
    return ticker.query_label


@dataclass(frozen=True)
class TimeWindow:
    """Closed interval of UTC calendar dates."""

    start: date
    end: date

    def __post_init__(self) -> None:
        if self.start > self.end:
            raise ValueError(f"window start {self.start} is after end {self.end}")

    def contains(self, ts: datetime) -> bool:
        return self.start <= ts.astimezone(timezone.utc).date() <= self.end

    @classmethod
    def parse(cls, text: str) -> "TimeWindow":
        """Parse ``START:END`` with ISO dates, e.g. ``2022-07-20:2022-07-29``."""
        try:
            start_s, end_s = text.split(":")
            return cls(date.fromisoformat(start_s), date.fromisoformat(end_s))
        except ValueError as exc:
            raise ValueError(f"bad window {text!r}: expected START:END ISO dates") from exc


@dataclass(frozen=True)
class Document:
    """One tweet or news article, ticker-tagged and UTC-timestamped."""

    id: str
    source: Source
    timestamp: datetime
    ticker: str
    text: str
    author: Optional[str] = None
    followers: Optional[int] = None
    place: Optional[str] = None
    url: Optional[str] = None
    title: Optional[str] = None

    def __post_init__(self) -> None:
        if not self.id:
            raise SchemaError("document id must be non-empty")
        if not self.text.strip():
            raise SchemaError(f"document {self.id!r} has empty text")
        if self.timestamp.tzinfo is None:
            raise SchemaError(f"document {self.id!r} timestamp is not timezone-aware")
        if self.followers is not None and self.followers < 0:
            raise SchemaError(f"document {self.id!r} has negative follower count")

    @property
    def key(self) -> tuple[str, str]:
        """(source, id) pair, unique after deduplication."""
        return (self.source.value, self.id)

    @property
    def sort_key(self) -> tuple[datetime, str]:
        """(timestamp, id): the id breaks ties, giving a total order."""
        return (self.timestamp, self.id)


# Corpus line schema: required then optional fields, in serialization order.
_REQUIRED_FIELDS = ("id", "source", "timestamp", "ticker", "text")
_OPTIONAL_FIELDS = ("author", "followers", "place", "url", "title")


def _parse_timestamp(raw: str, doc_id: str) -> datetime:
    try:
        ts = datetime.fromisoformat(raw.replace("Z", "+00:00"))
    except (ValueError, AttributeError, TypeError) as exc:
        raise SchemaError(f"document {doc_id!r}: bad timestamp {raw!r}") from exc
    if ts.tzinfo is None:
        raise SchemaError(f"document {doc_id!r}: timestamp {raw!r} lacks a UTC offset")
    return ts.astimezone(timezone.utc)


def _format_timestamp(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def parse_document_payload(payload: dict, *, strict: bool = False) -> Document:
    """Build a Document from a decoded JSON object.

    Unknown fields raise SchemaError in strict mode and are otherwise
    ignored with a warning.
    """
    if not isinstance(payload, dict):
        raise SchemaError(f"document payload must be an object, got {type(payload).__name__}")

    missing = [name for name in _REQUIRED_FIELDS if name not in payload]
    if missing:
        raise SchemaError(f"document payload missing required field(s): {', '.join(missing)}")

    unknown = sorted(set(payload) - set(_REQUIRED_FIELDS) - set(_OPTIONAL_FIELDS))
    if unknown:
        if strict:
            raise SchemaError(f"document payload has unknown field(s): {', '.join(unknown)}")
        logger.warning("ignoring unknown document field(s): %s", ", ".join(unknown))

    doc_id = str(payload["id"])
    try:
        source = Source(payload["source"])
    except ValueError:
        raise SchemaError(f"document {doc_id!r}: bad source {payload['source']!r}") from None

    followers = payload.get("followers")
    if followers is not None:
        try:
            followers = int(followers)
        except (TypeError, ValueError):
            raise SchemaError(f"document {doc_id!r}: bad follower count {followers!r}") from None

    return Document(
        id=doc_id,
        source=source,
        timestamp=_parse_timestamp(payload["timestamp"], doc_id),
        ticker=str(payload["ticker"]),
        text=str(payload["text"]),
        author=payload.get("author"),
        followers=followers,
        place=payload.get("place"),
        url=payload.get("url"),
        title=payload.get("title"),
    )


def parse_document_line(line: str, *, strict: bool = False) -> Document:
    """Parse one corpus-file line (a single JSON object)."""
    try:
        payload = json.loads(line)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"malformed corpus line: {exc}") from exc
    return parse_document_payload(payload, strict=strict)


def serialize_document(doc: Document) -> str:
    """Render a Document as its canonical corpus line (no trailing newline).

    Field order and float-free payload keep serialization byte-stable, so
    parse -> serialize -> parse round-trips to an equal Document.
    """
    obj: dict = {
        "id": doc.id,
        "source": doc.source.value,
        "timestamp": _format_timestamp(doc.timestamp),
        "ticker": doc.ticker,
        "text": doc.text,
    }
    for name in _OPTIONAL_FIELDS:
        value = getattr(doc, name)
        if value is not None:
            obj[name] = value
    return json.dumps(obj, ensure_ascii=False, separators=(", ", ": "))


def dedupe(docs: Iterable[Document]) -> list[Document]:
    """Drop duplicate (source, id) keys, keeping the earliest record.

    Scanning happens in (timestamp, id) order so the first occurrence in
    that order wins; output is emitted in the same order. Idempotent.
    """
    seen: set[tuple[str, str]] = set()
    out: list[Document] = []
    for doc in sorted(docs, key=lambda d: d.sort_key):
        if doc.key in seen:
            continue
        seen.add(doc.key)
        out.append(doc)
    return out


def filter_window(docs: Iterable[Document], window: TimeWindow) -> list[Document]:
    """Keep documents whose UTC date falls inside the closed window."""
    return [doc for doc in docs if window.contains(doc.timestamp)]


def fetch_documents(
    ticker: Ticker,
    window: TimeWindow,
    transport: "DocumentTransport",
    *,
    strict: bool = False,
) -> list[Document]:
    """Retrieve this ticker's documents through a transport.

    Every returned document matches the ticker and lies inside the
    window; the list is sorted by (timestamp, id).
    """
    docs = []
    for payload in transport.fetch(ticker, window):
        doc = parse_document_payload(payload, strict=strict)
        if doc.ticker != ticker.key:
            continue
        if window.contains(doc.timestamp):
            docs.append(doc)
    return sorted(docs, key=lambda d: d.sort_key)


def read_corpus(path: Path, *, strict: bool = False) -> list[Document]:
    """Load a corpus file (one JSON document per line, blank lines skipped)."""
    docs = []
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                docs.append(parse_document_line(line, strict=strict))
            except SchemaError as exc:
                raise SchemaError(f"{path}:{lineno}: {exc}") from exc
    return docs


def write_corpus(docs: Iterable[Document], path: Path) -> None:
    """Write documents as a deterministic line-oriented corpus file."""
    from .util import atomic_write_text

    body = "".join(serialize_document(doc) + "\n" for doc in docs)
    atomic_write_text(path, body)
