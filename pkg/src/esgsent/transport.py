"""Document and price transports.

Live transports hit HTTP endpoints; the replay transports read recorded
fixtures from disk so the whole pipeline (and the test suite) runs
offline. Both sides of each pair implement the same contract, keyed by
ticker and time window.

Fixture layout, one directory per ticker key::

    fixtures/
      GS/
        tweets.jsonl    # recorded tweet payloads, corpus line schema
        news.jsonl      # recorded news payloads, corpus line schema
        prices.csv      # Yahoo-compatible daily OHLCV
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Iterable, Protocol

from .corpus import Ticker, TimeWindow, build_query
from .errors import SchemaError, TransportError

logger = logging.getLogger(__name__)

TWEET_FIXTURE = "tweets.jsonl"
NEWS_FIXTURE = "news.jsonl"
PRICE_FIXTURE = "prices.csv"


class DocumentTransport(Protocol):
    """Yields raw document payloads (decoded JSON objects) for a ticker."""

    def fetch(self, ticker: Ticker, window: TimeWindow) -> Iterable[dict]: ...


class PriceTransport(Protocol):
    """Returns a Yahoo-compatible CSV payload of daily bars for a ticker."""

    def fetch(self, ticker: Ticker, window: TimeWindow) -> str: ...


class ReplayDocumentTransport:
    """Reads recorded tweet and news payloads for a ticker.

    The ticker's fixture directory must exist; a missing per-source file
    just means no records of that source were captured.
    """

    def __init__(self, fixtures_dir: Path) -> None:
        self.fixtures_dir = Path(fixtures_dir)

    def fetch(self, ticker: Ticker, window: TimeWindow) -> list[dict]:
        ticker_dir = self.fixtures_dir / ticker.key
        if not ticker_dir.is_dir():
            raise TransportError(f"no document fixtures for {ticker.key} under {self.fixtures_dir}")
        payloads: list[dict] = []
        for name in (TWEET_FIXTURE, NEWS_FIXTURE):
            fixture = ticker_dir / name
            if not fixture.exists():
                continue
            with open(fixture, encoding="utf-8") as handle:
                for lineno, line in enumerate(handle, start=1):
                    if not line.strip():
                        continue
                    try:
                        payloads.append(json.loads(line))
                    except json.JSONDecodeError as exc:
                        raise SchemaError(f"{fixture}:{lineno}: malformed JSON: {exc}") from exc
        return payloads


class ReplayPriceTransport:
    """Reads a recorded Yahoo-compatible price CSV for a ticker."""

    def __init__(self, fixtures_dir: Path) -> None:
        self.fixtures_dir = Path(fixtures_dir)

    def fetch(self, ticker: Ticker, window: TimeWindow) -> str:
        fixture = self.fixtures_dir / ticker.key / PRICE_FIXTURE
        if not fixture.exists():
            raise TransportError(f"no price fixture for {ticker.key} under {self.fixtures_dir}")
        return fixture.read_text(encoding="utf-8")


class HttpDocumentTransport:
    """Live document transport querying tweet-search and news endpoints.

    Each endpoint is expected to answer GET requests with parameters
    ``query``, ``start`` and ``end`` and return a JSON array of document
    payloads in the corpus line schema. Untested against real services in
    this repository; the suite runs on replay transports.
    """

    def __init__(self, tweet_url: str, news_url: str, timeout: float = 30.0) -> None:
        self.tweet_url = tweet_url
        self.news_url = news_url
        self.timeout = timeout

    def fetch(self, ticker: Ticker, window: TimeWindow) -> list[dict]:
        import requests

        params = {
            "query": build_query(ticker),
            "start": window.start.isoformat(),
            "end": window.end.isoformat(),
        }
        payloads: list[dict] = []
        for url in (self.tweet_url, self.news_url):
            if not url:
                continue
            try:
                response = requests.get(url, params=params, timeout=self.timeout)
                response.raise_for_status()
                body = response.json()
            except requests.RequestException as exc:
                raise TransportError(f"document endpoint {url} failed: {exc}") from exc
            except ValueError as exc:
                raise SchemaError(f"document endpoint {url} returned non-JSON payload") from exc
            if not isinstance(body, list):
                raise SchemaError(f"document endpoint {url} must return a JSON array")
            payloads.extend(body)
        return payloads


class HttpPriceTransport:
    """Live price transport downloading a Yahoo-compatible daily CSV."""

    def __init__(self, url_template: str, timeout: float = 30.0) -> None:
        # url_template may contain {ticker}, {start} and {end} placeholders.
        self.url_template = url_template
        self.timeout = timeout

    def fetch(self, ticker: Ticker, window: TimeWindow) -> str:
        import requests

        url = self.url_template.format(
            ticker=ticker.key, start=window.start.isoformat(), end=window.end.isoformat()
        )
        try:
            response = requests.get(url, timeout=self.timeout)
            response.raise_for_status()
        except requests.RequestException as exc:
            raise TransportError(f"price endpoint {url} failed: {exc}") from exc
        return response.text
