"""Shared fixtures: paths, document factories, and a CLI runner."""

from __future__ import annotations

from datetime import date, datetime, timedelta, timezone
from pathlib import Path

import pytest

from esgsent.corpus import Document, Source, TimeWindow
from esgsent.market import PriceBar, PriceSeries
from esgsent.sentiment import ScoredDocument, SentimentLabel, SentimentVerdict

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES_DIR = REPO_ROOT / "fixtures"
GOLDEN_DIR = Path(__file__).resolve().parent / "golden"

JULY_WINDOW = TimeWindow(date(2022, 7, 20), date(2022, 7, 29))
GOLDEN_TICKERS = "GS,AMZN,TSLA,HSBC"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES_DIR


@pytest.fixture
def golden_dir() -> Path:
    return GOLDEN_DIR


@pytest.fixture
def july_window() -> TimeWindow:
    return JULY_WINDOW


def make_doc(
    doc_id: str = "t1",
    *,
    source: Source = Source.TWEET,
    ticker: str = "GS",
    text: str = "placeholder text",
    day: date = date(2022, 7, 20),
    hour: int = 12,
    **extra,
) -> Document:
    ts = datetime(day.year, day.month, day.day, hour, tzinfo=timezone.utc)
    return Document(id=doc_id, source=source, timestamp=ts, ticker=ticker, text=text, **extra)


def make_scored(doc: Document, label: SentimentLabel, score: float) -> ScoredDocument:
    return ScoredDocument.from_verdict(doc, SentimentVerdict(label, score))


def make_series(opens: list[float], *, ticker: str = "GS", start: date = date(2022, 7, 1)) -> PriceSeries:
    """Bars on consecutive calendar days with wide high/low envelopes."""
    bars = []
    for i, open_ in enumerate(opens):
        close = open_
        bars.append(
            PriceBar(
                date=start + timedelta(days=i),
                open=open_,
                high=open_ * 1.05,
                low=open_ * 0.95,
                close=close,
                volume=1_000_000 + i,
            )
        )
    return PriceSeries(ticker=ticker, bars=tuple(bars))


def run_cli(argv: list[str]) -> int:
    from esgsent.cli import main

    return main(argv)


def run_golden_pipeline(out_dir: Path) -> int:
    """The canonical golden-fixture run used by golden and acceptance tests."""
    return run_cli(
        [
            "run",
            "--fixtures", str(FIXTURES_DIR),
            "--out", str(out_dir),
            "--window", "2022-07-20:2022-07-29",
            "--tickers", GOLDEN_TICKERS,
        ]
    )
