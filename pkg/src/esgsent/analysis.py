"""Relating daily sentiment polarity to daily price moves.

Builds a per-trading-day polarity index (mean composite of the day's
documents), joins it with open-to-open returns on identical UTC dates
(weekend document days simply drop out of the join), and computes a
population-form Pearson correlation when at least three aligned,
non-constant days exist. Below that the statistic is reported absent
rather than fabricated.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from datetime import date, timezone
from enum import Enum
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .errors import DegenerateSeries, InsufficientData
from .market import PriceSeries, daily_open_returns, percent_change_open
from .sentiment import ScoredDocument
from .util import atomic_write_text

MIN_ALIGNED_DAYS = 3


@dataclass(frozen=True)
class DailyPoint:
    """One trading day's sentiment: mean composite over that day's documents."""

    date: date
    mean_composite: float
    n_docs: int


@dataclass(frozen=True)
class DailySentimentIndex:
    """Date-ordered daily polarity points for one ticker (zero-doc days omitted)."""

    ticker: str
    points: tuple[DailyPoint, ...]

    def as_pairs(self) -> list[tuple[date, float]]:
        return [(p.date, p.mean_composite) for p in self.points]


class SignAgreement(Enum):
    CONCORDANT = "Concordant"
    DISCORDANT = "Discordant"
    INDETERMINATE = "Indeterminate"


def daily_index(scored: Iterable[ScoredDocument], ticker: str) -> DailySentimentIndex:
    """Group a ticker's scored documents by UTC calendar date."""
    by_day: dict[date, list[float]] = {}
    for sd in scored:
        if sd.document.ticker != ticker:
            continue
        day = sd.document.timestamp.astimezone(timezone.utc).date()
        by_day.setdefault(day, []).append(sd.composite)
    points = tuple(
        DailyPoint(day, math.fsum(values) / len(values), len(values))
        for day, values in sorted(by_day.items())
    )
    return DailySentimentIndex(ticker=ticker, points=points)


def align(
    left: Iterable[tuple[date, float]],
    right: Iterable[tuple[date, float]],
) -> list[tuple[date, float, float]]:
    """Inner join of two (date, value) series, ordered by date."""
    right_by_date = dict(right)
    return [
        (day, value, right_by_date[day])
        for day, value in sorted(left)
        if day in right_by_date
    ]


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Population-form Pearson correlation: cov(x, y) / (sigma_x * sigma_y)."""
    if len(x) != len(y):
        raise ValueError(f"series lengths differ: {len(x)} vs {len(y)}")
    n = len(x)
    if n < MIN_ALIGNED_DAYS:
        raise InsufficientData(f"need >= {MIN_ALIGNED_DAYS} points, got {n}")
    mean_x = math.fsum(x) / n
    mean_y = math.fsum(y) / n
    dx = [v - mean_x for v in x]
    dy = [v - mean_y for v in y]
    ss_x = math.fsum(d * d for d in dx)
    ss_y = math.fsum(d * d for d in dy)
    if ss_x == 0.0 or ss_y == 0.0:
        raise DegenerateSeries("a constant series has no correlation")
    return math.fsum(a * b for a, b in zip(dx, dy)) / math.sqrt(ss_x * ss_y)


def sign_agreement(mean_composite: float, percent_change: float) -> SignAgreement:
    """Strict sign comparison; zero on either side is Indeterminate."""
    if mean_composite == 0.0 or percent_change == 0.0:
        return SignAgreement.INDETERMINATE
    if (mean_composite > 0) == (percent_change > 0):
        return SignAgreement.CONCORDANT
    return SignAgreement.DISCORDANT


@dataclass(frozen=True)
class AnalysisResult:
    ticker: str
    percent_change: float
    mean_composite: float
    pearson_r: Optional[float]
    n_aligned_days: int
    sign_agreement: SignAgreement

    def to_json(self) -> str:
        obj = {
            "ticker": self.ticker,
            "percent_change": self.percent_change,
            "mean_composite": self.mean_composite,
            "pearson_r": self.pearson_r,
            "n_aligned_days": self.n_aligned_days,
            "sign_agreement": self.sign_agreement.value,
        }
        return json.dumps(obj, ensure_ascii=False, indent=2) + "\n"


def analyze(scored: Iterable[ScoredDocument], series: PriceSeries, ticker: str) -> AnalysisResult:
    """Compose the per-ticker result.

    Raises InsufficientData only when the price series cannot yield a
    percent change (< 2 bars); too few aligned days or a constant series
    surface as an absent pearson_r, never as a failure.
    """
    ticker_docs = [sd for sd in scored if sd.document.ticker == ticker]
    n = len(ticker_docs)
    mean_composite = math.fsum(sd.composite for sd in ticker_docs) / n if n else 0.0

    change = percent_change_open(series)
    returns = daily_open_returns(series)
    index = daily_index(ticker_docs, ticker)
    aligned = align(index.as_pairs(), returns)

    pearson_r: Optional[float] = None
    if aligned:
        sentiment_values = [s for _, s, _ in aligned]
        return_values = [r for _, _, r in aligned]
        try:
            pearson_r = pearson(sentiment_values, return_values)
        except (InsufficientData, DegenerateSeries):
            pearson_r = None

    return AnalysisResult(
        ticker=ticker,
        percent_change=change,
        mean_composite=mean_composite,
        pearson_r=pearson_r,
        n_aligned_days=len(aligned),
        sign_agreement=sign_agreement(mean_composite, change),
    )


def write_analysis(result: AnalysisResult, path: Path) -> None:
    atomic_write_text(path, result.to_json())
