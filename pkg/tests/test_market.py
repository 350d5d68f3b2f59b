"""Price CSV loading, windowingives, and opening-price change arithmetic."""

from __future__ import annotations

import random
from datetime import date

import pytest

from esgsent.corpus import Ticker
from esgsent.errors import InsufficientData, InvariantError, SchemaError, TransportError
from esgsent.market import (
    PriceBar,
    daily_open_returns,
    fetch_prices,
    load_prices,
    parse_prices,
    percent_change_open,
    split_halves,
    tail_n,
    write_prices,
)
from esgsent.transport import ReplayPriceTransport

from conftest import JULY_WINDOW, make_series

HEADER = "Date,Open,High,Low,Close,Adj Close,Volume"


def csv_text(rows):
    return HEADER + "\n" + "\n".join(rows) + "\n"


def row(day, open_, high, low, close, volume=1000):
    return f"{day},{open_},{high},{low},{close},{close},{volume}"


class TestPriceBar:
    def test_open_above_high_rejected(self):
        with pytest.raises(InvariantError):
            PriceBar(date(2022, 7, 1), open=105.0, high=104.0, low=99.0, close=100.0, volume=10)

    def test_close_below_low_rejected(self):
        with pytest.raises(InvariantError):
            PriceBar(date(2022, 7, 1), open=100.0, high=104.0, low=99.0, close=98.0, volume=10)

    def test_nonpositive_price_rejected(self):
        with pytest.raises(InvariantError):
            PriceBar(date(2022, 7, 1), open=0.0, high=1.0, low=0.0, close=0.5, volume=10)


class TestLoadPrices:
    def test_twenty_rows_load(self, tmp_path):
        rows = [row(f"2022-07-{d:02d}", 100 + d, 110 + d, 95 + d, 101 + d) for d in range(1, 21)]
        path = tmp_path / "prices.csv"
        path.write_text(csv_text(rows), encoding="utf-8")
        series = load_prices(path, "GS")
        assert len(series) == 20

    def test_out_of_order_rows_sorted(self):
        text = csv_text(
            [
                row("2022-07-05", 102, 110, 95, 103),
                row("2022-07-01", 100, 110, 95, 101),
                row("2022-07-03", 101, 110, 95, 102),
            ]
        )
        series = parse_prices(text, "GS")
        assert [bar.date.day for bar in series.bars] == [1, 3, 5]

    def test_open_above_high_is_invariant_error(self):
        text = csv_text([row("2022-07-01", 120, 110, 95, 100)])
        with pytest.raises(InvariantError):
            parse_prices(text, "GS")

    def test_malformed_row_is_schema_error(self):
        text = csv_text([row("2022-07-01", "abc", 110, 95, 100)])
        with pytest.raises(SchemaError):
            parse_prices(text, "GS")

    def test_wrong_header_is_schema_error(self):
        text = "Date,Open,High,Low,Close,Volume\n" + row("2022-07-01", 100, 110, 95, 100) + "\n"
        with pytest.raises(SchemaError):
            parse_prices(text, "GS")

    def test_duplicate_date_is_invariant_error(self):
        text = csv_text(
            [row("2022-07-01", 100, 110, 95, 101), row("2022-07-01", 102, 110, 95, 103)]
        )
        with pytest.raises(InvariantError):
            parse_prices(text, "GS")


class TestTail:
    def test_25_bars_tail_20(self, fixtures_dir):
        series = load_prices(fixtures_dir / "TSLA" / "prices.csv", "TSLA")
        assert len(series) == 25
        tailed = tail_n(series, 20)
        assert len(tailed) == 20
        assert tailed.bars == series.bars[5:]
        assert tailed.bars[0].date == date(2022, 7, 4)

    def test_short_series_clamps(self):
        series = make_series([100, 101, 102, 103, 104])
        assert tail_n(series, 20).bars == series.bars

    def test_tail_one(self):
        series = make_series([100, 101, 102])
        assert tail_n(series, 1).bars == series.bars[-1:]

    def test_tail_zero_rejected(self):
        with pytest.raises(ValueError):
            tail_n(make_series([100, 101]), 0)

    def test_idempotent(self):
        series = make_series([100 + i for i in range(30)])
        once = tail_n(series, 12)
        assert tail_n(once, 12) == once


class TestPercentChange:
    def test_up_ten_percent(self):
        assert percent_change_open(make_series([100, 104, 110])) == pytest.approx(10.0)

    def test_down_twenty_percent(self):
        assert percent_change_open(make_series([50, 45, 40])) == pytest.approx(-20.0)

    def test_constant_opens(self):
        assert percent_change_open(make_series([80, 80, 80])) == 0.0

    def test_single_bar_insufficient(self):
        with pytest.raises(InsufficientData):
            percent_change_open(make_series([100]))

    def test_depends_only_on_endpoints(self):
        rng = random.Random(29)
        for _ in range(50):
            opens = [rng.uniform(10, 500) for _ in range(rng.randrange(3, 30))]
            full = make_series(opens)
            truncated = make_series([opens[0], opens[-1]])
            truncated_inner = percent_change_open(truncated)
            assert percent_change_open(full) == pytest.approx(truncated_inner, rel=1e-12)


class TestSplitHalves:
    def test_twenty_bars(self):
        series = make_series([100 + i for i in range(20)])
        first, second = split_halves(series)
        assert len(first) == len(second) == 10
        assert first.bars + second.bars == series.bars

    def test_two_bars(self):
        series = make_series([100, 101])
        first, second = split_halves(series)
        assert first.bars == series.bars[:1]
        assert second.bars == series.bars[1:]

    def test_odd_length_rejected(self):
        with pytest.raises(InsufficientData):
            split_halves(make_series([100 + i for i in range(19)]))


class TestDailyReturns:
    def test_hand_arithmetic(self):
        returns = daily_open_returns(make_series([100, 110, 99]))
        assert [r for _, r in returns] == pytest.approx([10.0, -10.0], abs=1e-9)
        assert [d.day for d, _ in returns] == [2, 3]

    def test_constant_opens_all_zero(self):
        returns = daily_open_returns(make_series([75, 75, 75, 75]))
        assert [r for _, r in returns] == [0.0, 0.0, 0.0]

    def test_single_bar_insufficient(self):
        with pytest.raises(InsufficientData):
            daily_open_returns(make_series([100]))

    def test_returns_compound_to_total_change(self):
        rng = random.Random(31)
        for _ in range(100):
            opens = [rng.uniform(5, 900) for _ in range(rng.randrange(2, 40))]
            series = make_series(opens)
            compounded = 1.0
            for _, r in daily_open_returns(series):
                compounded *= 1.0 + r / 100.0
            assert compounded - 1.0 == pytest.approx(
                percent_change_open(series) / 100.0, rel=1e-9, abs=1e-12
            )


class TestFetchPrices:
    def test_replay_fixture(self, fixtures_dir):
        transport = ReplayPriceTransport(fixtures_dir)
        series = fetch_prices(Ticker("TSLA", "Tesla"), JULY_WINDOW, transport)
        assert len(series) == 25

    def test_missing_fixture_is_transport_error(self, tmp_path):
        transport = ReplayPriceTransport(tmp_path)
        with pytest.raises(TransportError):
            fetch_prices(Ticker("TSLA", "Tesla"), JULY_WINDOW, transport)

    def test_duplicate_date_fixture_is_invariant_error(self, tmp_path):
        ticker_dir = tmp_path / "TSLA"
        ticker_dir.mkdir()
        (ticker_dir / "prices.csv").write_text(
            csv_text([row("2022-07-01", 100, 110, 95, 101), row("2022-07-01", 100, 110, 95, 101)]),
            encoding="utf-8",
        )
        with pytest.raises(InvariantError):
            fetch_prices(Ticker("TSLA", "Tesla"), JULY_WINDOW, ReplayPriceTransport(tmp_path))


def test_price_round_trip(fixtures_dir, tmp_path):
    for key in ("GS", "AMZN", "TSLA", "HSBC"):
        series = load_prices(fixtures_dir / key / "prices.csv", key)
        out = tmp_path / f"{key}.csv"
        write_prices(series, out)
        assert load_prices(out, key).bars == series.bars
