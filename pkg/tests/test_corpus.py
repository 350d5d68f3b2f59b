"""Document model, corpus file round-trips, dedupe and window filtering."""

from __future__ import annotations

import json
import random
from datetime import date, datetime, timezone

import pytest

from esgsent.corpus import (
    Document,
    Source,
    Ticker,
    TimeWindow,
    build_query,
    dedupe,
    fetch_documents,
    filter_window,
    parse_document_line,
    serialize_document,
)
from esgsent.errors import SchemaError, TransportError
from esgsent.transport import ReplayDocumentTransport

from conftest import make_doc

TWEET_LINE = (
    '{"id": "t1", "source": "tweet", "timestamp": "2022-07-20T12:00:00Z", '
    '"ticker": "GS", "text": "good news", "author": "a", "followers": 5}'
)
NEWS_LINE = (
    '{"id": "n1", "source": "news", "timestamp": "2022-07-21T09:00:00Z", '
    '"ticker": "GS", "text": "headline", "url": "https://x.example/a", "title": "headline"}'
)


@pytest.mark.parametrize(
    "key,name,expected",
    [
        ("HSBC", "HSBC", "ESG Investing HSBC"),
        ("TSLA", "Tesla", "ESG Investing Tesla"),
        ("GS", "Goldman Sachs", "ESG Investing Goldman Sachs"),
    ],
)
def test_build_query(key, name, expected):
    assert build_query(Ticker(key, name)) == expected


def test_ticker_key_must_be_uppercase_nonempty():
    with pytest.raises(ValueError):
        Ticker("gs", "Goldman Sachs")
    with pytest.raises(ValueError):
        Ticker("", "Nobody")


def test_window_rejects_reversed_bounds():
    with pytest.raises(ValueError):
        TimeWindow(date(2022, 7, 29), date(2022, 7, 20))


class TestParseSerialize:
    def test_tweet_line_parses(self):
        doc = parse_document_line(TWEET_LINE)
        assert doc.source is Source.TWEET
        assert doc.followers == 5
        assert doc.timestamp == datetime(2022, 7, 20, 12, tzinfo=timezone.utc)

    def test_news_line_parses_with_url_title(self):
        doc = parse_document_line(NEWS_LINE)
        assert doc.source is Source.NEWS
        assert doc.url == "https://x.example/a"
        assert doc.title == "headline"

    def test_round_trip_equality(self):
        for line in (TWEET_LINE, NEWS_LINE):
            doc = parse_document_line(line)
            assert parse_document_line(serialize_document(doc)) == doc

    def test_malformed_json_is_schema_error(self):
        with pytest.raises(SchemaError):
            parse_document_line("{not json")

    def test_missing_required_field(self):
        payload = json.loads(TWEET_LINE)
        del payload["timestamp"]
        with pytest.raises(SchemaError, match="timestamp"):
            parse_document_line(json.dumps(payload))

    def test_empty_text_rejected(self):
        payload = json.loads(TWEET_LINE)
        payload["text"] = "   "
        with pytest.raises(SchemaError):
            parse_document_line(json.dumps(payload))

    def test_bad_source_rejected(self):
        payload = json.loads(TWEET_LINE)
        payload["source"] = "blog"
        with pytest.raises(SchemaError):
            parse_document_line(json.dumps(payload))

    def test_naive_timestamp_rejected(self):
        payload = json.loads(TWEET_LINE)
        payload["timestamp"] = "2022-07-20T12:00:00"
        with pytest.raises(SchemaError):
            parse_document_line(json.dumps(payload))

    def test_unknown_field_strict_vs_lenient(self, caplog):
        payload = json.loads(TWEET_LINE)
        payload["retweets"] = 9
        line = json.dumps(payload)
        with pytest.raises(SchemaError, match="retweets"):
            parse_document_line(line, strict=True)
        with caplog.at_level("WARNING"):
            doc = parse_document_line(line)
        assert doc.id == "t1"
        assert "retweets" in caplog.text

    def test_negative_followers_rejected(self):
        payload = json.loads(TWEET_LINE)
        payload["followers"] = -1
        with pytest.raises(SchemaError):
            parse_document_line(json.dumps(payload))


class TestDedupe:
    def test_duplicate_dropped(self):
        d1 = make_doc("a", day=date(2022, 7, 20))
        d2 = make_doc("b", day=date(2022, 7, 21))
        assert dedupe([d1, d1, d2]) == [d1, d2]

    def test_empty(self):
        assert dedupe([]) == []

    def test_unique_sorted_list_unchanged(self):
        docs = [make_doc("a", day=date(2022, 7, 20)), make_doc("b", day=date(2022, 7, 21))]
        assert dedupe(docs) == docs

    def test_earliest_record_wins(self):
        late = make_doc("a", day=date(2022, 7, 22), text="late copy")
        early = make_doc("a", day=date(2022, 7, 20), text="early copy")
        assert dedupe([late, early]) == [early]

    def test_idempotent_on_random_inputs(self):
        rng = random.Random(7)
        for _ in range(50):
            docs = [
                make_doc(f"d{rng.randrange(8)}", day=date(2022, 7, rng.randrange(1, 28)))
                for _ in range(rng.randrange(0, 12))
            ]
            once = dedupe(docs)
            assert dedupe(once) == once
            assert len({doc.key for doc in once}) == len(once)


class TestFilterWindow:
    def test_start_boundary_retained(self, july_window):
        doc = make_doc("a", day=july_window.start, hour=0)
        assert filter_window([doc], july_window) == [doc]

    def test_day_after_end_dropped(self, july_window):
        doc = make_doc("a", day=date(2022, 7, 30))
        assert filter_window([doc], july_window) == []

    def test_mixed_list_keeps_two_in_order(self, july_window):
        inside_1 = make_doc("i1", day=date(2022, 7, 25))
        inside_2 = make_doc("i2", day=date(2022, 7, 21))
        docs = [
            make_doc("o1", day=date(2022, 7, 10)),
            inside_1,
            make_doc("o2", day=date(2022, 8, 2)),
            inside_2,
            make_doc("o3", day=date(2022, 7, 19)),
        ]
        assert filter_window(docs, july_window) == [inside_1, inside_2]


class TestFetchDocuments:
    def _write_fixture(self, tmp_path, ticker_key, lines, name="tweets.jsonl"):
        ticker_dir = tmp_path / ticker_key
        ticker_dir.mkdir(parents=True, exist_ok=True)
        (ticker_dir / name).write_text("".join(line + "\n" for line in lines), encoding="utf-8")
        return ReplayDocumentTransport(tmp_path)

    def _payload(self, doc_id, day, ticker="HSBC"):
        return json.dumps(
            {
                "id": doc_id,
                "source": "news",
                "timestamp": f"{day}T10:00:00Z",
                "ticker": ticker,
                "text": f"story {doc_id}",
            }
        )

    def test_three_matching_one_outside(self, tmp_path, july_window):
        transport = self._write_fixture(
            tmp_path,
            "HSBC",
            [
                self._payload("n1", "2022-07-21"),
                self._payload("n2", "2022-07-25"),
                self._payload("n3", "2022-07-15"),  # outside the window
                self._payload("n4", "2022-07-29"),
            ],
        )
        docs = fetch_documents(Ticker("HSBC", "HSBC"), july_window, transport)
        assert [doc.id for doc in docs] == ["n1", "n2", "n4"]

    def test_empty_fixture_gives_empty_list(self, tmp_path, july_window):
        transport = self._write_fixture(tmp_path, "HSBC", [])
        assert fetch_documents(Ticker("HSBC", "HSBC"), july_window, transport) == []

    def test_row_missing_timestamp_is_schema_error(self, tmp_path, july_window):
        transport = self._write_fixture(
            tmp_path,
            "HSBC",
            ['{"id": "n1", "source": "news", "ticker": "HSBC", "text": "x"}'],
        )
        with pytest.raises(SchemaError):
            fetch_documents(Ticker("HSBC", "HSBC"), july_window, transport)

    def test_missing_fixture_dir_is_transport_error(self, tmp_path, july_window):
        transport = ReplayDocumentTransport(tmp_path)
        with pytest.raises(TransportError):
            fetch_documents(Ticker("HSBC", "HSBC"), july_window, transport)

    def test_output_sorted_by_timestamp_then_id(self, tmp_path, july_window):
        transport = self._write_fixture(
            tmp_path,
            "HSBC",
            [
                self._payload("zz", "2022-07-22"),
                self._payload("aa", "2022-07-28"),
                self._payload("mm", "2022-07-22"),
            ],
        )
        docs = fetch_documents(Ticker("HSBC", "HSBC"), july_window, transport)
        assert [doc.id for doc in docs] == ["mm", "zz", "aa"]

    def test_other_ticker_records_skipped(self, tmp_path, july_window):
        transport = self._write_fixture(
            tmp_path,
            "HSBC",
            [self._payload("n1", "2022-07-21"), self._payload("x1", "2022-07-21", ticker="GS")],
        )
        docs = fetch_documents(Ticker("HSBC", "HSBC"), july_window, transport)
        assert [doc.id for doc in docs] == ["n1"]


def test_shipped_fixture_lines_round_trip(fixtures_dir):
    lines = []
    for path in sorted(fixtures_dir.glob("*/[tn]*.jsonl")):
        lines.extend(line for line in path.read_text(encoding="utf-8").splitlines() if line.strip())
    assert lines, "expected shipped document fixtures"
    for line in lines:
        doc = parse_document_line(line)
        assert parse_document_line(serialize_document(doc)) == doc


def test_sort_key_total_order():
    rng = random.Random(3)
    docs = [
        make_doc(f"id{i}", day=date(2022, 7, 1 + rng.randrange(20)), hour=rng.randrange(24))
        for i in range(40)
    ]
    rng.shuffle(docs)
    ordered = sorted(docs, key=lambda d: d.sort_key)
    for left, right in zip(ordered, ordered[1:]):
        assert left.sort_key <= right.sort_key
    # distinct ids guarantee strictness of the total order
    assert len({doc.sort_key for doc in docs}) == len(docs)
