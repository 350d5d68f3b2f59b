"""Command-line pipeline: ingest -> score -> aggregate -> prices -> analyze -> report.

Stages compose through files under the output directory, so each can be
run (and tested) on its own; ``run`` chains all of them. The CLI always
reads recorded fixtures through the replay transports; the live HTTP
transports are library-level building blocks.

Exit codes: 0 success, 2 schema/invariant error, 3 transport error,
4 insufficient data (fatal contexts only). Failures print a single
``error[<category>]: <message>`` line on stderr.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections import Counter
from dataclasses import dataclass
from typing import Optional

from . import __version__
from .aggregation import TickerAggregate, aggregate_by_ticker, rank_affinity, write_aggregates
from .analysis import AnalysisResult, analyze, write_analysis
from .charts import render_candlestick_svg
from .config import RunConfig, resolve_config
from .corpus import Document, dedupe, fetch_documents, filter_window, read_corpus, write_corpus
from .errors import InsufficientData, PipelineError, SchemaError
from .market import PriceSeries, fetch_prices, load_prices, tail_n, write_prices
from .sentiment import (
    ScoredDocument,
    default_lexicon,
    import_external_verdicts,
    load_lexicon,
    read_scored,
    score_corpus,
    write_scored,
)
from .transport import ReplayDocumentTransport, ReplayPriceTransport
from .util import atomic_write_text, format_real

logger = logging.getLogger(__name__)

SUMMARY_HEADER = ["ticker", "n_docs", "mean_composite", "classification", "percent_change", "sign_agreement"]


def _note(category: str, message: str) -> None:
    print(f"note[{category}]: {message}", file=sys.stderr)


def _read_pipeline_inputs(config: RunConfig) -> tuple[list[Document], list[ScoredDocument]]:
    if not config.corpus_path.exists():
        raise SchemaError(f"corpus not found: {config.corpus_path} (run 'ingest' first)")
    if not config.scored_path.exists():
        raise SchemaError(f"scored file not found: {config.scored_path} (run 'score' first)")
    docs = read_corpus(config.corpus_path, strict=config.strict)
    return docs, read_scored(config.scored_path, docs)


def _load_ticker_prices(config: RunConfig, ticker_key: str) -> PriceSeries:
    path = config.prices_path(ticker_key)
    if not path.exists():
        raise InsufficientData(f"{ticker_key}: no price data at {path} (run 'prices' first)")
    return load_prices(path, ticker_key)


def cmd_ingest(config: RunConfig) -> int:
    """Fetch, dedupe and window-filter documents into the corpus file."""
    transport = ReplayDocumentTransport(config.fixtures_dir)
    fetched: list[Document] = []
    for ticker in config.tickers:
        fetched.extend(fetch_documents(ticker, config.document_window, transport, strict=config.strict))
    docs = filter_window(dedupe(fetched), config.document_window)
    write_corpus(docs, config.corpus_path)

    counts = Counter(doc.ticker for doc in docs)
    for ticker in config.tickers:
        print(f"{ticker.key}: {counts.get(ticker.key, 0)} documents")
    print(f"corpus -> {config.corpus_path}")
    if not docs:
        print("warning: corpus is empty for this window", file=sys.stderr)
    return 0


def cmd_score(config: RunConfig) -> int:
    """Score every corpus document and write the scored file."""
    if not config.corpus_path.exists():
        raise SchemaError(f"corpus not found: {config.corpus_path} (run 'ingest' first)")
    docs = read_corpus(config.corpus_path, strict=config.strict)
    lexicon = load_lexicon(config.lexicon_dir) if config.lexicon_dir else default_lexicon()
    external = (
        import_external_verdicts(config.external_verdicts) if config.external_verdicts else None
    )
    scored = score_corpus(docs, lexicon, external)
    write_scored(scored, config.scored_path)
    n_external = sum(1 for sd in scored if external and sd.key in external)
    print(f"scored {len(scored)} documents ({n_external} external) -> {config.scored_path}")
    return 0


def cmd_aggregate(config: RunConfig) -> int:
    """Aggregate composites per ticker and classify ESG affinity."""
    _, scored = _read_pipeline_inputs(config)
    aggregates = aggregate_by_ticker(scored, tickers=config.ticker_keys, thresholds=config.thresholds)
    write_aggregates(aggregates, config.aggregates_path)
    for agg in aggregates:
        print(
            f"{agg.ticker}: n={agg.n_docs} sum={format_real(agg.sum_composite)} "
            f"mean={format_real(agg.mean_composite)} {agg.classification.value}"
        )
    print("affinity ranking: " + " > ".join(rank_affinity(aggregates)))
    print(f"aggregates -> {config.aggregates_path}")
    return 0


def cmd_prices(config: RunConfig) -> int:
    """Fetch price history per ticker and keep the last price_days rows."""
    transport = ReplayPriceTransport(config.fixtures_dir)
    for ticker in config.tickers:
        series = tail_n(fetch_prices(ticker, config.document_window, transport), config.price_days)
        path = config.prices_path(ticker.key)
        write_prices(series, path)
        print(f"{ticker.key}: {len(series)} trading days -> {path}")
    return 0


def _analyze_ticker(
    config: RunConfig, scored: list[ScoredDocument], ticker_key: str
) -> Optional[AnalysisResult]:
    """One ticker's analysis, or None (with a note) when data is insufficient."""
    try:
        series = _load_ticker_prices(config, ticker_key)
        return analyze(scored, series, ticker_key)
    except InsufficientData as exc:
        _note("insufficient-data", str(exc))
        return None


def cmd_analyze(config: RunConfig) -> int:
    """Correlate daily sentiment with daily returns per ticker."""
    _, scored = _read_pipeline_inputs(config)
    n_ok = 0
    for ticker in config.tickers:
        result = _analyze_ticker(config, scored, ticker.key)
        if result is None:
            continue
        n_ok += 1
        write_analysis(result, config.analysis_path(ticker.key))
        r_text = "absent" if result.pearson_r is None else f"{result.pearson_r:+.4f}"
        print(
            f"{ticker.key}: change={result.percent_change:+.2f}% "
            f"mean={result.mean_composite:+.4f} r={r_text} "
            f"{result.sign_agreement.value} ({result.n_aligned_days} aligned days)"
        )
    if n_ok == 0:
        raise InsufficientData("no ticker had enough data to analyze")
    return 0


@dataclass(frozen=True)
class SummaryRow:
    ticker: str
    n_docs: int
    mean_composite: float
    classification: str
    percent_change: Optional[float]
    sign_agreement: str


def _summary_csv(rows: list[SummaryRow]) -> str:
    lines = [",".join(SUMMARY_HEADER)]
    for row in rows:
        change = "" if row.percent_change is None else format_real(row.percent_change)
        lines.append(
            f"{row.ticker},{row.n_docs},{format_real(row.mean_composite)},"
            f"{row.classification},{change},{row.sign_agreement}"
        )
    return "\n".join(lines) + "\n"


def cmd_report(config: RunConfig) -> int:
    """Emit summary CSV, per-ticker candlestick SVGs, and analysis JSONs."""
    _, scored = _read_pipeline_inputs(config)
    aggregates = aggregate_by_ticker(scored, tickers=config.ticker_keys, thresholds=config.thresholds)
    write_aggregates(aggregates, config.aggregates_path)
    agg_by_key: dict[str, TickerAggregate] = {agg.ticker: agg for agg in aggregates}

    rows: list[SummaryRow] = []
    n_ok = 0
    for ticker in config.tickers:
        agg = agg_by_key[ticker.key]
        result = _analyze_ticker(config, scored, ticker.key)
        if result is None:
            rows.append(
                SummaryRow(agg.ticker, agg.n_docs, agg.mean_composite,
                           agg.classification.value, None, "")
            )
            continue
        n_ok += 1
        series = tail_n(_load_ticker_prices(config, ticker.key), config.price_days)
        atomic_write_text(config.chart_path(ticker.key), render_candlestick_svg(series))
        write_analysis(result, config.analysis_path(ticker.key))
        rows.append(
            SummaryRow(agg.ticker, agg.n_docs, agg.mean_composite, agg.classification.value,
                       result.percent_change, result.sign_agreement.value)
        )

    rows.sort(key=lambda row: (-row.mean_composite, row.ticker))
    atomic_write_text(config.summary_path, _summary_csv(rows))
    print(f"summary -> {config.summary_path}")
    print(f"charts  -> {config.out_dir / 'charts'}")
    if n_ok == 0:
        raise InsufficientData("no ticker had enough data to report")
    return 0


def cmd_run(config: RunConfig) -> int:
    """Run the whole pipeline end to end."""
    for stage in (cmd_ingest, cmd_score, cmd_aggregate, cmd_prices, cmd_analyze, cmd_report):
        code = stage(config)
        if code:
            return code
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="JSON run configuration")
    common.add_argument("--tickers", metavar="K1,K2", help="comma-separated ticker keys")
    common.add_argument("--window", metavar="START:END", help="document window (UTC dates)")
    common.add_argument("--price-days", dest="price_days", type=int, metavar="N",
                        help="trading days of price history to keep (default 20)")
    common.add_argument("--lexicon", metavar="DIR", help="directory with replacement lexicon files")
    common.add_argument("--external-verdicts", dest="external_verdicts", metavar="PATH",
                        help="CSV of externally produced sentiment verdicts")
    common.add_argument("--thresholds", metavar="AFFINE,AVERSE", help="affinity cutoffs (default 0.15,-0.15)")
    common.add_argument("--fixtures", metavar="DIR", help="recorded fixture directory")
    common.add_argument("--out", metavar="DIR", help="output directory")
    common.add_argument("--strict", action="store_true", help="reject unknown schema fields")

    parser = argparse.ArgumentParser(
        prog="esgsent",
        description="ESG sentiment vs. stock performance pipeline",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, func, help_text in (
        ("ingest", cmd_ingest, "fetch documents into the corpus file"),
        ("score", cmd_score, "score the corpus with the lexicon (and external verdicts)"),
        ("aggregate", cmd_aggregate, "aggregate composites per ticker and classify"),
        ("prices", cmd_prices, "fetch and window per-ticker price history"),
        ("analyze", cmd_analyze, "correlate daily sentiment with daily returns"),
        ("report", cmd_report, "write summary CSV, candlestick SVGs and analysis JSONs"),
        ("run", cmd_run, "run every stage in order"),
    ):
        stage = sub.add_parser(name, parents=[common], help=help_text)
        stage.set_defaults(func=func)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        config = resolve_config(args)
        return args.func(config)
    except PipelineError as exc:
        print(f"error[{exc.category}]: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"error[config]: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
