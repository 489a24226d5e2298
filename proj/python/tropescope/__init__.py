"""Film/trope snapshot crawling, statistics and comparison."""

from ._core import (  # noqa: F401
    ConfigError,
    EmptyCrawl,
    EmptyInput,
    EntityKey,
    Error,
    FormatError,
    KindConflict,
    MetaMismatch,
    NotAWikiPage,
    Snapshot,
    __version__,
    boxplot,
    canonicalize_url,
    crawl_fixture,
    degree_sequence,
    describe,
    format_ordinal,
    format_percent,
    growth_report,
    histogram,
    import_legacy,
    load_snapshot,
    mark_common,
    parse_snapshot,
    percent_change,
    rank_moves,
    save_snapshot,
    top_n,
)
