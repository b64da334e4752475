"""End-to-end detection: windows -> keywords -> patterns -> clusters -> topics.

Ranking runs window by window in index order because utility compares each
window with the previous one. Everything after ranking depends only on the
window itself and may run on a thread pool; results are always collected in
window order, so output does not depend on the worker count.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterator, Sequence

from hwatopics.association import AssociationTable, build_association_table, max_associations
from hwatopics.clustering import Clustering, HdbscanParams, hdbscan
from hwatopics.config import Config
from hwatopics.corpus import IngestReport, Window, load_stopwords, read_posts, window
from hwatopics.embedding import (
    DistanceMatrix,
    PatternEmbedding,
    VectorStore,
    distance_matrix,
    embed_pattern,
    load_vectors,
)
from hwatopics.errors import ConfigError
from hwatopics.patterns import PatternSet, extract_all
from hwatopics.ranking import KeywordSet, WordStats, keyword_ratings, rate_window, select_keywords
from hwatopics.topics import Topic, extract_topics, rank_clusters, topic_word_frequencies

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WindowResult:
    """Every intermediate of one window, from word stats to topics."""

    window: Window
    stats: dict[str, WordStats]
    keywords: KeywordSet
    associations: AssociationTable
    patterns: PatternSet
    embeddings: tuple[PatternEmbedding, ...]
    distances: DistanceMatrix
    clustering: Clustering
    topics: tuple[Topic, ...]

    @property
    def index(self) -> int:
        return self.window.index

    @property
    def oov_words(self) -> int:
        return sum(len(e.oov) for e in self.embeddings)

    def keyword_lists(self) -> list[tuple[str, ...]]:
        return [t.keywords for t in self.topics]

    def to_record(self) -> dict:
        """The JSONL topic record of this window."""
        return {
            "window": self.window.index,
            "start": self.window.start,
            "end": self.window.end,
            "topics": [t.to_dict() for t in self.topics],
        }

    def word_frequency_records(self) -> list[dict]:
        return [
            {
                "window": self.window.index,
                "rank": t.rank,
                "frequencies": topic_word_frequencies(t, self.stats),
            }
            for t in self.topics
        ]


@dataclass
class DetectionResults:
    windows: list[WindowResult]
    config: Config
    ingest: IngestReport = field(default_factory=IngestReport)

    def topics_by_window(self) -> dict[int, list[tuple[str, ...]]]:
        return {w.index: w.keyword_lists() for w in self.windows}

    def records(self) -> Iterator[dict]:
        for w in self.windows:
            yield w.to_record()

    def write_topics(self, stream: IO[str]) -> None:
        _write_jsonl(self.records(), stream)

    def write_word_frequencies(self, stream: IO[str]) -> None:
        _write_jsonl(
            (rec for w in self.windows for rec in w.word_frequency_records()), stream
        )

    def write_debug(self, directory: Path) -> None:
        """Per-window stats-L.json, associations-L.csv and patterns-L.json."""
        directory.mkdir(parents=True, exist_ok=True)
        for w in self.windows:
            L = w.index
            with open(directory / f"stats-{L}.json", "w", encoding="utf-8") as f:
                json.dump(
                    [s.to_dict() for s in w.stats.values()], f, indent=2,
                    ensure_ascii=False,
                )
            w.associations.to_frame().to_csv(
                directory / f"associations-{L}.csv", index=False
            )
            with open(directory / f"patterns-{L}.json", "w", encoding="utf-8") as f:
                json.dump(w.patterns.to_dict(), f, indent=2, ensure_ascii=False)
        logger.info("Wrote debug dumps for %d windows to %s", len(self.windows), directory)


def _write_jsonl(records: Iterator[dict], stream: IO[str]) -> None:
    for record in records:
        stream.write(json.dumps(record, ensure_ascii=False) + "\n")


# ---------------------------------------------------------------------------
# Stages
# ---------------------------------------------------------------------------


def rate_windows(
    windows: Sequence[Window], log_base: float | None = None
) -> list[dict[str, WordStats]]:
    """WordStats per window, handing each window's TF to the next."""
    rated = []
    prev_tf: dict[str, int] = {}
    for win in windows:
        stats = rate_window(win, prev_tf, log_base)
        rated.append(stats)
        prev_tf = {w: s.tf for w, s in stats.items()}
    return rated


def process_window(
    win: Window, stats: dict[str, WordStats], store: VectorStore, config: Config
) -> WindowResult:
    """Keyword selection through topic extraction for one rated window."""
    keywords = select_keywords(stats, config.h, win.index)
    table = build_association_table(win, keywords, stats, config.delta)
    kr = keyword_ratings(stats)
    patterns = extract_all(keywords, max_associations(table), kr, win.index)
    embeddings = tuple(embed_pattern(p, store) for p in patterns)
    distances = distance_matrix(embeddings)
    params = HdbscanParams(
        min_cluster_size=config.min_cluster_size,
        min_samples=config.min_samples,
        allow_single_cluster=config.allow_single_cluster,
    )
    clustering = hdbscan(distances.values, params)
    topics = extract_topics(
        rank_clusters(clustering, patterns.patterns),
        patterns.patterns,
        clustering.labels,
        kr,
        top_k=config.top_k,
        window_index=win.index,
    )
    logger.debug(
        "Window %d: %d posts, %d words, %d keywords, %d patterns, %d clusters, "
        "%d topics",
        win.index, win.batch_size, len(stats), len(keywords), len(patterns),
        clustering.n_clusters, len(topics),
    )
    return WindowResult(
        window=win,
        stats=stats,
        keywords=keywords,
        associations=table,
        patterns=patterns,
        embeddings=embeddings,
        distances=distances,
        clustering=clustering,
        topics=tuple(topics),
    )


def run_detection(
    windows: Sequence[Window],
    store: VectorStore,
    config: Config,
    stats: Sequence[dict[str, WordStats]] | None = None,
) -> DetectionResults:
    """Run the full pipeline over `windows` in index order.

    `stats` may carry precomputed word statistics; they depend only on the
    windows and log base, so a parameter sweep can rate once.
    """
    if stats is None:
        stats = rate_windows(windows, config.log_base)
    if len(stats) != len(windows):
        raise ValueError("stats must hold one entry per window")

    jobs = list(zip(windows, stats))
    if config.workers == 1 or len(jobs) < 2:
        results = [process_window(w, s, store, config) for w, s in jobs]
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(lambda job: process_window(*job, store, config), jobs))

    oov = sum(r.oov_words for r in results)
    if oov:
        logger.warning("%d pattern words had no vector and were skipped", oov)
    logger.info(
        "Detected %d topics over %d windows",
        sum(len(r.topics) for r in results), len(results),
    )
    return DetectionResults(windows=results, config=config)


# ---------------------------------------------------------------------------
# File inputs
# ---------------------------------------------------------------------------


def load_windows(config: Config) -> tuple[list[Window], IngestReport]:
    """Read posts and stopwords named by `config` and bucket them into windows."""
    if config.posts is None:
        raise ConfigError("No posts file given (--posts or 'posts' in the config file)")
    report = IngestReport()
    stopwords = load_stopwords(config.stopwords)
    windows = window(
        read_posts(config.posts, report),
        config.window_seconds,
        origin=config.origin,
        stopwords=stopwords,
        report=report,
    )
    report.log_summary()
    logger.info("Built %d windows of %d minutes", len(windows), config.window_minutes)
    return windows, report


def load_store(config: Config) -> VectorStore:
    if config.vectors is None:
        raise ConfigError("No vector file given (--vectors or 'vectors' in the config file)")
    return load_vectors(config.vectors)


def detect(config: Config) -> DetectionResults:
    """Load inputs named by `config` and run detection."""
    windows, report = load_windows(config)
    store = load_store(config)
    results = run_detection(windows, store, config)
    results.ingest = report
    return results
