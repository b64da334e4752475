"""Cluster ranking and topic assembly.

A cluster scores the best mean-kr among its patterns. Clusters are reported
first; when there are fewer clusters than requested topics, noise patterns
fill the remaining ranks as single-pattern fallback topics.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

import numpy as np

from hwatopics.clustering import NOISE, Clustering
from hwatopics.patterns import Pattern
from hwatopics.ranking import WordStats

logger = logging.getLogger(__name__)


class TopicSource(str, Enum):
    CLUSTER = "cluster"
    FALLBACK = "fallback"


@dataclass(frozen=True)
class RankedCluster:
    label: int
    score: float
    members: tuple[int, ...]


@dataclass(frozen=True)
class Topic:
    """One reported topic; `member_patterns` are ids into the window's PatternSet."""

    window_index: int
    rank: int
    keywords: tuple[str, ...]
    score: float
    member_patterns: tuple[int, ...]
    source: TopicSource

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "score": self.score,
            "keywords": list(self.keywords),
            "source": self.source.value,
        }


def rank_clusters(
    clustering: Clustering, patterns: Sequence[Pattern]
) -> list[RankedCluster]:
    """Order clusters by best member score, then size, then smallest pattern id."""
    ranked = [
        RankedCluster(
            label=label,
            score=max(patterns[i].score for i in members),
            members=members,
        )
        for label, members in enumerate(clustering.members)
    ]
    return sorted(ranked, key=lambda c: (-c.score, -len(c.members), min(c.members)))


def order_keywords(words: Sequence[str], kr: Mapping[str, float]) -> tuple[str, ...]:
    """Deduplicate and sort by descending kr, ties lexicographic."""
    return tuple(sorted(set(words), key=lambda w: (-kr.get(w, 0.0), w)))


def extract_topics(
    ranked: Sequence[RankedCluster],
    patterns: Sequence[Pattern],
    labels: np.ndarray | Sequence[int],
    kr: Mapping[str, float],
    top_k: int | None = None,
    window_index: int = 0,
) -> list[Topic]:
    """Top-k topics: clusters first, then noise patterns by score.

    `top_k=None` reports every cluster followed by every noise pattern.
    A fallback topic's score is capped at the score of the topic above it so
    scores never increase with rank.
    """
    if top_k is not None and top_k < 1:
        raise ValueError(f"top_k must be >= 1, got {top_k}")
    limit = len(patterns) if top_k is None else top_k

    topics: list[Topic] = []
    for cluster in ranked[:limit]:
        words = [w for i in cluster.members for w in patterns[i].words]
        topics.append(
            Topic(
                window_index=window_index,
                rank=len(topics) + 1,
                keywords=order_keywords(words, kr),
                score=cluster.score,
                member_patterns=cluster.members,
                source=TopicSource.CLUSTER,
            )
        )

    if len(topics) < limit:
        noise = [i for i, label in enumerate(labels) if label == NOISE]
        noise.sort(key=lambda i: (-patterns[i].score, i))
        for i in noise[: limit - len(topics)]:
            score = patterns[i].score
            if topics:
                score = min(score, topics[-1].score)
            topics.append(
                Topic(
                    window_index=window_index,
                    rank=len(topics) + 1,
                    keywords=order_keywords(patterns[i].words, kr),
                    score=score,
                    member_patterns=(i,),
                    source=TopicSource.FALLBACK,
                )
            )
    logger.debug("Window %d: %d topics", window_index, len(topics))
    return topics


def topic_word_frequencies(
    topic: Topic, stats: Mapping[str, WordStats]
) -> dict[str, int]:
    """word -> tf for each topic keyword, in keyword order."""
    return {w: stats[w].tf for w in topic.keywords if w in stats}
