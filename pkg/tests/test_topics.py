"""Tests for cluster ranking and topic assembly."""

import numpy as np
import pytest

from hwatopics.clustering import NOISE, Clustering
from hwatopics.patterns import Pattern
from hwatopics.ranking import WordStats
from hwatopics.topics import (
    TopicSource,
    extract_topics,
    order_keywords,
    rank_clusters,
    topic_word_frequencies,
)


def pattern(words, score):
    words = tuple(words.split())
    return Pattern(words=words, seed=words[0], score=score)


def clustering(labels):
    labels = np.asarray(labels)
    n_clusters = int(labels.max()) + 1 if len(labels) and labels.max() >= 0 else 0
    members = tuple(
        tuple(int(i) for i in np.flatnonzero(labels == k)) for k in range(n_clusters)
    )
    return Clustering(labels=labels, members=members)


@pytest.fixture
def patterns():
    return [
        pattern("fire plasco", 3.0),
        pattern("plasco building", 2.0),
        pattern("goal arsenal", 2.5),
        pattern("cup final", 1.0),
        pattern("wembley", 0.5),
        pattern("rain", 0.2),
    ]


KR = {
    "fire": 4.0, "plasco": 3.0, "building": 1.0, "goal": 3.0, "arsenal": 2.0,
    "cup": 1.0, "final": 1.0, "wembley": 0.5, "rain": 0.2,
}


# ---------------------------------------------------------------------------
# Cluster ranking
# ---------------------------------------------------------------------------


class TestRankClusters:
    def test_by_best_member_score(self, patterns):
        ranked = rank_clusters(clustering([1, 1, 0, 0, NOISE, NOISE]), patterns)
        assert [c.label for c in ranked] == [1, 0]
        assert [c.score for c in ranked] == [3.0, 2.5]

    def test_size_breaks_ties(self):
        pats = [pattern("a", 1.0), pattern("b", 1.0), pattern("c", 1.0)]
        ranked = rank_clusters(clustering([0, 1, 1]), pats)
        assert [c.members for c in ranked] == [(1, 2), (0,)]

    def test_smallest_member_breaks_remaining_ties(self):
        pats = [pattern("a", 1.0), pattern("b", 1.0)]
        ranked = rank_clusters(clustering([1, 0]), pats)
        assert [c.members for c in ranked] == [(0,), (1,)]

    def test_no_clusters(self, patterns):
        assert rank_clusters(clustering([NOISE] * 6), patterns) == []


# ---------------------------------------------------------------------------
# Topics
# ---------------------------------------------------------------------------


class TestOrderKeywords:
    def test_by_rating_then_word(self):
        assert order_keywords(["final", "cup", "goal", "goal"], KR) == ("goal", "cup", "final")

    def test_unknown_words_last(self):
        assert order_keywords(["zzz", "fire"], KR) == ("fire", "zzz")


class TestExtractTopics:
    def test_cluster_union_keywords(self, patterns):
        labels = [0, 0, 1, 1, NOISE, NOISE]
        c = clustering(labels)
        topics = extract_topics(rank_clusters(c, patterns), patterns, c.labels, KR, top_k=2)
        assert topics[0].keywords == ("fire", "plasco", "building")
        assert topics[1].keywords == ("goal", "arsenal", "cup", "final")
        assert all(t.source is TopicSource.CLUSTER for t in topics)
        assert [t.rank for t in topics] == [1, 2]

    def test_fallback_fills_ranks(self, patterns):
        labels = [0, 0, NOISE, NOISE, NOISE, NOISE]
        c = clustering(labels)
        topics = extract_topics(rank_clusters(c, patterns), patterns, c.labels, KR, top_k=3)
        assert len(topics) == 3
        assert topics[0].source is TopicSource.CLUSTER
        assert [t.member_patterns for t in topics[1:]] == [(2,), (3,)]
        assert [t.source for t in topics[1:]] == [TopicSource.FALLBACK] * 2

    def test_scores_non_increasing(self, patterns):
        # the noise pattern outscores the only cluster
        labels = [NOISE, 0, NOISE, 0, NOISE, NOISE]
        c = clustering(labels)
        topics = extract_topics(rank_clusters(c, patterns), patterns, c.labels, KR)
        scores = [t.score for t in topics]
        assert scores == sorted(scores, reverse=True)
        assert topics[1].member_patterns == (0,)
        assert topics[1].score == 2.0

    def test_all_noise(self, patterns):
        c = clustering([NOISE] * 6)
        topics = extract_topics([], patterns, c.labels, KR, top_k=2)
        assert [t.member_patterns for t in topics] == [(0,), (2,)]
        assert topics[0].score == 3.0

    def test_unbounded_reports_everything(self, patterns):
        c = clustering([0, 0, NOISE, NOISE, NOISE, NOISE])
        topics = extract_topics(rank_clusters(c, patterns), patterns, c.labels, KR)
        assert len(topics) == 5

    def test_fewer_candidates_than_k(self, patterns):
        c = clustering([0, 0, 0, 0, 0, 0])
        topics = extract_topics(rank_clusters(c, patterns), patterns, c.labels, KR, top_k=4)
        assert len(topics) == 1

    def test_no_patterns(self):
        assert extract_topics([], [], np.array([], dtype=int), KR, top_k=3) == []

    def test_bad_top_k(self, patterns):
        with pytest.raises(ValueError):
            extract_topics([], patterns, [NOISE] * 6, KR, top_k=0)

    def test_window_index_and_dict(self, patterns):
        c = clustering([NOISE] * 6)
        topic = extract_topics([], patterns, c.labels, KR, top_k=1, window_index=9)[0]
        assert topic.window_index == 9
        assert topic.to_dict() == {
            "rank": 1, "score": 3.0, "keywords": ["fire", "plasco"], "source": "fallback",
        }

    def test_word_frequencies(self, patterns):
        c = clustering([NOISE] * 6)
        topic = extract_topics([], patterns, c.labels, KR, top_k=1)[0]
        stats = {
            "fire": WordStats(word="fire", tf=9, df=3, score=1.0, diff=0, utility=0.0, kr=1.0),
        }
        assert topic_word_frequencies(topic, stats) == {"fire": 9}
