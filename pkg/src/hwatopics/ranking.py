"""Per-window word statistics and keyword selection.

Every word in a window's vocabulary gets a keyword rating

    kr = (score + utility) / 2
    score = tf * log(|batch| / df)
    utility = diff * log((tf + 1) / (tf_prev + 1))   if diff > 0 else 0

where diff = tf - tf_prev and tf_prev is the word's frequency in the previous
window (0 when absent). The top h% of the vocabulary by kr become keywords.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import asdict, dataclass
from typing import Iterator, Mapping

from hwatopics.corpus import Window
from hwatopics.errors import InvariantViolation

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WordStats:
    """TF, DF and the derived ratings of one word in one window."""

    word: str
    tf: int
    df: int
    score: float
    diff: int
    utility: float
    kr: float

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class KeywordSet:
    """Keywords of one window, ordered by descending kr."""

    window_index: int
    keywords: tuple[str, ...]
    h: float

    def __len__(self) -> int:
        return len(self.keywords)

    def __iter__(self) -> Iterator[str]:
        return iter(self.keywords)

    def __contains__(self, word: object) -> bool:
        return word in self.keywords


def _log(x: float, base: float | None) -> float:
    return math.log(x) if base is None else math.log(x, base)


def term_frequencies(window: Window) -> dict[str, tuple[int, int]]:
    """Map word -> (tf, df): raw occurrences and number of posts containing it."""
    tf: Counter = Counter()
    df: Counter = Counter()
    for post in window.posts:
        tf.update(post.counts)
        df.update(post.counts.keys())
    return {w: (tf[w], df[w]) for w in sorted(tf)}


def score(tf: int, df: int, batch_size: int, log_base: float | None = None) -> float:
    """tf * log(batch_size / df). Zero when the word is in every post."""
    if not 1 <= df <= batch_size:
        raise InvariantViolation(
            f"document frequency {df} outside [1, {batch_size}]"
        )
    return tf * _log(batch_size / df, log_base)


def utility(tf_now: int, tf_prev: int, log_base: float | None = None) -> tuple[int, float]:
    """Return (diff, utility); utility rewards only rising frequencies."""
    diff = tf_now - tf_prev
    if diff <= 0:
        return diff, 0.0
    return diff, diff * _log((tf_now + 1) / (tf_prev + 1), log_base)


def keyword_rating(score_value: float, utility_value: float) -> float:
    return (score_value + utility_value) / 2


def keyword_ratings(stats: Mapping[str, WordStats]) -> dict[str, float]:
    """Map word -> kr."""
    return {w: s.kr for w, s in stats.items()}


def rate_window(
    window: Window,
    prev_tf: Mapping[str, int] | None = None,
    log_base: float | None = None,
) -> dict[str, WordStats]:
    """Compute WordStats for every vocabulary word of `window`.

    `prev_tf` is the word -> tf map of window L-1 (None or empty for L = 0
    or after an empty window).
    """
    prev_tf = prev_tf or {}
    batch = window.batch_size
    stats = {}
    for word, (tf, df) in term_frequencies(window).items():
        s = score(tf, df, batch, log_base)
        diff, u = utility(tf, prev_tf.get(word, 0), log_base)
        stats[word] = WordStats(
            word=word, tf=tf, df=df, score=s, diff=diff, utility=u,
            kr=keyword_rating(s, u),
        )
    return stats


def keyword_count(h: float, vocabulary_size: int) -> int:
    """ceil(h% of the vocabulary); at least one word for a non-empty vocabulary."""
    # Rounding first keeps 30% of 10 at 3 rather than ceil(3.0000000000000004).
    return math.ceil(round(h * vocabulary_size / 100, 9))


def select_keywords(
    stats: Mapping[str, WordStats], h: float, window_index: int = 0
) -> KeywordSet:
    """Top ceil(h/100 * |V|) words by kr.

    Ties are broken by higher tf, then lexicographically. Words with kr = 0
    never become keywords, even inside the cutoff.
    """
    if not 0 < h <= 100:
        raise ValueError(f"h must be in (0, 100], got {h}")
    ranked = sorted(stats.values(), key=lambda s: (-s.kr, -s.tf, s.word))
    top = ranked[: keyword_count(h, len(stats))]
    keywords = tuple(s.word for s in top if s.kr > 0)
    logger.debug(
        "Window %d: %d words, %d keywords at h=%s", window_index, len(stats),
        len(keywords), h,
    )
    return KeywordSet(window_index=window_index, keywords=keywords, h=h)
