"""Association patterns: breadth-first closure over max-association sets.

Starting from a seed keyword, a FIFO queue is expanded by following M(c) for
every newly inserted word c; the closure is one pattern. One pattern is
extracted per keyword, then patterns contained in another are dropped.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

logger = logging.getLogger(__name__)

# M(w) as built by hwatopics.association, or any word -> words map. Members of
# one M(w) share the same AGF, so they are enqueued in lexicographic order.
AssociationMap = Mapping[str, Iterable[str]]


@dataclass(frozen=True)
class Pattern:
    """Keywords reachable from `seed`, in insertion order."""

    words: tuple[str, ...]
    seed: str
    score: float = 0.0

    def __post_init__(self) -> None:
        if not self.words:
            raise ValueError("Pattern must contain at least one word")
        if len(set(self.words)) != len(self.words):
            raise ValueError(f"Pattern {self.words} has duplicate words")
        if self.seed not in self.words:
            raise ValueError(f"Seed {self.seed!r} not in pattern {self.words}")

    @property
    def word_set(self) -> frozenset[str]:
        return frozenset(self.words)

    def __len__(self) -> int:
        return len(self.words)

    def to_dict(self) -> dict:
        return {"seed": self.seed, "words": list(self.words), "score": self.score}


@dataclass(frozen=True)
class PatternSet:
    window_index: int
    patterns: tuple[Pattern, ...]

    def __len__(self) -> int:
        return len(self.patterns)

    def __iter__(self) -> Iterator[Pattern]:
        return iter(self.patterns)

    def __getitem__(self, i: int) -> Pattern:
        return self.patterns[i]

    def to_dict(self) -> dict:
        return {
            "window": self.window_index,
            "patterns": [
                {"id": i, **p.to_dict()} for i, p in enumerate(self.patterns)
            ],
        }


def pattern_score(words: Iterable[str], kr: Mapping[str, float] | None) -> float:
    """Mean kr of the member words (0 without ratings)."""
    if kr is None:
        return 0.0
    return float(np.mean([kr[w] for w in words]))


def extract_pattern(
    seed: str, M: AssociationMap, kr: Mapping[str, float] | None = None
) -> Pattern:
    """Breadth-first closure of `seed` under M.

    Each word enters the pattern at most once and only insertions enqueue,
    so the loop terminates.
    """
    words: list[str] = []
    members: set[str] = set()
    queue = deque([seed])
    while queue:
        c = queue.popleft()
        if c in members:
            continue
        words.append(c)
        members.add(c)
        queue.extend(sorted(M.get(c, ())))
    return Pattern(words=tuple(words), seed=seed, score=pattern_score(words, kr))


def merge_subsets(patterns: Sequence[Pattern], window_index: int = 0) -> PatternSet:
    """Drop every pattern whose word set is contained in another's.

    Of identical word sets, the one with the lexicographically smallest seed
    survives. Survivors keep their input order.
    """
    order = sorted(
        range(len(patterns)), key=lambda i: (-len(patterns[i]), patterns[i].seed)
    )
    kept_sets: list[frozenset[str]] = []
    kept: set[int] = set()
    for i in order:
        s = patterns[i].word_set
        if any(s <= other for other in kept_sets):
            continue
        kept_sets.append(s)
        kept.add(i)
    return PatternSet(
        window_index=window_index,
        patterns=tuple(p for i, p in enumerate(patterns) if i in kept),
    )


def extract_all(
    keywords: Iterable[str],
    M: AssociationMap,
    kr: Mapping[str, float] | None = None,
    window_index: int = 0,
) -> PatternSet:
    """One pattern per keyword seed, then subset merging."""
    raw = [extract_pattern(seed, M, kr) for seed in keywords]
    merged = merge_subsets(raw, window_index)
    logger.debug(
        "Window %d: %d seed patterns merged into %d", window_index, len(raw),
        len(merged),
    )
    return merged
