"""Keyword co-occurrence, CIMAWA and associative gravity force (AGF).

For keywords x != y of one window:

    cooc(x, y)   = number of posts containing both
    cimawa(x, y) = cooc / tf(y) + delta * cooc / tf(x)
    agf(x, y)    = cimawa(x, y) * kr(x) / kr(y)

M(w), the max-association set of w, holds every keyword attaining the largest
agf(w, .). Pairs that never co-occur are not stored.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

import numpy as np
import pandas as pd
from scipy import sparse

from hwatopics.corpus import Window
from hwatopics.ranking import KeywordSet, WordStats

logger = logging.getLogger(__name__)

Pair = tuple[str, str]


def _unordered(x: str, y: str) -> Pair:
    return (x, y) if x < y else (y, x)


def incidence_matrix(window: Window, words: list[str]) -> sparse.csr_matrix:
    """Binary post x word matrix restricted to `words` (column order kept)."""
    column = {w: j for j, w in enumerate(words)}
    rows, cols = [], []
    for i, post in enumerate(window.posts):
        for w in post.counts:
            j = column.get(w)
            if j is not None:
                rows.append(i)
                cols.append(j)
    data = np.ones(len(rows), dtype=np.int64)
    return sparse.csr_matrix(
        (data, (rows, cols)), shape=(window.batch_size, len(words)), dtype=np.int64
    )


def cooccurrence(window: Window, keywords: Iterable[str]) -> dict[Pair, int]:
    """Posts containing both words, for every co-occurring unordered keyword pair.

    Keys are (x, y) with x < y. Pairs with count 0 are omitted.
    """
    words = sorted(set(keywords))
    if not words or not window.posts:
        return {}
    x = incidence_matrix(window, words)
    counts = sparse.triu(x.T @ x, k=1).tocoo()
    pairs = {
        (words[i], words[j]): int(c)
        for i, j, c in zip(counts.row, counts.col, counts.data)
        if c > 0
    }
    return dict(sorted(pairs.items()))


def cimawa(cooc: int, tf_x: int, tf_y: int, delta: float = 0.5) -> float:
    """Damped, asymmetric association of x towards y."""
    if cooc == 0:
        return 0.0
    return cooc / tf_y + delta * cooc / tf_x


def agf(cimawa_xy: float, kr_x: float, kr_y: float) -> float:
    """CIMAWA scaled by the rating ratio kr(x) / kr(y)."""
    return cimawa_xy * kr_x / kr_y


@dataclass(frozen=True)
class MaxAssociation:
    """M(w): the words attaining the maximum AGF from `word`.

    Iterates in enqueue order: descending AGF, ties lexicographic. All members
    share the same AGF, so this is plain lexicographic order.
    """

    word: str
    associates: frozenset[str]

    def __iter__(self) -> Iterator[str]:
        return iter(sorted(self.associates))

    def __len__(self) -> int:
        return len(self.associates)

    def __contains__(self, word: object) -> bool:
        return word in self.associates


def max_association(word: str, row: Mapping[str, float]) -> MaxAssociation:
    """Argmax set of an AGF row; ties by exact float equality."""
    if not row:
        return MaxAssociation(word=word, associates=frozenset())
    best = max(row.values())
    return MaxAssociation(
        word=word,
        associates=frozenset(y for y, v in row.items() if v == best),
    )


@dataclass(frozen=True)
class AssociationTable:
    """Pairwise statistics over one window's keywords."""

    window_index: int
    keywords: tuple[str, ...]
    delta: float
    cooc: dict[Pair, int]
    cimawa: dict[Pair, float]
    agf: dict[Pair, float]
    _rows: dict[str, dict[str, float]] = field(default_factory=dict, repr=False)

    def count(self, x: str, y: str) -> int:
        return self.cooc.get(_unordered(x, y), 0)

    def row(self, x: str) -> dict[str, float]:
        """AGF(x, .) over keywords co-occurring with x."""
        return self._rows.get(x, {})

    def max_association(self, word: str) -> MaxAssociation:
        return max_association(word, self.row(word))

    def to_frame(self) -> pd.DataFrame:
        """One row per ordered pair: x, y, cooc, cimawa, agf."""
        records = [
            {
                "x": x,
                "y": y,
                "cooc": self.count(x, y),
                "cimawa": self.cimawa[(x, y)],
                "agf": value,
            }
            for (x, y), value in sorted(self.agf.items())
        ]
        return pd.DataFrame(records, columns=["x", "y", "cooc", "cimawa", "agf"])


def build_association_table(
    window: Window,
    keywords: KeywordSet,
    stats: Mapping[str, WordStats],
    delta: float = 0.5,
) -> AssociationTable:
    """CooC, CIMAWA and AGF for every ordered pair of co-occurring keywords."""
    counts = cooccurrence(window, keywords)
    cim: dict[Pair, float] = {}
    force: dict[Pair, float] = {}
    rows: dict[str, dict[str, float]] = {}
    for (a, b), c in counts.items():
        for x, y in ((a, b), (b, a)):
            sx, sy = stats[x], stats[y]
            cim[(x, y)] = cimawa(c, sx.tf, sy.tf, delta)
            if sy.kr <= 0:
                continue
            force[(x, y)] = agf(cim[(x, y)], sx.kr, sy.kr)
            rows.setdefault(x, {})[y] = force[(x, y)]
    logger.debug(
        "Window %d: %d co-occurring keyword pairs", keywords.window_index, len(counts)
    )
    return AssociationTable(
        window_index=keywords.window_index,
        keywords=keywords.keywords,
        delta=delta,
        cooc=counts,
        cimawa=cim,
        agf=force,
        _rows=rows,
    )


def max_associations(table: AssociationTable) -> dict[str, MaxAssociation]:
    """M(w) for every keyword of the table, in keyword order."""
    return {w: table.max_association(w) for w in table.keywords}
