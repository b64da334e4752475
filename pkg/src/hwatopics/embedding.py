"""Word vectors, pattern embeddings and the pattern cosine-distance matrix.

Vectors are read from the plain-text interchange format used by pre-trained
embedding releases: a header "count dim", then "word f1 ... fdim" per line.
A pattern's vector is the mean of its in-vocabulary words; distance is
1 - cosine similarity.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from hwatopics.corpus import normalize_word, read_text_lines
from hwatopics.errors import InputError, InvariantViolation
from hwatopics.patterns import Pattern

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VectorStore:
    """Read-only word -> vector lookup; safe to share between threads."""

    dimension: int
    index: dict[str, int]
    matrix: np.ndarray
    malformed: int = 0

    def __len__(self) -> int:
        return len(self.index)

    def __contains__(self, word: object) -> bool:
        return word in self.index

    def get(self, word: str) -> np.ndarray | None:
        """Vector of `word` (normalized like corpus words), or None if OOV."""
        i = self.index.get(normalize_word(word))
        return None if i is None else self.matrix[i]

    @classmethod
    def from_mapping(cls, vectors: dict[str, Sequence[float]]) -> VectorStore:
        """Build a store from an in-memory word -> vector map."""
        words = list(vectors)
        if not words:
            raise InputError("Cannot build a vector store from no vectors")
        matrix = np.asarray([vectors[w] for w in words], dtype=np.float64)
        index: dict[str, int] = {}
        for i, w in enumerate(words):
            index.setdefault(normalize_word(w), i)
        return cls(dimension=matrix.shape[1], index=index, matrix=matrix)


def _parse_header(line: str, path: Path) -> tuple[int, int]:
    parts = line.split()
    try:
        count, dim = int(parts[0]), int(parts[1])
    except (IndexError, ValueError) as exc:
        raise InputError(f"{path}: bad vector header {line.strip()!r}") from exc
    if len(parts) != 2 or dim < 1 or count < 0:
        raise InputError(f"{path}: bad vector header {line.strip()!r}")
    return count, dim


def load_vectors(path: Path) -> VectorStore:
    """Load a text vector file.

    Lines of the wrong arity or with unparseable or non-finite numbers are
    counted and skipped; a repeated word keeps its first vector.
    """
    lines = read_text_lines(path)
    rest = iter(lines)
    header = next((ln for ln in rest if ln.strip()), None)
    if header is None:
        raise InputError(f"Vector file {path} is empty")
    expected, dim = _parse_header(header, path)

    index: dict[str, int] = {}
    rows: list[list[float]] = []
    malformed = 0
    duplicates = 0
    for line in rest:
        parts = line.rstrip("\n").split()
        if not parts:
            continue
        if len(parts) != dim + 1:
            malformed += 1
            continue
        try:
            values = [float(v) for v in parts[1:]]
        except ValueError:
            malformed += 1
            continue
        if not np.isfinite(values).all():
            malformed += 1
            continue
        word = normalize_word(parts[0])
        if word in index:
            duplicates += 1
            continue
        index[word] = len(rows)
        rows.append(values)

    if malformed:
        logger.warning("Skipped %d malformed lines in %s", malformed, path)
    if duplicates:
        logger.debug("Ignored %d repeated words in %s", duplicates, path)
    if len(rows) != expected:
        logger.warning(
            "%s header announces %d vectors, loaded %d", path, expected, len(rows)
        )
    matrix = np.asarray(rows, dtype=np.float64).reshape(len(rows), dim)
    logger.info("Loaded %d vectors of dimension %d from %s", len(rows), dim, path)
    return VectorStore(dimension=dim, index=index, matrix=matrix, malformed=malformed)


@dataclass(frozen=True)
class PatternEmbedding:
    """Mean vector of a pattern's in-vocabulary words."""

    pattern: Pattern
    vector: np.ndarray
    covered: int
    oov: tuple[str, ...] = ()

    @property
    def degenerate(self) -> bool:
        return self.covered == 0 or not np.any(self.vector)


def embed_pattern(pattern: Pattern, store: VectorStore) -> PatternEmbedding:
    """Mean over member words found in `store`; OOV words are skipped."""
    found, oov = [], []
    for w in pattern.words:
        v = store.get(w)
        if v is None:
            oov.append(w)
        else:
            found.append(v)
    if found:
        vector = np.mean(found, axis=0)
    else:
        vector = np.zeros(store.dimension)
    return PatternEmbedding(
        pattern=pattern, vector=vector, covered=len(found), oov=tuple(oov)
    )


@dataclass(frozen=True)
class DistanceMatrix:
    """Symmetric pattern distances in [0, 2] with a zero diagonal.

    `flagged` lists the pairs (j, k), j < k, involving a degenerate embedding;
    those are set to 1.
    """

    values: np.ndarray
    flagged: tuple[tuple[int, int], ...] = ()

    @property
    def n(self) -> int:
        return self.values.shape[0]


def distance_matrix(embeddings: Sequence[PatternEmbedding]) -> DistanceMatrix:
    """D(j, k) = 1 - cos(E_j, E_k); pairs with a zero vector get 1."""
    n = len(embeddings)
    if n == 0:
        return DistanceMatrix(values=np.zeros((0, 0)))
    dims = {e.vector.shape for e in embeddings}
    if len(dims) != 1:
        raise InvariantViolation(f"Pattern embeddings differ in dimension: {dims}")

    E = np.vstack([e.vector for e in embeddings])
    norms = np.linalg.norm(E, axis=1)
    degenerate = np.array([e.degenerate for e in embeddings]) | (norms == 0)
    safe = np.where(degenerate, 1.0, norms)
    unit = E / safe[:, None]
    D = np.clip(1.0 - unit @ unit.T, 0.0, 2.0)
    D = (D + D.T) / 2
    D[degenerate, :] = 1.0
    D[:, degenerate] = 1.0
    np.fill_diagonal(D, 0.0)

    bad = np.flatnonzero(degenerate)
    flagged = tuple(
        sorted({(min(j, k), max(j, k)) for j in bad for k in range(n) if k != j})
    )
    if flagged:
        logger.debug("%d pattern pairs involve a degenerate embedding", len(flagged))
    return DistanceMatrix(values=D, flagged=tuple((int(j), int(k)) for j, k in flagged))
