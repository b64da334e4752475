"""Synthetic corpora, vectors and ground truth for tests and demos.

`planted_corpus` builds windows in which a few disjoint topic vocabularies
clearly dominate the keyword ratings; `random_corpus` builds large,
Zipf-distributed streams for determinism and throughput checks.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from hwatopics.corpus import RawPost

DEFAULT_TOPICS = (
    ("fire", "plasco", "building", "burn", "tehran"),
    ("goal", "arsenal", "final", "cup", "wembley"),
)

DEFAULT_ORIGIN = 1_485_000_000

_SYLLABLES = [c + v for c in "bdfgklmnprstvz" for v in "aeiou"]


def make_words(rng: np.random.Generator, n: int, exclude: Iterable[str] = ()) -> list[str]:
    """`n` distinct pronounceable letter-only words not in `exclude`."""
    taken = set(exclude)
    words: list[str] = []
    while len(words) < n:
        word = "".join(rng.choice(_SYLLABLES, size=3))
        if word not in taken:
            taken.add(word)
            words.append(word)
    return words


@dataclass(frozen=True)
class PlantedCorpus:
    posts: tuple[RawPost, ...]
    topics: tuple[tuple[str, ...], ...]
    fillers: tuple[str, ...]
    n_windows: int
    window_seconds: int
    origin: int

    def ground_truth(self) -> dict:
        """GT document: every window carries every planted topic, all words required."""
        return {
            "windows": [
                {
                    "index": L,
                    "topics": [
                        {"label": f"topic-{i}", "required": list(words), "optional": []}
                        for i, words in enumerate(self.topics)
                    ],
                }
                for L in range(self.n_windows)
            ]
        }


def planted_corpus(
    n_windows: int = 2,
    topics: Sequence[Sequence[str]] = DEFAULT_TOPICS,
    posts_per_topic: int = 25,
    fillers_per_window: int = 23,
    window_seconds: int = 720 * 60,
    origin: int = DEFAULT_ORIGIN,
    stopword: str | None = "the",
    seed: int = 0,
) -> PlantedCorpus:
    """Windows of topic posts that each contain their topic's full vocabulary.

    Each window also holds `fillers_per_window` fresh words used once, so the
    planted words are exactly the top ratings. Posts carry a hashtag, a URL,
    a mention and `stopword`, which preprocessing must remove (pass the
    stopword to the pipeline).
    """
    rng = np.random.default_rng(seed)
    planted = {w for words in topics for w in words}
    fillers = make_words(rng, n_windows * fillers_per_window, exclude=planted)
    per_window = posts_per_topic * len(topics)
    if fillers_per_window > per_window:
        raise ValueError("more filler words than posts in a window")

    posts = []
    for L in range(n_windows):
        window_fillers = fillers[L * fillers_per_window:(L + 1) * fillers_per_window]
        for j in range(per_window):
            words = list(topics[j % len(topics)])
            rng.shuffle(words)
            extra = [window_fillers[j]] if j < fillers_per_window else []
            noise = ["#facup", "@reporter", "https://t.co/x1"]
            if stopword:
                noise.append(stopword.capitalize())
            text = " ".join(noise[:1] + words[:2] + noise[1:] + words[2:] + extra)
            posts.append(
                RawPost(
                    id=f"w{L}p{j}",
                    text=text,
                    timestamp=origin + L * window_seconds + j * (window_seconds // per_window),
                )
            )
    return PlantedCorpus(
        posts=tuple(posts),
        topics=tuple(tuple(t) for t in topics),
        fillers=tuple(fillers),
        n_windows=n_windows,
        window_seconds=window_seconds,
        origin=origin,
    )


def planted_vectors(
    corpus: PlantedCorpus, dim: int = 16, noise: float = 0.01, seed: int = 0
) -> dict[str, np.ndarray]:
    """Topic i's words point along axis i; fillers get random directions."""
    if dim < len(corpus.topics):
        raise ValueError("need at least one dimension per topic")
    rng = np.random.default_rng(seed)
    vectors = {}
    for i, words in enumerate(corpus.topics):
        for w in words:
            v = rng.normal(0, noise, dim)
            v[i] += 1.0
            vectors[w] = v
    for w in corpus.fillers:
        vectors[w] = rng.normal(0, 1, dim)
    return vectors


def random_corpus(
    n_posts: int = 10_000,
    n_windows: int = 60,
    window_seconds: int = 60,
    vocab_size: int = 3_000,
    words_per_post: tuple[int, int] = (4, 14),
    origin: int = DEFAULT_ORIGIN,
    seed: int = 0,
) -> tuple[list[RawPost], list[str]]:
    """Zipf-distributed posts spread uniformly over `n_windows` windows.

    Returns the posts and the vocabulary they draw from.
    """
    rng = np.random.default_rng(seed)
    vocab = make_words(rng, vocab_size)
    weights = 1.0 / np.arange(1, vocab_size + 1)
    weights /= weights.sum()
    span = n_windows * window_seconds
    timestamps = np.sort(rng.integers(0, span, size=n_posts))
    lengths = rng.integers(words_per_post[0], words_per_post[1] + 1, size=n_posts)
    posts = [
        RawPost(
            id=f"r{i}",
            text=" ".join(vocab[k] for k in rng.choice(vocab_size, size=int(n), p=weights)),
            timestamp=origin + int(t),
        )
        for i, (t, n) in enumerate(zip(timestamps, lengths))
    ]
    return posts, vocab


def random_vectors(words: Iterable[str], dim: int = 32, seed: int = 0) -> dict[str, np.ndarray]:
    rng = np.random.default_rng(seed)
    return {w: rng.normal(0, 1, dim) for w in words}


# ---------------------------------------------------------------------------
# Writers
# ---------------------------------------------------------------------------


def write_posts(posts: Iterable[RawPost], path: Path) -> Path:
    with open(path, "w", encoding="utf-8") as f:
        for p in posts:
            record = {"id": p.id, "text": p.text, "timestamp": p.timestamp}
            f.write(json.dumps(record, ensure_ascii=False) + "\n")
    return path


def write_vectors(vectors: Mapping[str, Sequence[float]], path: Path) -> Path:
    """Text vector format: "count dim" header, then "word v1 ... vdim"."""
    dim = len(next(iter(vectors.values()))) if vectors else 0
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"{len(vectors)} {dim}\n")
        for word, vec in vectors.items():
            f.write(word + " " + " ".join(repr(float(x)) for x in vec) + "\n")
    return path


def write_ground_truth(doc: dict, path: Path) -> Path:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(doc, f, indent=2, ensure_ascii=False)
    return path


def write_stopwords(words: Iterable[str], path: Path) -> Path:
    with open(path, "w", encoding="utf-8") as f:
        f.write("".join(w + "\n" for w in words))
    return path
