"""Post ingestion: tokenization, preprocessing and fixed-duration windowing.

Posts arrive as JSON Lines ({"id", "text", "timestamp"}). Each post is
tokenized into typed tokens; only Word and Number tokens survive, minus
stopwords. Posts are then bucketed into half-open windows
[origin + L*duration, origin + (L+1)*duration).
"""

from __future__ import annotations

import json
import logging
import re
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator

from hwatopics.errors import InputError

logger = logging.getLogger(__name__)

ZWNJ = "\u200c"


class TokenKind(str, Enum):
    URL = "url"
    MENTION = "mention"
    HASHTAG = "hashtag"
    EMOJI = "emoji"
    NUMBER = "number"
    WORD = "word"


RETAINED_KINDS = frozenset({TokenKind.WORD, TokenKind.NUMBER})

# Emoji blocks, pictographs, dingbats, regional indicators, arrows/symbols.
_EMOJI_CHARS = (
    r"\U0001F000-\U0001FAFF"
    r"\u2300-\u23ff"
    r"\u2460-\u24ff"
    r"\u2600-\u27bf"
    r"\u2b00-\u2bff"
    r"\u3030\u303d\u3297\u3299"
)
# Joiners, variation selector and skin tones continue an emoji sequence.
_EMOJI_CONT = r"\u200d\ufe0f\U0001F3FB-\U0001F3FF"
# Combining marks that belong inside words (Latin accents, Arabic harakat,
# Devanagari signs); \w alone does not cover them.
_WORD_MARKS = r"\u0300-\u036f\u0610-\u061a\u064b-\u065f\u0670\u06d6-\u06ed\u0900-\u0903\u093a-\u094f"

_TOKEN_RE = re.compile(
    rf"""
    (?P<url>(?:https?://|www\.)\S+)
    |(?P<mention>@\w+)
    |(?P<hashtag>\#[\w\u200c]+)
    |(?P<emoji>(?:[{_EMOJI_CHARS}][{_EMOJI_CONT}]*)+)
    |(?P<number>\d+(?:[.,]\d+)*)
    |(?P<word>(?:[^\W\d_]|[{_WORD_MARKS}])(?:[^\W\d_]|[{_WORD_MARKS}\u200c])*)
    """,
    re.VERBOSE,
)

_KIND_BY_GROUP = {
    "url": TokenKind.URL,
    "mention": TokenKind.MENTION,
    "hashtag": TokenKind.HASHTAG,
    "emoji": TokenKind.EMOJI,
    "number": TokenKind.NUMBER,
    "word": TokenKind.WORD,
}


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RawPost:
    """A post as read from the input stream, before preprocessing."""

    id: str
    text: str
    timestamp: int

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("RawPost.id must be non-empty")
        if self.timestamp < 0:
            raise ValueError(f"RawPost {self.id}: timestamp {self.timestamp} < 0")


@dataclass(frozen=True)
class Token:
    surface: str
    kind: TokenKind

    @property
    def retained(self) -> bool:
        return self.kind in RETAINED_KINDS


@dataclass(frozen=True)
class Post:
    """A preprocessed post: its word set plus raw occurrence counts.

    `words` is the set used for DF and co-occurrence; `counts` keeps repeated
    occurrences for TF.
    """

    id: str
    timestamp: int
    counts: dict[str, int]

    @property
    def words(self) -> frozenset[str]:
        return frozenset(self.counts)


@dataclass(frozen=True)
class Window:
    """All posts whose timestamp falls in [start, end)."""

    index: int
    start: int
    end: int
    posts: tuple[Post, ...]

    @property
    def vocabulary(self) -> frozenset[str]:
        vocab: set[str] = set()
        for post in self.posts:
            vocab.update(post.counts)
        return frozenset(vocab)

    @property
    def batch_size(self) -> int:
        return len(self.posts)


@dataclass
class IngestReport:
    """Counters for recoverable ingest problems, summarized once per run."""

    lines_read: int = 0
    parse_errors: int = 0
    before_origin: int = 0
    posts_accepted: int = 0
    bad_lines: list[int] = field(default_factory=list)

    def log_summary(self) -> None:
        logger.info(
            "Ingested %d posts from %d lines", self.posts_accepted, self.lines_read
        )
        if self.parse_errors:
            shown = ", ".join(str(n) for n in self.bad_lines[:10])
            logger.warning(
                "Skipped %d unparseable post lines (first: %s)", self.parse_errors, shown
            )
        if self.before_origin:
            logger.warning(
                "Rejected %d posts with timestamps before the window origin",
                self.before_origin,
            )


# ---------------------------------------------------------------------------
# Tokenization and preprocessing
# ---------------------------------------------------------------------------


def normalize_word(text: str) -> str:
    """NFC-normalize and case-fold; the single normalization used everywhere."""
    return unicodedata.normalize("NFC", text).casefold()


def tokenize(text: str) -> list[Token]:
    """Split a post into typed tokens.

    At each position the first matching rule wins, in the order Url, Mention,
    Hashtag, Emoji, Number, Word. Anything no rule matches (whitespace,
    punctuation) is a separator. ZWNJ stays inside words.
    """
    tokens = []
    for match in _TOKEN_RE.finditer(unicodedata.normalize("NFC", text)):
        group = match.lastgroup
        kind = _KIND_BY_GROUP[group]
        surface = match.group(group)
        if kind is TokenKind.WORD:
            surface = normalize_word(surface.rstrip(ZWNJ))
        if surface:
            tokens.append(Token(surface=surface, kind=kind))
    return tokens


def _retained_counts(post: RawPost, stopwords: frozenset[str]) -> Counter:
    return Counter(
        t.surface for t in tokenize(post.text) if t.retained and t.surface not in stopwords
    )


def preprocess(post: RawPost, stopwords: frozenset[str] = frozenset()) -> frozenset[str]:
    """Word set of a post: Word and Number tokens minus stopwords, deduplicated."""
    return frozenset(_retained_counts(post, stopwords))


def prepare_post(post: RawPost, stopwords: frozenset[str] = frozenset()) -> Post:
    """Preprocess a post keeping occurrence counts (needed for TF)."""
    return Post(id=post.id, timestamp=post.timestamp, counts=dict(_retained_counts(post, stopwords)))


# ---------------------------------------------------------------------------
# Windowing
# ---------------------------------------------------------------------------


def window(
    posts: Iterable[RawPost],
    duration: int,
    origin: int | None = None,
    stopwords: frozenset[str] = frozenset(),
    report: IngestReport | None = None,
) -> list[Window]:
    """Bucket posts into consecutive fixed-duration windows.

    Post at time t goes to window floor((t - origin) / duration). Windows are
    returned in index order from 0 to the last occupied index, empty windows
    included. `origin` defaults to the earliest timestamp. Posts before the
    origin are rejected and counted in `report`.
    """
    if duration <= 0:
        raise ValueError(f"Window duration must be positive, got {duration}")
    posts = list(posts)
    if origin is None:
        origin = min((p.timestamp for p in posts), default=0)

    buckets: dict[int, list[Post]] = {}
    for raw in posts:
        if raw.timestamp < origin:
            if report is not None:
                report.before_origin += 1
            continue
        index = (raw.timestamp - origin) // duration
        buckets.setdefault(index, []).append(prepare_post(raw, stopwords))
        if report is not None:
            report.posts_accepted += 1

    if not buckets:
        return []
    return [
        Window(
            index=i,
            start=origin + i * duration,
            end=origin + (i + 1) * duration,
            posts=tuple(buckets.get(i, ())),
        )
        for i in range(max(buckets) + 1)
    ]


# ---------------------------------------------------------------------------
# File readers
# ---------------------------------------------------------------------------


def read_text_lines(path: Path) -> Iterator[str]:
    """Yield lines of a UTF-8 text file; missing or undecodable files raise InputError."""
    try:
        with open(path, encoding="utf-8", errors="strict") as f:
            yield from f
    except FileNotFoundError as exc:
        raise InputError(f"File not found: {path}") from exc
    except UnicodeDecodeError as exc:
        raise InputError(f"{path} is not valid UTF-8: {exc}") from exc


def _parse_post(line: str) -> RawPost:
    obj = json.loads(line)
    timestamp = obj["timestamp"]
    if isinstance(timestamp, bool) or not isinstance(timestamp, int):
        raise ValueError(f"timestamp must be an integer, got {timestamp!r}")
    if not isinstance(obj["text"], str):
        raise ValueError("text must be a string")
    return RawPost(id=str(obj["id"]), text=obj["text"], timestamp=timestamp)


def read_posts(path: Path, report: IngestReport | None = None) -> Iterator[RawPost]:
    """Yield posts from a JSONL file; unparseable lines are counted and skipped."""
    for lineno, line in enumerate(read_text_lines(path), start=1):
        if not line.strip():
            continue
        if report is not None:
            report.lines_read += 1
        try:
            yield _parse_post(line)
        except (ValueError, KeyError, TypeError):
            if report is not None:
                report.parse_errors += 1
                report.bad_lines.append(lineno)
            logger.debug("Skipping malformed post at %s:%d", path, lineno)


def load_stopwords(path: Path | None) -> frozenset[str]:
    """One stopword per line, normalized like corpus words. None = no stopwords."""
    if path is None:
        return frozenset()
    words = {normalize_word(line.strip()) for line in read_text_lines(path)}
    words.discard("")
    logger.debug("Loaded %d stopwords from %s", len(words), path)
    return frozenset(words)
