"""Read detection output back into typed records.

`hwatopics detect` writes one JSON object per window. `load_topic_records`
parses that file so a previous run can be evaluated without re-running
detection.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from hwatopics.corpus import read_text_lines
from hwatopics.errors import InputError


@dataclass(frozen=True)
class TopicRecord:
    rank: int
    score: float
    keywords: tuple[str, ...]
    source: str


@dataclass(frozen=True)
class WindowRecord:
    window: int
    start: int
    end: int
    topics: tuple[TopicRecord, ...]

    @property
    def keyword_lists(self) -> list[tuple[str, ...]]:
        return [t.keywords for t in self.topics]


def _parse_record(obj: dict) -> WindowRecord:
    topics = tuple(
        TopicRecord(
            rank=int(t["rank"]),
            score=float(t["score"]),
            keywords=tuple(t["keywords"]),
            source=str(t["source"]),
        )
        for t in obj["topics"]
    )
    return WindowRecord(
        window=int(obj["window"]),
        start=int(obj["start"]),
        end=int(obj["end"]),
        topics=tuple(sorted(topics, key=lambda t: t.rank)),
    )


def load_topic_records(path: Path) -> list[WindowRecord]:
    """Parse a detect JSONL file; any malformed line is an InputError."""
    records = []
    for lineno, line in enumerate(read_text_lines(path), start=1):
        if not line.strip():
            continue
        try:
            records.append(_parse_record(json.loads(line)))
        except (ValueError, KeyError, TypeError) as exc:
            raise InputError(f"{path}:{lineno}: not a topic record ({exc})") from exc
    return records


def topics_by_window(records: list[WindowRecord]) -> dict[int, list[tuple[str, ...]]]:
    """window index -> ranked keyword lists, the shape evaluation consumes."""
    return {r.window: r.keyword_lists for r in records}
