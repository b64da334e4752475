"""Topic and keyword evaluation against ground truth.

Topic precision is the share of extracted topics matching some ground-truth
(GT) topic; topic recall is the share of GT topics matched by some extracted
topic. Window metrics are averaged over windows that carry GT.

A topic matches a GT topic when it contains every required word and at least
ceil(threshold * |optional|) optional words.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np
import pandas as pd

from hwatopics.corpus import normalize_word
from hwatopics.errors import GroundTruthError, InputError

logger = logging.getLogger(__name__)

# Ranked keyword lists of one window, best topic first.
WindowTopics = Sequence[Sequence[str]]


@dataclass(frozen=True)
class GroundTruthTopic:
    label: str
    required: frozenset[str]
    optional: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        if not self.required:
            raise GroundTruthError(f"GT topic {self.label!r} has no required words")
        overlap = self.required & self.optional
        if overlap:
            raise GroundTruthError(
                f"GT topic {self.label!r} lists {sorted(overlap)} as both "
                "required and optional"
            )

    @property
    def vocabulary(self) -> frozenset[str]:
        return self.required | self.optional


def _words(values: object, where: str) -> frozenset[str]:
    if not isinstance(values, list) or not all(isinstance(v, str) for v in values):
        raise GroundTruthError(f"{where} must be a list of strings")
    return frozenset(normalize_word(v) for v in values)


def parse_ground_truth(data: object) -> dict[int, tuple[GroundTruthTopic, ...]]:
    """Validate the GT document and map window index -> GT topics."""
    if not isinstance(data, dict) or not isinstance(data.get("windows"), list):
        raise GroundTruthError("ground truth must be an object with a 'windows' list")
    gt: dict[int, tuple[GroundTruthTopic, ...]] = {}
    for w, entry in enumerate(data["windows"]):
        try:
            index = entry["index"]
            raw_topics = entry["topics"]
        except (KeyError, TypeError) as exc:
            raise GroundTruthError(f"windows[{w}] needs 'index' and 'topics'") from exc
        if isinstance(index, bool) or not isinstance(index, int) or index < 0:
            raise GroundTruthError(f"windows[{w}].index must be a non-negative integer")
        if index in gt:
            raise GroundTruthError(f"window {index} listed twice")
        if not isinstance(raw_topics, list):
            raise GroundTruthError(f"windows[{w}].topics must be a list")
        topics = []
        for t, topic in enumerate(raw_topics):
            where = f"windows[{w}].topics[{t}]"
            if not isinstance(topic, dict):
                raise GroundTruthError(f"{where} must be an object")
            topics.append(
                GroundTruthTopic(
                    label=str(topic.get("label", f"{index}.{t}")),
                    required=_words(topic.get("required"), f"{where}.required"),
                    optional=_words(topic.get("optional", []), f"{where}.optional"),
                )
            )
        gt[index] = tuple(topics)
    return dict(sorted(gt.items()))


def load_ground_truth(path: Path) -> dict[int, tuple[GroundTruthTopic, ...]]:
    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    except FileNotFoundError as exc:
        raise InputError(f"Ground-truth file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise GroundTruthError(f"{path} is not valid JSON: {exc}") from exc
    gt = parse_ground_truth(data)
    logger.info(
        "Loaded %d GT topics over %d windows from %s",
        sum(len(t) for t in gt.values()), len(gt), path,
    )
    return gt


# ---------------------------------------------------------------------------
# Matching and metrics
# ---------------------------------------------------------------------------


def match(keywords: Iterable[str], gt: GroundTruthTopic, threshold: float = 0.0) -> bool:
    words = set(keywords)
    if not gt.required <= words:
        return False
    needed = math.ceil(round(threshold * len(gt.optional), 9))
    return len(words & gt.optional) >= needed


def f1_score(precision: float, recall: float) -> float:
    """Harmonic mean; 0 when both are 0."""
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


@dataclass(frozen=True)
class Scores:
    precision: float
    recall: float
    f1: float

    @classmethod
    def of(cls, precision: float, recall: float) -> Scores:
        return cls(precision, recall, f1_score(precision, recall))

    def to_dict(self) -> dict:
        return {"precision": self.precision, "recall": self.recall, "f1": self.f1}


def matched_pairs(
    topics: WindowTopics, gt: Sequence[GroundTruthTopic], threshold: float = 0.0
) -> list[tuple[int, int]]:
    """(topic position, GT position) for every matching pair."""
    return [
        (t, g)
        for t, words in enumerate(topics)
        for g, gt_topic in enumerate(gt)
        if match(words, gt_topic, threshold)
    ]


def topic_metrics(
    topics: WindowTopics,
    gt: Sequence[GroundTruthTopic],
    k: int | None = None,
    threshold: float = 0.0,
) -> Scores:
    """Topic precision, recall and F1 for one window.

    Topics are truncated to the first k when k is set. Precision is 0 with no
    extracted topics; recall is 0 with no GT topics.
    """
    if k is not None:
        topics = topics[:k]
    pairs = matched_pairs(topics, gt, threshold)
    precision = len({t for t, _ in pairs}) / len(topics) if topics else 0.0
    recall = len({g for _, g in pairs}) / len(gt) if gt else 0.0
    return Scores.of(precision, recall)


def _gt_windows(
    gt_by_window: Mapping[int, Sequence[GroundTruthTopic]],
) -> list[int]:
    return [w for w, topics in sorted(gt_by_window.items()) if topics]


def topk_recall_curve(
    topics_by_window: Mapping[int, WindowTopics],
    gt_by_window: Mapping[int, Sequence[GroundTruthTopic]],
    ks: Iterable[int] = range(2, 21, 2),
    threshold: float = 0.0,
) -> dict[int, float]:
    """k -> mean topic recall over GT-bearing windows at cutoff k."""
    windows = _gt_windows(gt_by_window)
    curve = {}
    for k in ks:
        recalls = [
            topic_metrics(topics_by_window.get(w, ()), gt_by_window[w], k, threshold).recall
            for w in windows
        ]
        curve[k] = float(np.mean(recalls)) if recalls else 0.0
    return curve


def keyword_metrics(
    topics_by_window: Mapping[int, WindowTopics],
    gt_by_window: Mapping[int, Sequence[GroundTruthTopic]],
    m: int = 2,
    threshold: float = 0.0,
) -> Scores:
    """Top-m keyword precision, recall and F1 pooled over all GT windows.

    Precision: share of the top-m keywords of matched (topic, GT) pairs that
    belong to the GT topic's words, over m slots per pair. Recall: share of
    all GT required words found in the top-m of some topic matching that GT
    topic.
    """
    hits = pairs = found = required = 0
    for w in _gt_windows(gt_by_window):
        topics = topics_by_window.get(w, ())
        gt = gt_by_window[w]
        covered: list[set[str]] = [set() for _ in gt]
        for t, g in matched_pairs(topics, gt, threshold):
            top = set(topics[t][:m])
            hits += len(top & gt[g].vocabulary)
            pairs += 1
            covered[g] |= top
        for g, gt_topic in enumerate(gt):
            required += len(gt_topic.required)
            found += len(gt_topic.required & covered[g])
    precision = hits / (m * pairs) if pairs else 0.0
    recall = found / required if required else 0.0
    return Scores.of(precision, recall)


# ---------------------------------------------------------------------------
# Report
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WindowEval:
    window: int
    n_topics: int
    n_gt: int
    scores: Scores
    matches: tuple[tuple[int, str], ...]

    def to_dict(self) -> dict:
        return {
            "window": self.window,
            "n_topics": self.n_topics,
            "n_gt": self.n_gt,
            **self.scores.to_dict(),
            "matches": [{"rank": r, "label": label} for r, label in self.matches],
        }


@dataclass(frozen=True)
class EvalReport:
    topic: Scores
    keyword: Scores
    topk_recall: dict[int, float]
    windows: tuple[WindowEval, ...] = ()
    keyword_m: int = 2
    match_threshold: float = 0.0
    missing_windows: tuple[int, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return {
            "topic_precision": self.topic.precision,
            "topic_recall": self.topic.recall,
            "topic_f1": self.topic.f1,
            "keyword_m": self.keyword_m,
            "keyword_precision": self.keyword.precision,
            "keyword_recall": self.keyword.recall,
            "keyword_f1": self.keyword.f1,
            "match_threshold": self.match_threshold,
            "topk_recall": {str(k): v for k, v in self.topk_recall.items()},
            "missing_windows": list(self.missing_windows),
            "windows": [w.to_dict() for w in self.windows],
        }

    def curve_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {"k": list(self.topk_recall), "recall": list(self.topk_recall.values())}
        )

    def windows_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [
                {"window": w.window, "n_topics": w.n_topics, "n_gt": w.n_gt,
                 **w.scores.to_dict()}
                for w in self.windows
            ],
            columns=["window", "n_topics", "n_gt", "precision", "recall", "f1"],
        )


def evaluate_windows(
    topics_by_window: Mapping[int, WindowTopics],
    gt_by_window: Mapping[int, Sequence[GroundTruthTopic]],
    ks: Iterable[int] = range(2, 21, 2),
    threshold: float = 0.0,
    m: int = 2,
) -> EvalReport:
    """Full report: per-window topic scores, their mean, top-k curve, keyword scores.

    GT windows missing from `topics_by_window` are scored with zero topics.
    """
    windows = _gt_windows(gt_by_window)
    missing = tuple(w for w in windows if w not in topics_by_window)
    if missing:
        logger.warning(
            "%d GT windows have no detected output; scored as empty: %s",
            len(missing), ", ".join(str(w) for w in missing[:10]),
        )

    rows = []
    for w in windows:
        topics = topics_by_window.get(w, ())
        gt = gt_by_window[w]
        matches = tuple(
            (t + 1, gt[g].label) for t, g in matched_pairs(topics, gt, threshold)
        )
        rows.append(
            WindowEval(
                window=w,
                n_topics=len(topics),
                n_gt=len(gt),
                scores=topic_metrics(topics, gt, threshold=threshold),
                matches=matches,
            )
        )

    if rows:
        topic = Scores.of(
            float(np.mean([r.scores.precision for r in rows])),
            float(np.mean([r.scores.recall for r in rows])),
        )
    else:
        topic = Scores(0.0, 0.0, 0.0)
    return EvalReport(
        topic=topic,
        keyword=keyword_metrics(topics_by_window, gt_by_window, m, threshold),
        topk_recall=topk_recall_curve(topics_by_window, gt_by_window, ks, threshold),
        windows=tuple(rows),
        keyword_m=m,
        match_threshold=threshold,
        missing_windows=missing,
    )
