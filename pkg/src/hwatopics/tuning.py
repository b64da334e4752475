"""Grid search over the keyword rate h and the CIMAWA damping factor delta.

Each grid point runs detection and keyword evaluation on the same windows and
vectors. Word statistics do not depend on h or delta, so they are computed
once for the whole grid.
"""

from __future__ import annotations

import logging
from dataclasses import replace
from typing import Iterable, Mapping, Sequence

import pandas as pd

from hwatopics.config import Config
from hwatopics.corpus import Window
from hwatopics.embedding import VectorStore
from hwatopics.evaluation import GroundTruthTopic, keyword_metrics
from hwatopics.pipeline import rate_windows, run_detection

logger = logging.getLogger(__name__)

COLUMNS = ["h", "delta", "keyword_f1"]


def tune(
    windows: Sequence[Window],
    store: VectorStore,
    gt: Mapping[int, Sequence[GroundTruthTopic]],
    config: Config,
    h_grid: Iterable[float] | None = None,
    delta_grid: Iterable[float] | None = None,
) -> pd.DataFrame:
    """Keyword F1 for every (h, delta); rows sorted by descending F1.

    Ties keep grid order (h ascending, then delta ascending).
    """
    h_values = list(config.h_grid if h_grid is None else h_grid)
    delta_values = list(config.delta_grid if delta_grid is None else delta_grid)
    stats = rate_windows(windows, config.log_base)

    rows = []
    for h in h_values:
        for delta in delta_values:
            point = replace(config, h=h, delta=delta).ensure_valid()
            results = run_detection(windows, store, point, stats=stats)
            scores = keyword_metrics(
                results.topics_by_window(), gt, point.keyword_m, point.match_threshold
            )
            rows.append({"h": h, "delta": delta, "keyword_f1": scores.f1})
            logger.debug("h=%s delta=%s keyword F1=%.6f", h, delta, scores.f1)

    frame = pd.DataFrame(rows, columns=COLUMNS)
    frame = frame.sort_values("keyword_f1", ascending=False, kind="mergesort")
    frame = frame.reset_index(drop=True)
    if len(frame):
        best = frame.iloc[0]
        logger.info(
            "Best of %d grid points: h=%s delta=%s keyword F1=%.6f",
            len(frame), best["h"], best["delta"], best["keyword_f1"],
        )
    return frame
