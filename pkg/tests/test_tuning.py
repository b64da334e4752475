"""Tests for the h x delta grid search."""

from dataclasses import replace

import pytest

from hwatopics.config import Config
from hwatopics.corpus import window
from hwatopics.embedding import VectorStore
from hwatopics.errors import ConfigError
from hwatopics.evaluation import keyword_metrics, parse_ground_truth
from hwatopics.pipeline import run_detection
from hwatopics.synthetic import planted_corpus, planted_vectors
from hwatopics.tuning import COLUMNS, tune


@pytest.fixture(scope="module")
def setup():
    corpus = planted_corpus()
    windows = window(corpus.posts, corpus.window_seconds, origin=corpus.origin,
                     stopwords=frozenset({"the"}))
    store = VectorStore.from_mapping(planted_vectors(corpus))
    gt = parse_ground_truth(corpus.ground_truth())
    return windows, store, gt


@pytest.fixture(scope="module")
def grid(setup):
    windows, store, gt = setup
    return tune(windows, store, gt, Config.defaults())


class TestTune:
    def test_full_default_grid(self, grid):
        assert list(grid.columns) == COLUMNS
        assert len(grid) == 100
        assert set(grid["h"]) == {5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0, 45.0, 50.0}

    def test_sorted_descending(self, grid):
        values = list(grid["keyword_f1"])
        assert values == sorted(values, reverse=True)
        assert all(0.0 <= v <= 1.0 for v in values)

    def test_best_row_matches_evaluation(self, setup, grid):
        windows, store, gt = setup
        best = grid.iloc[0]
        config = replace(Config.defaults(), h=best["h"], delta=best["delta"])
        results = run_detection(windows, store, config)
        scores = keyword_metrics(results.topics_by_window(), gt, config.keyword_m)
        assert scores.f1 == best["keyword_f1"]

    def test_ties_keep_grid_order(self, setup):
        windows, store, gt = setup
        frame = tune(windows, store, gt, Config(), h_grid=[30.0], delta_grid=[0.5, 0.1])
        assert list(frame["delta"]) == [0.5, 0.1]
        assert frame["keyword_f1"].nunique() == 1

    def test_explicit_grids(self, setup):
        windows, store, gt = setup
        frame = tune(windows, store, gt, Config(), h_grid=[10.0, 30.0], delta_grid=[1.0])
        assert len(frame) == 2

    def test_invalid_grid_point(self, setup):
        windows, store, gt = setup
        with pytest.raises(ConfigError):
            tune(windows, store, gt, Config(), h_grid=[0.0], delta_grid=[0.5])
