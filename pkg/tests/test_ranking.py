"""Tests for word statistics, keyword ratings and keyword selection."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hwatopics.corpus import Post, Window
from hwatopics.errors import InvariantViolation
from hwatopics.ranking import (
    WordStats,
    keyword_count,
    keyword_rating,
    rate_window,
    score,
    select_keywords,
    term_frequencies,
    utility,
)


def make_window(*posts, index=0):
    return Window(
        index=index,
        start=0,
        end=60,
        posts=tuple(
            Post(id=str(i), timestamp=0, counts=dict(counts))
            for i, counts in enumerate(posts)
        ),
    )


def stats_with(kr_by_word, tf=1):
    return {
        w: WordStats(word=w, tf=tf, df=1, score=kr, diff=0, utility=0.0, kr=kr)
        for w, kr in kr_by_word.items()
    }


# ---------------------------------------------------------------------------
# Term frequencies
# ---------------------------------------------------------------------------


class TestTermFrequencies:
    def test_hand_count(self):
        win = make_window({"a": 2, "b": 1}, {"a": 1, "c": 1})
        tfdf = term_frequencies(win)
        assert tfdf["a"] == (3, 2)
        assert tfdf["b"] == (1, 1)
        assert tfdf["c"] == (1, 1)

    def test_empty_window(self):
        assert term_frequencies(make_window()) == {}

    def test_single_post(self):
        assert term_frequencies(make_window({"a": 1})) == {"a": (1, 1)}

    def test_post_order_irrelevant(self):
        posts = [{"a": 2, "b": 1}, {"a": 1, "c": 3}, {"b": 1}]
        forward = rate_window(make_window(*posts))
        backward = rate_window(make_window(*reversed(posts)))
        assert forward == backward


# ---------------------------------------------------------------------------
# Score and utility
# ---------------------------------------------------------------------------


class TestScore:
    def test_hand_value(self):
        assert score(2, 2, 3) == pytest.approx(2 * math.log(1.5))
        assert score(2, 2, 3) == pytest.approx(0.8109, abs=1e-4)

    def test_word_in_every_post(self):
        assert score(17, 5, 5) == 0.0

    def test_single_post(self):
        assert score(1, 1, 1) == 0.0

    def test_df_above_batch(self):
        with pytest.raises(InvariantViolation):
            score(3, 4, 3)

    def test_log_base(self):
        assert score(2, 1, 4, log_base=2) == pytest.approx(4.0)


class TestUtility:
    def test_new_word(self):
        diff, u = utility(5, 0)
        assert diff == 5
        assert u == pytest.approx(5 * math.log(6))
        assert u == pytest.approx(8.958, abs=1e-3)

    def test_falling_word(self):
        assert utility(2, 7) == (-5, 0.0)

    def test_flat_word(self):
        assert utility(4, 4) == (0, 0.0)

    @settings(max_examples=200, deadline=None)
    @given(st.integers(0, 500), st.integers(0, 500), st.integers(1, 50))
    def test_monotone_in_tf_now(self, tf_now, tf_prev, step):
        assert utility(tf_now + step, tf_prev)[1] >= utility(tf_now, tf_prev)[1]


class TestKeywordRating:
    def test_from_score(self):
        assert keyword_rating(0.8109, 0.0) == pytest.approx(0.40545)

    def test_zero(self):
        assert keyword_rating(0.0, 0.0) == 0.0

    def test_mean(self):
        assert keyword_rating(2.0, 4.0) == 3.0


class TestRateWindow:
    def test_first_window_utility(self):
        stats = rate_window(make_window({"a": 2}, {"a": 1, "b": 1}, {"c": 1}))
        for s in stats.values():
            assert s.diff == s.tf > 0
            assert s.utility == pytest.approx(s.tf * math.log(s.tf + 1))

    def test_previous_tf_used(self):
        stats = rate_window(make_window({"a": 3}, {"b": 1}), prev_tf={"a": 1, "b": 4})
        assert stats["a"].diff == 2
        assert stats["a"].utility == pytest.approx(2 * math.log(4 / 2))
        assert stats["b"].utility == 0.0

    def test_brute_force_oracle(self):
        posts = [{"a": 2, "b": 1}, {"a": 1, "c": 1}, {"c": 2, "d": 1}, {"d": 1}]
        prev = {"a": 1, "d": 5}
        stats = rate_window(make_window(*posts), prev_tf=prev)
        n = len(posts)
        for w, s in stats.items():
            tf = sum(p.get(w, 0) for p in posts)
            df = sum(1 for p in posts if w in p)
            sc = tf * math.log(n / df)
            d = tf - prev.get(w, 0)
            u = d * math.log((tf + 1) / (prev.get(w, 0) + 1)) if d > 0 else 0.0
            assert (s.tf, s.df, s.diff) == (tf, df, d)
            assert s.kr == pytest.approx((sc + u) / 2, rel=1e-9)

    def test_invariants(self):
        stats = rate_window(make_window({"a": 1}, {"a": 1, "b": 2}, {"c": 1}))
        for s in stats.values():
            assert 1 <= s.df <= 3
            assert s.score >= 0
            assert s.kr == pytest.approx((s.score + s.utility) / 2)


# ---------------------------------------------------------------------------
# Keyword selection
# ---------------------------------------------------------------------------


class TestSelectKeywords:
    def test_thirty_percent_of_ten(self):
        stats = stats_with({f"w{i}": float(i + 1) for i in range(10)})
        keywords = select_keywords(stats, 30)
        assert keywords.keywords == ("w9", "w8", "w7")

    def test_count_rounding(self):
        assert keyword_count(30, 10) == 3
        assert keyword_count(30, 33) == 10
        assert keyword_count(5, 1) == 1
        assert keyword_count(100, 7) == 7

    def test_all_equal_ties_lexicographic(self):
        stats = stats_with({w: 1.0 for w in "jihgfedcba"})
        assert select_keywords(stats, 30).keywords == ("a", "b", "c")

    def test_tf_breaks_ties_before_word(self):
        stats = stats_with({"a": 1.0, "b": 1.0})
        stats["b"] = WordStats(word="b", tf=9, df=1, score=1.0, diff=0, utility=0.0, kr=1.0)
        assert select_keywords(stats, 50).keywords == ("b",)

    def test_zero_kr_excluded(self):
        stats = stats_with({"a": 2.0, "b": 0.0, "c": 0.0})
        assert select_keywords(stats, 100).keywords == ("a",)

    def test_empty_vocabulary(self):
        keywords = select_keywords({}, 30, window_index=4)
        assert len(keywords) == 0
        assert keywords.window_index == 4

    def test_bad_h(self):
        with pytest.raises(ValueError):
            select_keywords(stats_with({"a": 1.0}), 0)

    def test_members_outrank_non_members(self):
        stats = stats_with({f"w{i}": float(i % 7) + 0.5 for i in range(20)})
        keywords = select_keywords(stats, 25)
        lowest_in = min(stats[w].kr for w in keywords)
        assert all(s.kr <= lowest_in for w, s in stats.items() if w not in keywords)

    def test_nested_as_h_grows(self):
        stats = stats_with({f"w{i:02d}": float((i * 37) % 23) + 1 for i in range(40)})
        previous: set = set()
        for h in range(5, 55, 5):
            current = set(select_keywords(stats, h))
            assert previous <= current
            previous = current
