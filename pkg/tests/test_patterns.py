"""Tests for pattern extraction and subset merging."""

import random

import pytest

from hwatopics.patterns import Pattern, extract_all, extract_pattern, merge_subsets


def pattern(*words, seed=None, score=0.0):
    return Pattern(words=tuple(words), seed=seed or words[0], score=score)


def random_map(rng, n_words):
    words = [f"k{i:02d}" for i in range(n_words)]
    M = {}
    for w in words:
        others = [x for x in words if x != w]
        M[w] = set(rng.sample(others, rng.randint(0, min(3, len(others)))))
    return words, M


class TestExtractPattern:
    def test_mutual_pair(self):
        p = extract_pattern("a", {"a": {"b"}, "b": {"a"}})
        assert p.words == ("a", "b")
        assert p.seed == "a"

    def test_isolated_seed(self):
        assert extract_pattern("a", {"a": set()}).words == ("a",)

    def test_seed_missing_from_map(self):
        assert extract_pattern("a", {}).words == ("a",)

    def test_fifo_order(self):
        M = {"a": {"b", "c"}, "b": {"c"}, "c": {"a"}}
        assert extract_pattern("a", M).words == ("a", "b", "c")

    def test_breadth_first(self):
        M = {"a": {"b", "c"}, "b": {"d"}, "c": {"e"}, "d": set(), "e": set()}
        assert extract_pattern("a", M).words == ("a", "b", "c", "d", "e")

    def test_score_is_mean_rating(self):
        p = extract_pattern("a", {"a": {"b"}}, kr={"a": 1.0, "b": 3.0})
        assert p.score == pytest.approx(2.0)

    def test_deterministic(self):
        rng = random.Random(3)
        words, M = random_map(rng, 15)
        for w in words:
            assert extract_pattern(w, M) == extract_pattern(w, M)

    def test_closed_under_m(self):
        rng = random.Random(11)
        words, M = random_map(rng, 15)
        for w in words:
            members = set(extract_pattern(w, M).words)
            for c in members:
                assert M[c] <= members


class TestPatternType:
    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            Pattern(words=(), seed="a")

    def test_rejects_duplicates(self):
        with pytest.raises(ValueError):
            Pattern(words=("a", "a"), seed="a")

    def test_seed_must_be_member(self):
        with pytest.raises(ValueError):
            Pattern(words=("a",), seed="b")


class TestMergeSubsets:
    def test_strict_subset(self):
        merged = merge_subsets([pattern("a", "b"), pattern("a", "b", "c")])
        assert [p.word_set for p in merged] == [{"a", "b", "c"}]

    def test_incomparable(self):
        merged = merge_subsets([pattern("a", "b"), pattern("b", "c")])
        assert len(merged) == 2

    def test_duplicates_keep_smallest_seed(self):
        merged = merge_subsets([pattern("a", seed="a"), pattern("a", seed="a")])
        assert len(merged) == 1
        merged = merge_subsets([pattern("b", "a", seed="b"), pattern("a", "b", seed="a")])
        assert [p.seed for p in merged] == ["a"]

    def test_plasco_example(self):
        first = pattern("fire", "plasco", "building", "burn")
        second = pattern("plasco", "fire", "building", "burn", "incident")
        merged = merge_subsets([first, second])
        assert merged.patterns == (second,)

    def test_survivors_keep_input_order(self):
        patterns = [pattern("x"), pattern("c", "d"), pattern("a", "b", "c", "d")]
        merged = merge_subsets(patterns)
        assert [p.words for p in merged] == [("x",), ("a", "b", "c", "d")]

    def test_empty(self):
        assert len(merge_subsets([])) == 0


class TestExtractAll:
    def test_mutual_pair_merged(self):
        result = extract_all(["a", "b"], {"a": {"b"}, "b": {"a"}})
        assert len(result) == 1
        assert result[0].word_set == {"a", "b"}
        assert result[0].seed == "a"

    def test_disjoint_patterns_kept(self):
        M = {"a": {"b"}, "b": {"a"}, "c": {"d"}, "d": {"c"}}
        assert len(extract_all(["a", "b", "c", "d"], M, window_index=3)) == 2

    def test_window_index_carried(self):
        assert extract_all(["a"], {}, window_index=7).window_index == 7

    def test_antichain_on_random_maps(self):
        rng = random.Random(2024)
        for _ in range(500):
            words, M = random_map(rng, rng.randint(1, 20))
            result = extract_all(words, M)
            sets = [p.word_set for p in result]
            for i, s in enumerate(sets):
                for j, t in enumerate(sets):
                    if i != j:
                        assert not s <= t
            members = set().union(*sets)
            assert members <= set(words)
