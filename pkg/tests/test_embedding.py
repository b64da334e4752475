"""Tests for the vector loader, pattern embeddings and cosine distances."""

import numpy as np
import pytest

from hwatopics.embedding import (
    PatternEmbedding,
    VectorStore,
    distance_matrix,
    embed_pattern,
    load_vectors,
)
from hwatopics.errors import InputError, InvariantViolation
from hwatopics.patterns import Pattern


def pattern(*words):
    return Pattern(words=tuple(words), seed=words[0])


def embedding(vector, covered=1):
    return PatternEmbedding(
        pattern=pattern("x"), vector=np.asarray(vector, dtype=float), covered=covered
    )


@pytest.fixture
def store():
    return VectorStore.from_mapping(
        {"a": [1.0, 0.0, 0.0], "b": [0.0, 1.0, 0.0], "c": [0.0, 0.0, 2.0]}
    )


# ---------------------------------------------------------------------------
# Loader
# ---------------------------------------------------------------------------


class TestLoadVectors:
    def test_minimal_file(self, tmp_path):
        path = tmp_path / "v.vec"
        path.write_text("2 3\na 1 0 0\nb 0 1 0\n", encoding="utf-8")
        store = load_vectors(path)
        assert store.dimension == 3
        assert len(store) == 2
        np.testing.assert_array_equal(store.get("b"), [0.0, 1.0, 0.0])

    def test_wrong_arity_skipped(self, tmp_path):
        path = tmp_path / "v.vec"
        path.write_text("3 3\na 1 0 0\nb 0 1\nc 0 0 x\n", encoding="utf-8")
        store = load_vectors(path)
        assert len(store) == 1
        assert store.malformed == 2

    def test_non_finite_skipped(self, tmp_path):
        path = tmp_path / "v.vec"
        path.write_text("4 2\na 1 0\nb nan 1\nc inf 0\nd 0 -inf\n", encoding="utf-8")
        store = load_vectors(path)
        assert len(store) == 1
        assert store.malformed == 3
        assert store.get("b") is None
        assert np.isfinite(store.matrix).all()

    def test_first_duplicate_wins(self, tmp_path):
        path = tmp_path / "v.vec"
        path.write_text("2 2\nFire 1 0\nfire 0 1\n", encoding="utf-8")
        store = load_vectors(path)
        np.testing.assert_array_equal(store.get("fire"), [1.0, 0.0])

    def test_lookup_normalized(self, tmp_path):
        path = tmp_path / "v.vec"
        path.write_text("1 2\nGoal 1 2\n", encoding="utf-8")
        assert load_vectors(path).get("GOAL") is not None

    def test_missing_file(self, tmp_path):
        with pytest.raises(InputError):
            load_vectors(tmp_path / "none.vec")

    def test_empty_file(self, tmp_path):
        path = tmp_path / "v.vec"
        path.write_text("", encoding="utf-8")
        with pytest.raises(InputError):
            load_vectors(path)

    def test_bad_header(self, tmp_path):
        path = tmp_path / "v.vec"
        path.write_text("a 1 0\n", encoding="utf-8")
        with pytest.raises(InputError):
            load_vectors(path)


# ---------------------------------------------------------------------------
# Pattern embeddings
# ---------------------------------------------------------------------------


class TestEmbedPattern:
    def test_mean(self, store):
        e = embed_pattern(pattern("a", "b"), store)
        np.testing.assert_allclose(e.vector, [0.5, 0.5, 0.0])
        assert e.covered == 2
        assert not e.degenerate

    def test_single_word(self, store):
        np.testing.assert_allclose(embed_pattern(pattern("c"), store).vector, [0, 0, 2])

    def test_oov_skipped(self, store):
        e = embed_pattern(pattern("a", "zzz"), store)
        np.testing.assert_allclose(e.vector, [1.0, 0.0, 0.0])
        assert e.oov == ("zzz",)

    def test_all_oov(self, store):
        e = embed_pattern(pattern("p", "q"), store)
        assert e.covered == 0
        assert e.degenerate
        np.testing.assert_array_equal(e.vector, np.zeros(3))

    def test_permutation_invariant(self, store):
        one = embed_pattern(pattern("a", "b", "c"), store).vector
        two = embed_pattern(pattern("c", "a", "b"), store).vector
        np.testing.assert_allclose(one, two)


# ---------------------------------------------------------------------------
# Distances
# ---------------------------------------------------------------------------


class TestDistanceMatrix:
    def test_identical(self):
        D = distance_matrix([embedding([1, 2, 3]), embedding([1, 2, 3])]).values
        assert D[0, 1] == pytest.approx(0.0, abs=1e-12)

    def test_orthogonal(self):
        D = distance_matrix([embedding([1, 0]), embedding([0, 5])]).values
        assert D[0, 1] == pytest.approx(1.0)

    def test_opposite(self):
        D = distance_matrix([embedding([1, 1]), embedding([-2, -2])]).values
        assert D[0, 1] == pytest.approx(2.0)

    def test_degenerate_pairs(self):
        result = distance_matrix(
            [embedding([0, 0], covered=0), embedding([0, 0], covered=0), embedding([1, 0])]
        )
        assert result.values[0, 1] == 1.0
        assert result.values[0, 2] == 1.0
        assert result.values[0, 0] == 0.0
        assert result.flagged == ((0, 1), (0, 2), (1, 2))

    def test_dimension_mismatch(self):
        with pytest.raises(InvariantViolation):
            distance_matrix([embedding([1, 0]), embedding([1, 0, 0])])

    def test_empty(self):
        assert distance_matrix([]).values.shape == (0, 0)

    def test_properties_random(self):
        rng = np.random.default_rng(5)
        vectors = rng.normal(size=(30, 8))
        D = distance_matrix([embedding(v) for v in vectors]).values
        assert np.all(D >= 0) and np.all(D <= 2)
        np.testing.assert_array_equal(D, D.T)
        np.testing.assert_array_equal(np.diag(D), 0.0)

        scaled = vectors * rng.uniform(0.1, 10, size=(30, 1))
        D2 = distance_matrix([embedding(v) for v in scaled]).values
        np.testing.assert_allclose(D, D2, atol=1e-12)
