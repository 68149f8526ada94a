import math

import numpy as np
import pytest

from alignkit import (
    EmbeddedSentencePair,
    EmbeddingAligner,
    ExtractorConfig,
    Subword,
    aggregate_to_words,
    extract_alignment,
    extract_subword_links,
    similarity_matrix,
)

from oracles import naive_softmax_links


def embed_pair(src_vectors, tgt_vectors, src_words=None, tgt_words=None, layer=8):
    """src_vectors: list of np vectors; *_words: word_index per subword."""
    dim = len(src_vectors[0])
    src_words = src_words or list(range(len(src_vectors)))
    tgt_words = tgt_words or list(range(len(tgt_vectors)))
    return EmbeddedSentencePair(
        layer,
        dim,
        tuple(Subword(w, f"s{k}", np.asarray(v, dtype=float)) for k, (w, v) in enumerate(zip(src_words, src_vectors))),
        tuple(Subword(w, f"t{k}", np.asarray(v, dtype=float)) for k, (w, v) in enumerate(zip(tgt_words, tgt_vectors))),
    )


def one_hot(k, dim):
    v = np.zeros(dim)
    v[k] = 1.0
    return v


class TestSimilarityMatrix:
    def test_identical_unit_vectors(self):
        pair = embed_pair([one_hot(0, 3)], [one_hot(0, 3)])
        assert similarity_matrix(pair)[0, 0] == pytest.approx(1.0, abs=1e-12)

    def test_orthogonal_one_hots(self):
        pair = embed_pair([one_hot(0, 3)], [one_hot(1, 3)])
        assert similarity_matrix(pair)[0, 0] == pytest.approx(0.0, abs=1e-12)

    def test_hand_computed_cosine(self):
        pair = embed_pair([[1.0, 1.0, 0.0]], [[1.0, 0.0, 0.0]])
        assert similarity_matrix(pair)[0, 0] == pytest.approx(1 / math.sqrt(2), abs=1e-12)

    def test_zero_vector_names_subword(self):
        pair = embed_pair([[0.0, 0.0]], [[1.0, 0.0]])
        with pytest.raises(ValueError, match="source subword 0"):
            similarity_matrix(pair)

    def test_values_within_unit_interval(self):
        rng = np.random.default_rng(3)
        pair = embed_pair(rng.normal(size=(5, 8)), rng.normal(size=(7, 8)))
        c = similarity_matrix(pair)
        assert c.shape == (5, 7)
        assert np.all(c >= -1.0) and np.all(c <= 1.0)


class TestExtractSubwordLinks:
    def test_single_cell_always_links(self):
        for threshold in (0.001, 0.5, 0.9):
            got = extract_subword_links(
                np.array([[0.2]]), ExtractorConfig(threshold=threshold)
            )
            assert got == {(0, 0)}

    def test_identity_block_recovers_diagonal(self):
        c = np.eye(3)
        got = extract_subword_links(c, ExtractorConfig(threshold=0.5, temperature=1.0))
        assert got == {(0, 0), (1, 1), (2, 2)}
        # softmax values are e/(e+2) on the diagonal, 1/(e+2) off it
        assert math.e / (math.e + 2) > 0.5 > 1 / (math.e + 2)

    def test_threshold_monotonicity_random(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            c = rng.uniform(-1, 1, size=(rng.integers(1, 6), rng.integers(1, 6)))
            lo = extract_subword_links(c, ExtractorConfig(threshold=0.05))
            hi = extract_subword_links(c, ExtractorConfig(threshold=0.3))
            assert hi <= lo

    def test_matches_naive_reference(self):
        rng = np.random.default_rng(23)
        for _ in range(25):
            c = rng.uniform(-1, 1, size=(rng.integers(1, 5), rng.integers(1, 5)))
            for tau in (1.0, 0.25):
                got = extract_subword_links(c, ExtractorConfig(threshold=0.2, temperature=tau))
                want = naive_softmax_links(c.tolist(), 0.2, tau)
                assert got == want

    def test_sharp_temperature_approaches_argmax(self):
        c = np.array([[0.9, 0.1], [0.2, 0.8]])
        got = extract_subword_links(c, ExtractorConfig(threshold=0.5, temperature=0.01))
        assert got == {(0, 0), (1, 1)}

    def test_config_validation(self):
        with pytest.raises(ValueError):
            ExtractorConfig(threshold=0.0)
        with pytest.raises(ValueError):
            ExtractorConfig(threshold=1.0)
        with pytest.raises(ValueError):
            ExtractorConfig(temperature=0.0)
        with pytest.raises(ValueError):
            ExtractorConfig(aggregation="most")


class TestAggregateToWords:
    def test_identity_when_one_subword_per_word(self):
        pair = embed_pair([one_hot(0, 4), one_hot(1, 4)], [one_hot(0, 4), one_hot(1, 4)])
        out = aggregate_to_words({(0, 0), (1, 1)}, pair)
        assert out.sure == {(0, 0), (1, 1)}

    def test_any_vs_all_contrast(self):
        # source word 0 spans subwords {0, 1}; only subword pair (1, 0) linked
        pair = embed_pair(
            [one_hot(0, 4), one_hot(1, 4)], [one_hot(1, 4)], src_words=[0, 0], tgt_words=[0]
        )
        assert aggregate_to_words({(1, 0)}, pair, "any").sure == {(0, 0)}
        assert aggregate_to_words({(1, 0)}, pair, "all").sure == set()
        assert aggregate_to_words({(0, 0), (1, 0)}, pair, "all").sure == {(0, 0)}

    def test_empty_links(self):
        pair = embed_pair([one_hot(0, 4)], [one_hot(0, 4)])
        assert aggregate_to_words(set(), pair).sure == set()

    def test_out_of_range_rejected(self):
        pair = embed_pair([one_hot(0, 4)], [one_hot(0, 4)])
        with pytest.raises(ValueError, match="out of range"):
            aggregate_to_words({(0, 5)}, pair)


class TestInvariances:
    def test_positive_scale_invariance(self):
        rng = np.random.default_rng(17)
        src = rng.normal(size=(6, 5))
        tgt = rng.normal(size=(4, 5))
        base = extract_alignment(embed_pair(src, tgt))
        scaled_src = src * rng.uniform(0.1, 40.0, size=(6, 1))
        scaled_tgt = tgt * rng.uniform(0.1, 40.0, size=(4, 1))
        scaled = extract_alignment(embed_pair(scaled_src, scaled_tgt))
        assert scaled.sure == base.sure

    def test_transpose_symmetry(self):
        rng = np.random.default_rng(29)
        for _ in range(20):
            src = rng.normal(size=(rng.integers(1, 5), 6))
            tgt = rng.normal(size=(rng.integers(1, 5), 6))
            fwd = extract_alignment(embed_pair(src, tgt))
            rev = extract_alignment(embed_pair(tgt, src))
            assert {(j, i) for i, j in rev.sure} == fwd.sure

    def test_links_within_word_bounds(self):
        rng = np.random.default_rng(31)
        pair = embed_pair(
            rng.normal(size=(4, 6)),
            rng.normal(size=(5, 6)),
            src_words=[0, 0, 1, 2],
            tgt_words=[0, 1, 1, 2, 3],
        )
        out = extract_alignment(pair)
        for i, j in out.sure:
            assert 0 <= i < 3 and 0 <= j < 4


class TestEmbeddingAligner:
    def test_predict_over_pairs(self):
        pairs = [
            embed_pair([one_hot(0, 3)], [one_hot(0, 3)]),
            embed_pair([one_hot(1, 3)], [one_hot(1, 3)]),
        ]
        out = EmbeddingAligner(threshold=0.5).fit().predict(pairs)
        assert len(out) == 2
        assert out[0].sure == {(0, 0)}

    def test_expected_layer_mismatch(self):
        pair = embed_pair([one_hot(0, 3)], [one_hot(0, 3)], layer=8)
        aligner = EmbeddingAligner(expected_layer=9).fit()
        with pytest.raises(ValueError, match="layer 8"):
            aligner.predict([pair])

    def test_get_params(self):
        aligner = EmbeddingAligner(threshold=0.01, temperature=0.5)
        params = aligner.get_params()
        assert params["threshold"] == 0.01 and params["temperature"] == 0.5
