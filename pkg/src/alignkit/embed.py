"""Extract word alignments from exported contextual subword embeddings.

For each pair, a cosine similarity matrix over subwords is softmaxed both
row-wise (source to target) and column-wise (target to source) at
temperature ``tau``; a subword pair is linked when both softmax
probabilities exceed the threshold ``c``.  Subword links are then
aggregated to word links through the subword-to-word index maps, with
either the ANY rule (one linked subword pair suffices) or the ALL rule
(every subword pair inside the word block must be linked).

Cosine normalization makes extraction invariant to positive rescaling of
any embedding vector, and the layer recorded in the EMB1 header is treated
as opaque metadata (optionally checked against ``expected_layer``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from sklearn.base import BaseEstimator

from .corpus import AlignmentSet, EmbeddedSentencePair, SentenceAlignment

__all__ = [
    "ExtractorConfig",
    "similarity_matrix",
    "extract_subword_links",
    "aggregate_to_words",
    "extract_alignment",
    "EmbeddingAligner",
]

Link = tuple[int, int]


@dataclass(frozen=True)
class ExtractorConfig:
    threshold: float = 0.001
    temperature: float = 1.0
    aggregation: str = "any"  # "any" or "all"
    expected_layer: int | None = None

    def __post_init__(self):
        if not 0.0 < self.threshold < 1.0:
            raise ValueError("threshold must be in (0, 1)")
        if self.temperature <= 0.0:
            raise ValueError("temperature must be > 0")
        if self.aggregation not in ("any", "all"):
            raise ValueError(f"unknown aggregation rule {self.aggregation!r}")


def similarity_matrix(pair: EmbeddedSentencePair) -> np.ndarray:
    """Cosine similarities between source and target subwords, in [-1, 1]."""
    a = np.stack([s.vector for s in pair.src_sub])
    b = np.stack([t.vector for t in pair.tgt_sub])
    for label, side, mat in (("source", pair.src_sub, a), ("target", pair.tgt_sub, b)):
        norms = np.linalg.norm(mat, axis=1)
        bad = np.nonzero(norms == 0.0)[0]
        if bad.size:
            k = int(bad[0])
            raise ValueError(f"zero vector for {label} subword {k} ({side[k].text!r})")
    a = a / np.linalg.norm(a, axis=1, keepdims=True)
    b = b / np.linalg.norm(b, axis=1, keepdims=True)
    return np.clip(a @ b.T, -1.0, 1.0)


def _softmax(x: np.ndarray, axis: int) -> np.ndarray:
    shifted = x - x.max(axis=axis, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=axis, keepdims=True)


def extract_subword_links(c_matrix: np.ndarray, config: ExtractorConfig) -> frozenset[Link]:
    """Bidirectionally thresholded subword links from a similarity matrix."""
    c_matrix = np.asarray(c_matrix, dtype=np.float64)
    if c_matrix.ndim != 2:
        raise ValueError("similarity matrix must be 2-dimensional")
    logits = c_matrix / config.temperature
    p_fwd = _softmax(logits, axis=1)
    p_rev = _softmax(logits, axis=0)
    keep = (p_fwd > config.threshold) & (p_rev > config.threshold)
    return frozenset((int(u), int(v)) for u, v in zip(*np.nonzero(keep)))


def aggregate_to_words(
    sub_links: Iterable[Link], pair: EmbeddedSentencePair, aggregation: str = "any"
) -> SentenceAlignment:
    """Lift subword links to word links under the ANY or ALL rule."""
    sub_links = set(sub_links)
    src_word = [s.word_index for s in pair.src_sub]
    tgt_word = [t.word_index for t in pair.tgt_sub]
    for u, v in sub_links:
        if not (0 <= u < len(src_word) and 0 <= v < len(tgt_word)):
            raise ValueError(f"subword link ({u},{v}) out of range")
    if aggregation == "any":
        words = {(src_word[u], tgt_word[v]) for u, v in sub_links}
        return SentenceAlignment.sure_only(words)
    if aggregation != "all":
        raise ValueError(f"unknown aggregation rule {aggregation!r}")
    linked: dict[Link, int] = {}
    for u, v in sub_links:
        key = (src_word[u], tgt_word[v])
        linked[key] = linked.get(key, 0) + 1
    src_count = np.bincount(src_word)
    tgt_count = np.bincount(tgt_word)
    words = {
        (i, j)
        for (i, j), hits in linked.items()
        if hits == int(src_count[i]) * int(tgt_count[j])
    }
    return SentenceAlignment.sure_only(words)


def extract_alignment(
    pair: EmbeddedSentencePair, config: ExtractorConfig | None = None
) -> SentenceAlignment:
    """Full per-pair extraction: similarity, thresholding, word aggregation."""
    config = config or ExtractorConfig()
    if config.expected_layer is not None and pair.layer != config.expected_layer:
        raise ValueError(
            f"embeddings are from layer {pair.layer}, expected {config.expected_layer}"
        )
    sub = extract_subword_links(similarity_matrix(pair), config)
    return aggregate_to_words(sub, pair, config.aggregation)


class EmbeddingAligner(BaseEstimator):
    """Similarity-threshold aligner over exported embeddings (stateless fit)."""

    def __init__(
        self,
        threshold: float = 0.001,
        temperature: float = 1.0,
        aggregation: str = "any",
        expected_layer: int | None = None,
    ):
        self.threshold = threshold
        self.temperature = temperature
        self.aggregation = aggregation
        self.expected_layer = expected_layer

    def _config(self) -> ExtractorConfig:
        return ExtractorConfig(
            threshold=self.threshold,
            temperature=self.temperature,
            aggregation=self.aggregation,
            expected_layer=self.expected_layer,
        )

    def fit(self, X=None, y=None):
        self._config()  # validate parameters
        return self

    def predict(self, X: Sequence[EmbeddedSentencePair]) -> AlignmentSet:
        config = self._config()
        return AlignmentSet(tuple(extract_alignment(p, config) for p in X))
