"""Input validation helpers shared by the estimators and the CLI."""

from __future__ import annotations

from typing import Iterable

from .corpus import AlignmentSet, ParallelCorpus

__all__ = ["as_corpus", "as_alignment", "check_line_aligned"]


def as_corpus(X) -> ParallelCorpus:
    """Coerce estimator input to a ParallelCorpus.

    Accepts a ParallelCorpus or an iterable of (source tokens, target
    tokens) pairs.
    """
    if isinstance(X, ParallelCorpus):
        return X
    try:
        return ParallelCorpus.from_token_pairs(X)
    except (TypeError, ValueError) as exc:
        raise TypeError(
            "expected a ParallelCorpus or an iterable of (src_tokens, tgt_tokens) pairs"
        ) from exc


def as_alignment(y, n_pairs: int | None = None) -> AlignmentSet:
    """Coerce gold input to an AlignmentSet (sure-only when given raw links)."""
    if isinstance(y, AlignmentSet):
        out = y
    else:
        out = AlignmentSet.from_sure(y)
    if n_pairs is not None and len(out) != n_pairs:
        raise ValueError(f"alignment covers {len(out)} pairs, expected {n_pairs}")
    return out


def check_line_aligned(*collections: Iterable) -> None:
    """Raise unless all sized inputs have the same number of lines/pairs."""
    sizes = [len(c) for c in collections]  # type: ignore[arg-type]
    if len(set(sizes)) > 1:
        raise ValueError(f"inputs are not line-aligned: sizes {sizes}")
