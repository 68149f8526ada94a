"""Project POS/NER tags across word alignments with type and token constraints.

The pipeline has three stages:

1. ``token_project``: every aligned target token collects the multiset of
   its source tokens' tags (the token-level votes).
2. ``build_type_dictionary``: per target word type, tally the winning
   token-level tag of each occurrence across the corpus and keep tags whose
   tally reaches ``beta`` times the type's maximum tally.  At ``beta = 0``
   every tag in the tagset qualifies, which makes the type constraint
   vacuous.
3. ``project``: emit one tag per token.  A token with no votes gets the
   fallback tag.  Otherwise, if its word type has a dictionary entry, the
   majority vote among dictionary-allowed tags wins, falling back to the
   dictionary's top tag when no vote is allowed; types without an entry
   take the plain vote majority.  All ties break by tag priority
   (descending source-corpus frequency by default, then lexicographic).

Sentences whose aligned-token fraction falls below ``min_coverage`` are
dropped (reported, not fatal), and NER outputs get a BIO repair pass that
turns orphan I-X tags into B-X.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from sklearn.base import BaseEstimator

from .corpus import (
    AlignmentSet,
    ParallelCorpus,
    TaggedCorpus,
    TaggedSentence,
    repair_bio,
)

__all__ = [
    "ProjectionConfig",
    "TypeDictionary",
    "ProjectionStats",
    "token_project",
    "build_type_dictionary",
    "project",
    "TagProjector",
]

_DEFAULT_FALLBACK = {"pos": "NOUN", "ner": "O"}


@dataclass(frozen=True)
class ProjectionConfig:
    task: str = "pos"
    type_threshold: float = 0.3   # beta
    min_coverage: float = 0.8     # rho
    fallback_tag: str | None = None  # None resolves to NOUN (pos) / O (ner)
    tag_priority: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.task not in ("pos", "ner"):
            raise ValueError(f"unknown task {self.task!r}")
        if not 0.0 <= self.type_threshold <= 1.0:
            raise ValueError("type_threshold must be in [0, 1]")
        if not 0.0 <= self.min_coverage <= 1.0:
            raise ValueError("min_coverage must be in [0, 1]")

    def resolve_fallback(self, tagset: frozenset[str]) -> str:
        tag = self.fallback_tag or _DEFAULT_FALLBACK[self.task]
        if tag not in tagset:
            raise ValueError(
                f"fallback tag {tag!r} is not in the source tagset; set fallback_tag"
            )
        return tag


@dataclass(frozen=True)
class TypeDictionary:
    """Allowed tags (with tally counts) per target word type."""

    entries: Mapping[str, Mapping[str, int]]  # type -> tag -> tally of wins
    allowed: Mapping[str, frozenset[str]]     # type -> tags passing the threshold

    def __contains__(self, word: str) -> bool:
        return word in self.allowed

    def __len__(self) -> int:
        return len(self.allowed)


@dataclass
class ProjectionStats:
    sentences_kept: int = 0
    sentences_dropped: int = 0
    total_tokens: int = 0
    covered_tokens: int = 0
    kept_ids: list[int] = field(default_factory=list)

    @property
    def token_coverage(self) -> float:
        return self.covered_tokens / self.total_tokens if self.total_tokens else 0.0

    def to_json(self) -> str:
        payload = {
            "sentences_kept": self.sentences_kept,
            "sentences_dropped": self.sentences_dropped,
            "total_tokens": self.total_tokens,
            "covered_tokens": self.covered_tokens,
            "token_coverage": self.token_coverage,
            "kept_ids": self.kept_ids,
        }
        return json.dumps(payload, indent=2, sort_keys=True)


def _tgt_side(tgt) -> list[tuple[str, ...]]:
    if isinstance(tgt, ParallelCorpus):
        return [p.tgt for p in tgt]
    return [tuple(tokens) for tokens in tgt]


def _priority_rank(config: ProjectionConfig, src_tags: TaggedCorpus) -> dict[str, int]:
    if config.tag_priority is not None:
        order = list(config.tag_priority)
        missing = src_tags.tagset - set(order)
        if missing:
            raise ValueError(f"tag_priority does not cover {sorted(missing)}")
    else:
        freq = Counter(tag for sent in src_tags for tag in sent.tags)
        order = sorted(src_tags.tagset, key=lambda t: (-freq[t], t))
    return {tag: rank for rank, tag in enumerate(order)}


def _winner(votes: Counter, rank: Mapping[str, int]) -> str:
    return min(votes, key=lambda t: (-votes[t], rank.get(t, len(rank))))


def token_project(
    src_tags: TaggedCorpus,
    alignment: AlignmentSet,
    tgt_tokens,
) -> list[list[Counter]]:
    """Collect, per target token, the tags of its aligned source tokens.

    Uses the sure links of ``alignment``; unaligned tokens get an empty
    Counter.  All three inputs must be line-aligned.
    """
    tgt = _tgt_side(tgt_tokens)
    if not (len(src_tags) == len(alignment) == len(tgt)):
        raise ValueError(
            f"line counts differ: {len(src_tags)} tagged, "
            f"{len(alignment)} aligned, {len(tgt)} target"
        )
    votes_per_sentence = []
    for k, (sent, links, tokens) in enumerate(zip(src_tags, alignment, tgt)):
        votes = [Counter() for _ in tokens]
        for i, j in links.sure:
            if i >= len(sent.tokens) or j >= len(tokens):
                raise ValueError(
                    f"pair {k}: link ({i},{j}) out of range for "
                    f"{len(sent.tokens)}x{len(tokens)}"
                )
            votes[j][sent.tags[i]] += 1
        votes_per_sentence.append(votes)
    return votes_per_sentence


def build_type_dictionary(
    votes: Sequence[Sequence[Counter]],
    tgt_tokens,
    config: ProjectionConfig,
    tagset: frozenset[str],
    rank: Mapping[str, int] | None = None,
) -> TypeDictionary:
    """Tally winning token-level tags per word type and apply the beta threshold."""
    tgt = _tgt_side(tgt_tokens)
    rank = rank if rank is not None else {tag: k for k, tag in enumerate(sorted(tagset))}
    tallies: dict[str, Counter] = {}
    for sent_votes, tokens in zip(votes, tgt):
        for token_votes, word in zip(sent_votes, tokens):
            if not token_votes:
                continue
            tallies.setdefault(word, Counter())[_winner(token_votes, rank)] += 1
    beta = config.type_threshold
    allowed = {}
    for word, counts in tallies.items():
        cutoff = beta * max(counts.values())
        allowed[word] = frozenset(t for t in tagset if counts.get(t, 0) >= cutoff)
    return TypeDictionary(entries=tallies, allowed=allowed)


def _decide(
    token_votes: Counter,
    word: str,
    dictionary: TypeDictionary,
    rank: Mapping[str, int],
    fallback: str,
) -> str:
    if not token_votes:
        return fallback
    allowed = dictionary.allowed.get(word)
    if allowed is not None:
        permitted = Counter({t: c for t, c in token_votes.items() if t in allowed})
        if permitted:
            return _winner(permitted, rank)
        return _winner(Counter(dictionary.entries[word]), rank)
    return _winner(token_votes, rank)


def _emit(
    votes: Sequence[Sequence[Counter]],
    tgt: Sequence[tuple[str, ...]],
    dictionary: TypeDictionary,
    rank: Mapping[str, int],
    fallback: str,
    src_tagset: frozenset[str],
    config: ProjectionConfig,
) -> tuple[TaggedCorpus, ProjectionStats]:
    stats = ProjectionStats()
    sentences = []
    for k, (sent_votes, tokens) in enumerate(zip(votes, tgt)):
        covered = sum(1 for v in sent_votes if v)
        stats.total_tokens += len(tokens)
        stats.covered_tokens += covered
        if covered / len(tokens) < config.min_coverage:
            stats.sentences_dropped += 1
            continue
        tags = tuple(
            _decide(v, w, dictionary, rank, fallback) for v, w in zip(sent_votes, tokens)
        )
        if config.task == "ner":
            tags = repair_bio(tags)
        sentences.append(TaggedSentence(tuple(tokens), tags))
        stats.sentences_kept += 1
        stats.kept_ids.append(k)
    out_tagset = set(src_tagset)
    if config.task == "ner":
        # the repair pass can only introduce B-X for an existing I-X
        out_tagset.update(f"B-{t[2:]}" for t in src_tagset if t.startswith("I-"))
    return TaggedCorpus(tuple(sentences), frozenset(out_tagset), config.task), stats


def project(
    src_tags: TaggedCorpus,
    alignment: AlignmentSet,
    tgt_tokens,
    config: ProjectionConfig | None = None,
) -> tuple[TaggedCorpus, ProjectionStats]:
    """Project source tags to the target side; see the module docstring."""
    config = config or ProjectionConfig()
    if config.task != src_tags.task:
        raise ValueError(
            f"config task {config.task!r} but source corpus task {src_tags.task!r}"
        )
    tgt = _tgt_side(tgt_tokens)
    fallback = config.resolve_fallback(src_tags.tagset)
    rank = _priority_rank(config, src_tags)
    votes = token_project(src_tags, alignment, tgt)
    dictionary = build_type_dictionary(votes, tgt, config, src_tags.tagset, rank)
    return _emit(votes, tgt, dictionary, rank, fallback, src_tags.tagset, config)


class TagProjector(BaseEstimator):
    """Annotation projection with a fit/transform interface.

    ``fit`` learns the type dictionary and tag priority from a (tagged
    source, alignment, target tokens) triple; ``transform`` projects tags
    for such a triple using the learned dictionary and records the run's
    coverage stats on ``stats_``.
    """

    def __init__(
        self,
        task: str = "pos",
        type_threshold: float = 0.3,
        min_coverage: float = 0.8,
        fallback_tag: str | None = None,
        tag_priority: tuple[str, ...] | None = None,
    ):
        self.task = task
        self.type_threshold = type_threshold
        self.min_coverage = min_coverage
        self.fallback_tag = fallback_tag
        self.tag_priority = tag_priority

    def _config(self) -> ProjectionConfig:
        return ProjectionConfig(
            task=self.task,
            type_threshold=self.type_threshold,
            min_coverage=self.min_coverage,
            fallback_tag=self.fallback_tag,
            tag_priority=self.tag_priority,
        )

    def fit(self, X, y=None):
        src_tags, alignment, tgt_tokens = X
        config = self._config()
        self.rank_ = _priority_rank(config, src_tags)
        votes = token_project(src_tags, alignment, tgt_tokens)
        self.type_dictionary_ = build_type_dictionary(
            votes, tgt_tokens, config, src_tags.tagset, self.rank_
        )
        return self

    def transform(self, X) -> TaggedCorpus:
        src_tags, alignment, tgt_tokens = X
        config = self._config()
        tgt = _tgt_side(tgt_tokens)
        fallback = config.resolve_fallback(src_tags.tagset)
        votes = token_project(src_tags, alignment, tgt)
        corpus, stats = _emit(
            votes, tgt, self.type_dictionary_, self.rank_, fallback,
            src_tags.tagset, config,
        )
        self.stats_ = stats
        return corpus
