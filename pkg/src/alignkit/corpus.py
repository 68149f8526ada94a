"""Core data types and parsers/serializers for bitext, alignments, tags, and embeddings.

Wire formats handled here:

* bitext: one ``source tokens ||| target tokens`` pair per line, single-space
  tokenization, UTF-8.
* Pharaoh: whitespace-separated ``i-j`` (sure) and ``i?j`` (possible-only)
  link items, one line per sentence pair, 0-based indices.
* CoNLL: ``token<TAB>tag`` lines, one blank line after each sentence.
* EMB1: text dump of per-subword vectors (see :func:`parse_embeddings`).

Parsers for Pharaoh, CoNLL and EMB1 skip leading ``# `` comment lines, so
files produced by the CLI (which prepends a provenance comment) stay
consumable.  Bitext lines are never treated as comments because ``#`` is a
legal token there.  All types are immutable after construction and safe to
share across workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "ParseError",
    "SentencePair",
    "ParallelCorpus",
    "SentenceAlignment",
    "AlignmentSet",
    "TaggedSentence",
    "TaggedCorpus",
    "Subword",
    "EmbeddedSentencePair",
    "parse_bitext",
    "serialize_bitext",
    "parse_pharaoh",
    "serialize_pharaoh",
    "parse_conll",
    "serialize_conll",
    "parse_embeddings",
    "serialize_embeddings",
]

Link = tuple[int, int]

# ``|||`` is reserved by the bitext wire format and cannot be a token.
BITEXT_SEPARATOR = "|||"


class ParseError(ValueError):
    """Raised for malformed input files; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def _strip_bom(text: str) -> str:
    return text[1:] if text.startswith("﻿") else text


def _check_token(token: str, line: int, side: str) -> None:
    if not token:
        raise ParseError(f"blank token on {side} side", line)
    if any(c.isspace() for c in token):
        raise ParseError(f"token {token!r} on {side} side contains whitespace", line)


# --------------------------------------------------------------------------
# Parallel corpus


@dataclass(frozen=True, slots=True)
class SentencePair:
    """One tokenized sentence pair; ``id`` equals its 0-based corpus position."""

    id: int
    src: tuple[str, ...]
    tgt: tuple[str, ...]

    def __post_init__(self):
        for side_name, side in (("source", self.src), ("target", self.tgt)):
            if len(side) == 0:
                raise ValueError(f"pair {self.id}: empty {side_name} side")
            for tok in side:
                if not tok or any(c.isspace() for c in tok):
                    raise ValueError(f"pair {self.id}: invalid token {tok!r}")
                if tok == BITEXT_SEPARATOR:
                    raise ValueError(
                        f"pair {self.id}: token {BITEXT_SEPARATOR!r} is reserved by the bitext format"
                    )


@dataclass(frozen=True, slots=True)
class ParallelCorpus:
    """An ordered, immutable sequence of sentence pairs."""

    pairs: tuple[SentencePair, ...]

    def __post_init__(self):
        for pos, pair in enumerate(self.pairs):
            if pair.id != pos:
                raise ValueError(f"pair id {pair.id} does not match position {pos}")

    @classmethod
    def from_token_pairs(cls, token_pairs: Iterable[tuple[Sequence[str], Sequence[str]]]) -> "ParallelCorpus":
        pairs = tuple(
            SentencePair(i, tuple(src), tuple(tgt)) for i, (src, tgt) in enumerate(token_pairs)
        )
        return cls(pairs)

    def subset(self, indices: Sequence[int]) -> "ParallelCorpus":
        """New corpus from the selected pairs, renumbered from 0."""
        return ParallelCorpus.from_token_pairs((self.pairs[i].src, self.pairs[i].tgt) for i in indices)

    def swapped(self) -> "ParallelCorpus":
        """Corpus with source and target sides exchanged."""
        return ParallelCorpus.from_token_pairs((p.tgt, p.src) for p in self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[SentencePair]:
        return iter(self.pairs)

    def __getitem__(self, i: int) -> SentencePair:
        return self.pairs[i]


def parse_bitext(text: str) -> ParallelCorpus:
    """Parse ``src ||| tgt`` lines into a :class:`ParallelCorpus`.

    Raises :class:`ParseError` (with a 1-based line number) on a missing
    ``|||`` separator, an empty side, or a blank token (for example from a
    doubled space).
    """
    pairs = []
    for lineno, line in enumerate(_strip_bom(text).splitlines(), start=1):
        parts = line.split(BITEXT_SEPARATOR)
        if len(parts) < 2:
            raise ParseError(f"missing {BITEXT_SEPARATOR!r} separator", lineno)
        if len(parts) > 2:
            raise ParseError(f"multiple {BITEXT_SEPARATOR!r} separators", lineno)
        raw_src, raw_tgt = parts
        sides = []
        for side_name, raw in (("source", raw_src), ("target", raw_tgt)):
            # The separator is padded with single spaces; strip exactly those
            # so interior double spaces still surface as blank tokens.
            if side_name == "source" and raw.endswith(" "):
                raw = raw[:-1]
            if side_name == "target" and raw.startswith(" "):
                raw = raw[1:]
            if raw == "":
                raise ParseError(f"empty {side_name} side", lineno)
            tokens = raw.split(" ")
            for tok in tokens:
                _check_token(tok, lineno, side_name)
            sides.append(tuple(tokens))
        pairs.append((sides[0], sides[1]))
    return ParallelCorpus.from_token_pairs(pairs)


def serialize_bitext(corpus: ParallelCorpus) -> str:
    return "".join(f"{' '.join(p.src)} {BITEXT_SEPARATOR} {' '.join(p.tgt)}\n" for p in corpus)


# --------------------------------------------------------------------------
# Alignments


@dataclass(frozen=True, slots=True)
class SentenceAlignment:
    """Link sets for one sentence pair; ``sure`` is always a subset of ``possible``."""

    sure: frozenset[Link]
    possible: frozenset[Link]

    def __post_init__(self):
        if not self.sure <= self.possible:
            raise ValueError("sure links must be a subset of possible links")
        for (i, j) in self.possible:
            if i < 0 or j < 0:
                raise ValueError(f"negative link index ({i},{j})")

    @classmethod
    def sure_only(cls, links: Iterable[Link]) -> "SentenceAlignment":
        s = frozenset((int(i), int(j)) for i, j in links)
        return cls(s, s)


@dataclass(frozen=True, slots=True)
class AlignmentSet:
    """Per-pair link sets over a corpus, with a sure/possible partition."""

    sentences: tuple[SentenceAlignment, ...]

    @classmethod
    def from_sure(cls, links_per_pair: Iterable[Iterable[Link]]) -> "AlignmentSet":
        return cls(tuple(SentenceAlignment.sure_only(ls) for ls in links_per_pair))

    def subset(self, indices: Sequence[int]) -> "AlignmentSet":
        return AlignmentSet(tuple(self.sentences[i] for i in indices))

    def transposed(self) -> "AlignmentSet":
        """Swap link orientation, (i, j) -> (j, i), in both partitions."""
        return AlignmentSet(
            tuple(
                SentenceAlignment(
                    frozenset((j, i) for i, j in s.sure),
                    frozenset((j, i) for i, j in s.possible),
                )
                for s in self.sentences
            )
        )

    def validate_bounds(self, corpus: ParallelCorpus) -> None:
        """Check every link against the corpus' sentence lengths."""
        if len(self.sentences) != len(corpus):
            raise ValueError(
                f"alignment has {len(self.sentences)} pairs but corpus has {len(corpus)}"
            )
        for k, (sent, pair) in enumerate(zip(self.sentences, corpus)):
            n, m = len(pair.src), len(pair.tgt)
            for (i, j) in sent.possible:
                if i >= n or j >= m:
                    raise ValueError(
                        f"pair {k}: link ({i},{j}) out of range for sizes {n}x{m}"
                    )

    def __len__(self) -> int:
        return len(self.sentences)

    def __iter__(self) -> Iterator[SentenceAlignment]:
        return iter(self.sentences)

    def __getitem__(self, i: int) -> SentenceAlignment:
        return self.sentences[i]


def _skip_leading_comments(lines: list[str], lineno0: int = 1) -> tuple[list[str], int]:
    k = 0
    while k < len(lines) and lines[k].startswith("# "):
        k += 1
    return lines[k:], lineno0 + k


def parse_pharaoh(
    text: str,
    n_pairs: int | None = None,
    corpus: ParallelCorpus | None = None,
    one_based: bool = False,
) -> AlignmentSet:
    """Parse Pharaoh link lines, line-aligned to the bitext.

    ``i-j`` items are sure links, ``i?j`` items possible-only.  When
    ``corpus`` is given, link indices are validated against sentence lengths
    (and ``n_pairs`` defaults to the corpus size).  ``one_based`` shifts
    imported indices down by one for files produced by 1-based tools.
    """
    if corpus is not None and n_pairs is None:
        n_pairs = len(corpus)
    lines, start = _skip_leading_comments(_strip_bom(text).splitlines())
    if n_pairs is not None and len(lines) != n_pairs:
        raise ParseError(f"expected {n_pairs} alignment lines, found {len(lines)}")
    sentences = []
    for k, line in enumerate(lines):
        lineno = start + k
        sure: set[Link] = set()
        poss: set[Link] = set()
        for item in line.split():
            sep = "-" if "-" in item else "?" if "?" in item else None
            if sep is None:
                raise ParseError(f"malformed link item {item!r}", lineno)
            left, _, right = item.partition(sep)
            if not (left.isdigit() and right.isdigit()):
                raise ParseError(f"malformed link item {item!r}", lineno)
            i, j = int(left), int(right)
            if one_based:
                i, j = i - 1, j - 1
                if i < 0 or j < 0:
                    raise ParseError(f"link item {item!r} is not 1-based", lineno)
            if sep == "-":
                sure.add((i, j))
            poss.add((i, j))
        if corpus is not None:
            n, m = len(corpus[k].src), len(corpus[k].tgt)
            for (i, j) in poss:
                if i >= n or j >= m:
                    raise ParseError(
                        f"link ({i},{j}) out of range for sizes {n}x{m}", lineno
                    )
        sentences.append(SentenceAlignment(frozenset(sure), frozenset(poss)))
    return AlignmentSet(tuple(sentences))


def serialize_pharaoh(alignment: AlignmentSet) -> str:
    """Render links sorted by (i, j); sure as ``i-j``, possible-only as ``i?j``."""
    out = []
    for sent in alignment:
        items = [
            f"{i}-{j}" if (i, j) in sent.sure else f"{i}?{j}"
            for (i, j) in sorted(sent.possible)
        ]
        out.append(" ".join(items) + "\n")
    return "".join(out)


# --------------------------------------------------------------------------
# Tagged corpora (CoNLL)


def _bio_violation(tags: Sequence[str]) -> int | None:
    """Index of the first orphan I-X tag, or None if the sequence is valid."""
    prev = "O"
    for k, tag in enumerate(tags):
        if tag.startswith("I-"):
            kind = tag[2:]
            if prev not in (f"B-{kind}", f"I-{kind}"):
                return k
        prev = tag
    return None


def repair_bio(tags: Sequence[str]) -> tuple[str, ...]:
    """Convert orphan ``I-X`` tags (no preceding ``B-X``/``I-X``) into ``B-X``."""
    out: list[str] = []
    prev = "O"
    for tag in tags:
        if tag.startswith("I-"):
            kind = tag[2:]
            if prev not in (f"B-{kind}", f"I-{kind}"):
                tag = f"B-{kind}"
        out.append(tag)
        prev = tag
    return tuple(out)


@dataclass(frozen=True, slots=True)
class TaggedSentence:
    tokens: tuple[str, ...]
    tags: tuple[str, ...]

    def __post_init__(self):
        if len(self.tokens) != len(self.tags):
            raise ValueError(
                f"{len(self.tokens)} tokens but {len(self.tags)} tags"
            )
        if len(self.tokens) == 0:
            raise ValueError("empty sentence")


@dataclass(frozen=True, slots=True)
class TaggedCorpus:
    """Token sequences with one tag per token; NER corpora are BIO-valid."""

    sentences: tuple[TaggedSentence, ...]
    tagset: frozenset[str]
    task: str  # "pos" or "ner"

    def __post_init__(self):
        if self.task not in ("pos", "ner"):
            raise ValueError(f"unknown task {self.task!r}")
        for k, sent in enumerate(self.sentences):
            for tag in sent.tags:
                if tag not in self.tagset:
                    raise ValueError(f"sentence {k}: tag {tag!r} outside tagset")
            if self.task == "ner":
                bad = _bio_violation(sent.tags)
                if bad is not None:
                    raise ValueError(
                        f"sentence {k}: orphan {sent.tags[bad]!r} at token {bad}"
                    )

    def __len__(self) -> int:
        return len(self.sentences)

    def __iter__(self) -> Iterator[TaggedSentence]:
        return iter(self.sentences)

    def __getitem__(self, i: int) -> TaggedSentence:
        return self.sentences[i]


def parse_conll(
    text: str,
    task: str = "pos",
    tagset: Iterable[str] | None = None,
    strict: bool = True,
) -> TaggedCorpus:
    """Parse ``token<TAB>tag`` lines with blank-line sentence separators.

    A declared ``tagset`` makes out-of-set tags an error; otherwise the
    tagset is inferred.  For NER, a broken BIO sequence is an error in
    strict mode and is repaired (orphan I-X becomes B-X) otherwise.
    """
    declared = frozenset(tagset) if tagset is not None else None
    lines, start = _skip_leading_comments(_strip_bom(text).splitlines())
    sentences: list[TaggedSentence] = []
    tokens: list[str] = []
    tags: list[str] = []
    seen_tags: set[str] = set()

    def flush(lineno: int) -> None:
        nonlocal tokens, tags
        if not tokens:
            raise ParseError("empty sentence (consecutive blank lines)", lineno)
        final_tags = tuple(tags)
        if task == "ner" and not strict:
            final_tags = repair_bio(final_tags)
            seen_tags.update(final_tags)
        sentences.append(TaggedSentence(tuple(tokens), final_tags))
        tokens, tags = [], []

    for k, line in enumerate(lines):
        lineno = start + k
        if line == "":
            flush(lineno)
            continue
        tok, sep, tag = line.partition("\t")
        if not sep:
            raise ParseError(f"expected token<TAB>tag, got {line!r}", lineno)
        _check_token(tok, lineno, "token")
        _check_token(tag, lineno, "tag")
        if declared is not None and tag not in declared:
            raise ParseError(f"tag {tag!r} outside declared tagset", lineno)
        if task == "ner" and strict:
            probe = tags + [tag]
            if _bio_violation(probe) == len(probe) - 1:
                raise ParseError(f"orphan {tag!r} breaks BIO sequence", lineno)
        tokens.append(tok)
        tags.append(tag)
        seen_tags.add(tag)
    if tokens:
        flush(start + len(lines))
    final_tagset = declared if declared is not None else frozenset(seen_tags)
    return TaggedCorpus(tuple(sentences), final_tagset, task)


def serialize_conll(tc: TaggedCorpus) -> str:
    """Canonical CoNLL bytes: token<TAB>tag lines, blank line after each sentence."""
    chunks = []
    for sent in tc:
        for tok, tag in zip(sent.tokens, sent.tags):
            chunks.append(f"{tok}\t{tag}\n")
        chunks.append("\n")
    return "".join(chunks)


# --------------------------------------------------------------------------
# Embedded sentence pairs (EMB1)


@dataclass(frozen=True, slots=True, eq=False)
class Subword:
    word_index: int
    text: str
    vector: np.ndarray

    def __post_init__(self):
        if not self.text or any(c.isspace() for c in self.text):
            raise ValueError(f"invalid subword text {self.text!r}")


def _check_side(side: tuple[Subword, ...], dim: int, label: str) -> int:
    """Validate word-index coverage and vector sanity; return the word count."""
    if not side:
        raise ValueError(f"{label} side has no subwords")
    prev = -1
    for k, sub in enumerate(side):
        w = sub.word_index
        if w < prev:
            raise ValueError(f"{label} subword {k}: word_index decreases ({prev} -> {w})")
        if w > prev + 1:
            raise ValueError(f"{label} subword {k}: word_index gap at {prev + 1}")
        prev = w
        if sub.vector.shape != (dim,):
            raise ValueError(
                f"{label} subword {k}: expected {dim} components, got {sub.vector.shape}"
            )
        if not np.all(np.isfinite(sub.vector)):
            raise ValueError(f"{label} subword {k} ({sub.text!r}): non-finite component")
    if side[0].word_index != 0:
        raise ValueError(f"{label} word_index does not start at 0")
    return prev + 1


@dataclass(frozen=True, slots=True, eq=False)
class EmbeddedSentencePair:
    """Per-subword vectors for one pair, with subword-to-word index maps."""

    layer: int
    dim: int
    src_sub: tuple[Subword, ...]
    tgt_sub: tuple[Subword, ...]
    n_src_words: int = field(default=0)
    n_tgt_words: int = field(default=0)

    def __post_init__(self):
        n_src = _check_side(self.src_sub, self.dim, "source")
        n_tgt = _check_side(self.tgt_sub, self.dim, "target")
        object.__setattr__(self, "n_src_words", n_src)
        object.__setattr__(self, "n_tgt_words", n_tgt)


def _make_subword(word_index: int, text: str, values: Sequence[float]) -> Subword:
    vec = np.asarray(values, dtype=np.float64)
    vec.setflags(write=False)
    return Subword(word_index, text, vec)


def parse_embeddings(text: str) -> list[EmbeddedSentencePair]:
    """Parse an EMB1 file.

    Layout: header ``EMB1 <layer> <dim>``; per pair a ``#pair <id>
    <n_src_words> <n_tgt_words>`` marker followed by ``S <word_index>
    <subword> <v1> ... <vd>`` lines and then ``T ...`` lines.  Dimension
    mismatches, word-index gaps and non-finite components are errors.
    """
    lines, start = _skip_leading_comments(_strip_bom(text).splitlines())
    if not lines:
        raise ParseError("empty EMB1 file")
    header = lines[0].split()
    if len(header) != 3 or header[0] != "EMB1":
        raise ParseError("expected header 'EMB1 <layer> <dim>'", start)
    try:
        layer, dim = int(header[1]), int(header[2])
    except ValueError:
        raise ParseError("non-integer layer or dim in header", start) from None
    if dim < 1:
        raise ParseError("dim must be >= 1", start)

    pairs: list[EmbeddedSentencePair] = []
    cur: dict | None = None

    def flush(lineno: int) -> None:
        nonlocal cur
        if cur is None:
            return
        try:
            pair = EmbeddedSentencePair(layer, dim, tuple(cur["S"]), tuple(cur["T"]))
        except ValueError as exc:
            raise ParseError(f"pair {cur['id']}: {exc}", lineno) from None
        if pair.n_src_words != cur["ns"] or pair.n_tgt_words != cur["nt"]:
            raise ParseError(
                f"pair {cur['id']}: declared word counts {cur['ns']}/{cur['nt']} "
                f"but word indices cover {pair.n_src_words}/{pair.n_tgt_words}",
                lineno,
            )
        pairs.append(pair)
        cur = None

    for k, line in enumerate(lines[1:]):
        lineno = start + 1 + k
        if not line.strip():
            continue
        fields = line.split()
        if fields[0] == "#pair":
            flush(lineno)
            if len(fields) != 4:
                raise ParseError("expected '#pair <id> <n_src_words> <n_tgt_words>'", lineno)
            try:
                pid, ns, nt = int(fields[1]), int(fields[2]), int(fields[3])
            except ValueError:
                raise ParseError("non-integer field in #pair line", lineno) from None
            if pid != len(pairs):
                raise ParseError(f"pair id {pid} out of order (expected {len(pairs)})", lineno)
            cur = {"id": pid, "ns": ns, "nt": nt, "S": [], "T": []}
        elif fields[0] in ("S", "T"):
            if cur is None:
                raise ParseError("subword line before any #pair marker", lineno)
            if len(fields) != 3 + dim:
                raise ParseError(
                    f"expected {dim} vector components, got {len(fields) - 3}", lineno
                )
            if fields[0] == "S" and cur["T"]:
                raise ParseError("S line after T lines within a pair", lineno)
            try:
                widx = int(fields[1])
                values = [float(v) for v in fields[3:]]
            except ValueError:
                raise ParseError(f"malformed subword record {line!r}", lineno) from None
            if any(not math.isfinite(v) for v in values):
                raise ParseError(f"non-finite component in subword {fields[2]!r}", lineno)
            cur[fields[0]].append(_make_subword(widx, fields[2], values))
        else:
            raise ParseError(f"unrecognized record {fields[0]!r}", lineno)
    flush(start + len(lines))
    return pairs


def serialize_embeddings(pairs: Sequence[EmbeddedSentencePair]) -> str:
    """Render EMB1 text; reals carry 9 significant digits."""
    if not pairs:
        raise ValueError("no pairs to serialize")
    layer, dim = pairs[0].layer, pairs[0].dim
    for k, p in enumerate(pairs):
        if p.layer != layer or p.dim != dim:
            raise ValueError(f"pair {k}: layer/dim differ from the first pair")
    out = [f"EMB1 {layer} {dim}\n"]
    for k, p in enumerate(pairs):
        out.append(f"#pair {k} {p.n_src_words} {p.n_tgt_words}\n")
        for tag, side in (("S", p.src_sub), ("T", p.tgt_sub)):
            for sub in side:
                vals = " ".join(f"{v:.9g}" for v in sub.vector)
                out.append(f"{tag} {sub.word_index} {sub.text} {vals}\n")
    return "".join(out)
