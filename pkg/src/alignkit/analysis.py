"""Experimental protocols: subset analysis, length analysis, bootstrap AER.

All three are seed-deterministic across platforms.  Randomness comes from a
hand-rolled SplitMix64 generator (named in report headers) driving
Fisher-Yates shuffles, so reports reproduce bit for bit regardless of the
numpy version or host architecture.

* subset analysis trains each method on nested random subsamples (the
  sample for one size is contained in every larger sample, so curves vary
  with data rather than sampling noise) and scores on a fixed gold set;
* length analysis sorts pairs by character count, partitions them into
  consecutive groups, and scores each method trained per group;
* bootstrap draws repeated within-sample without-replacement sentence
  subsets from a prediction/gold pair and summarizes the AER distribution
  (population std, quartiles by linear interpolation).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from .corpus import AlignmentSet, ParallelCorpus
from .ibm import Direction, ModelKind, TrainConfig, decode, train
from .metrics import evaluate
from .symmetrize import Heuristic, symmetrize_corpus

__all__ = [
    "SplitMix64",
    "AnalysisRow",
    "BootstrapSummary",
    "AnalysisReport",
    "subset_analysis",
    "length_analysis",
    "bootstrap_aer",
    "ibm_alignment_method",
]

RNG_NAME = "splitmix64"

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """Deterministic 64-bit generator (SplitMix64), portable across platforms."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def randbelow(self, n: int) -> int:
        """Unbiased draw from range(n) by rejection sampling."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            r = self.next_u64()
            if r < limit:
                return r % n

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) / float(1 << 53)

    def permutation(self, n: int) -> list[int]:
        arr = list(range(n))
        for i in range(n - 1, 0, -1):
            j = self.randbelow(i + 1)
            arr[i], arr[j] = arr[j], arr[i]
        return arr

    def sample_without_replacement(self, n: int, k: int) -> list[int]:
        if k > n:
            raise ValueError(f"cannot sample {k} of {n} without replacement")
        arr = list(range(n))
        for i in range(k):
            j = i + self.randbelow(n - i)
            arr[i], arr[j] = arr[j], arr[i]
        return arr[:k]


# --------------------------------------------------------------------------
# Report structure


@dataclass(frozen=True)
class AnalysisRow:
    label: str
    aer: dict[str, float]          # method -> AER, as a fraction
    avg_chars: float | None = None
    n_examples: int | None = None
    partial: bool = False


@dataclass(frozen=True)
class BootstrapSummary:
    whole_set_aer: float
    mean: float
    std: float
    minimum: float
    q25: float
    median: float
    q75: float
    maximum: float


@dataclass(frozen=True)
class AnalysisReport:
    kind: str                      # "subset" | "length" | "bootstrap"
    seed: int | None
    rows: tuple[AnalysisRow, ...]
    methods: tuple[str, ...]
    summary: BootstrapSummary | None = None
    rng: str = RNG_NAME

    def to_tsv(self) -> str:
        pct = lambda x: f"{100.0 * x:.2f}"
        lines: list[str] = []
        if self.kind == "subset":
            lines.append("size\t" + "\t".join(self.methods))
            for row in self.rows:
                lines.append(row.label + "\t" + "\t".join(pct(row.aer[m]) for m in self.methods))
        elif self.kind == "length":
            lines.append("group\tavg_chars\tn_examples\tpartial\t" + "\t".join(self.methods))
            for row in self.rows:
                lines.append(
                    f"{row.label}\t{row.avg_chars:.2f}\t{row.n_examples}\t"
                    f"{'yes' if row.partial else 'no'}\t"
                    + "\t".join(pct(row.aer[m]) for m in self.methods)
                )
        elif self.kind == "bootstrap":
            s = self.summary
            lines.append(
                "whole_set_aer\tavg_aer\tstd_aer\tmin_aer\tp25\tp50\tp75\tmax_aer"
            )
            lines.append(
                "\t".join(
                    pct(v)
                    for v in (s.whole_set_aer, s.mean, s.std, s.minimum, s.q25, s.median, s.q75, s.maximum)
                )
            )
            lines.append("sample\taer")
            for row in self.rows:
                lines.append(f"{row.label}\t{pct(row.aer['sample'])}")
        else:
            raise ValueError(f"unknown report kind {self.kind!r}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        payload: dict = {
            "kind": self.kind,
            "seed": self.seed,
            "rng": self.rng,
            "methods": list(self.methods),
            "rows": [
                {
                    "label": r.label,
                    "aer": r.aer,
                    **({"avg_chars": r.avg_chars} if r.avg_chars is not None else {}),
                    **({"n_examples": r.n_examples} if r.n_examples is not None else {}),
                    **({"partial": r.partial} if self.kind == "length" else {}),
                }
                for r in self.rows
            ],
        }
        if self.summary is not None:
            payload["summary"] = vars(self.summary)
        return json.dumps(payload, indent=2, sort_keys=True)


AlignFn = Callable[[ParallelCorpus], AlignmentSet]


def ibm_alignment_method(
    eval_corpus: ParallelCorpus,
    gold_pairs: int | None = None,
    kind: ModelKind = ModelKind.DIAGONAL,
    config: TrainConfig | None = None,
    heuristic: Heuristic = Heuristic.UNION,
    include_eval: bool = True,
) -> AlignFn:
    """Build a method callback that aligns ``eval_corpus`` after training.

    By default the evaluation bitext is appended to the training subsample
    (statistical aligners align the data they are trained on); decoding
    always runs over the evaluation pairs only.
    """
    if gold_pairs is not None and gold_pairs != len(eval_corpus):
        raise ValueError("gold does not cover the evaluation corpus")

    def align(train_corpus: ParallelCorpus) -> AlignmentSet:
        if include_eval:
            tokens = [(p.src, p.tgt) for p in train_corpus]
            tokens.extend((p.src, p.tgt) for p in eval_corpus)
            full = ParallelCorpus.from_token_pairs(tokens)
        else:
            full = train_corpus
        cfg = config or TrainConfig()
        table_f, params_f, _ = train(full, Direction.FORWARD, cfg, kind)
        table_r, params_r, _ = train(full, Direction.REVERSE, cfg, kind)
        fwd = decode(eval_corpus, table_f, params_f, Direction.FORWARD)
        rev = decode(eval_corpus, table_r, params_r, Direction.REVERSE)
        return symmetrize_corpus(fwd, rev, heuristic, corpus=eval_corpus)

    return align


# --------------------------------------------------------------------------
# Protocols


def subset_analysis(
    corpus: ParallelCorpus,
    gold: AlignmentSet,
    sizes: Sequence[int],
    methods: Mapping[str, AlignFn],
    seed: int = 0,
) -> AnalysisReport:
    """Train each method on nested seed-deterministic subsamples of ``corpus``.

    Subsample indices are re-sorted into corpus order, so the full-size
    subsample reproduces the unsampled run exactly.
    """
    sizes = list(sizes)
    if not sizes:
        raise ValueError("no sizes given")
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError("sizes must be strictly ascending")
    if sizes[0] < 1:
        raise ValueError("sizes must be >= 1")
    if sizes[-1] > len(corpus):
        raise ValueError(f"size {sizes[-1]} exceeds corpus size {len(corpus)}")
    perm = SplitMix64(seed).permutation(len(corpus))
    rows = []
    for size in sizes:
        sub = corpus.subset(sorted(perm[:size]))
        rows.append(
            AnalysisRow(
                label=str(size),
                aer={name: evaluate(fn(sub), gold).aer for name, fn in methods.items()},
                n_examples=size,
            )
        )
    return AnalysisReport("subset", seed, tuple(rows), tuple(methods))


def pair_char_count(src: Sequence[str], tgt: Sequence[str]) -> int:
    """Characters per example: both sides rendered with single spaces."""
    return len(" ".join(src)) + len(" ".join(tgt))


def length_analysis(
    corpus: ParallelCorpus,
    gold: AlignmentSet,
    group_size: int,
    methods: Mapping[str, AlignFn],
) -> AnalysisReport:
    """Partition ``corpus`` into ascending-length groups and score per group."""
    if group_size < 1:
        raise ValueError("group_size must be >= 1")
    chars = [pair_char_count(p.src, p.tgt) for p in corpus]
    order = sorted(range(len(corpus)), key=lambda k: (chars[k], k))
    rows = []
    for g, start in enumerate(range(0, len(order), group_size), start=1):
        group = order[start:start + group_size]
        sub = corpus.subset(sorted(group))
        avg = sum(chars[k] for k in group) / len(group)
        rows.append(
            AnalysisRow(
                label=str(g),
                aer={name: evaluate(fn(sub), gold).aer for name, fn in methods.items()},
                avg_chars=avg,
                n_examples=len(group),
                partial=len(group) < group_size,
            )
        )
    return AnalysisReport("length", None, tuple(rows), tuple(methods))


def _quantile(sorted_values: Sequence[float], q: float) -> float:
    """Linear-interpolation quantile of pre-sorted data."""
    pos = q * (len(sorted_values) - 1)
    lo = math.floor(pos)
    hi = math.ceil(pos)
    if lo == hi:
        return sorted_values[lo]
    frac = pos - lo
    return sorted_values[lo] * (1.0 - frac) + sorted_values[hi] * frac


def bootstrap_aer(
    pred: AlignmentSet,
    gold: AlignmentSet,
    n_samples: int = 100,
    sample_size: int = 50,
    seed: int = 0,
) -> AnalysisReport:
    """AER distribution over repeated sentence-level subsamples.

    Each of the ``n_samples`` draws picks ``sample_size`` distinct pairs
    (without replacement within the sample, independently across samples)
    and evaluates corpus-level AER on that subset.
    """
    if len(pred) != len(gold):
        raise ValueError(f"prediction covers {len(pred)} pairs but gold covers {len(gold)}")
    if sample_size > len(gold):
        raise ValueError(f"sample_size {sample_size} exceeds corpus size {len(gold)}")
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    rng = SplitMix64(seed)
    whole = evaluate(pred, gold).aer
    aers = []
    rows = []
    for s in range(n_samples):
        idx = rng.sample_without_replacement(len(gold), sample_size)
        aer = evaluate(pred.subset(idx), gold.subset(idx)).aer
        aers.append(aer)
        rows.append(AnalysisRow(label=str(s), aer={"sample": aer}))
    mean = sum(aers) / len(aers)
    std = math.sqrt(sum((x - mean) ** 2 for x in aers) / len(aers))
    ordered = sorted(aers)
    summary = BootstrapSummary(
        whole_set_aer=whole,
        mean=mean,
        std=std,
        minimum=ordered[0],
        q25=_quantile(ordered, 0.25),
        median=_quantile(ordered, 0.50),
        q75=_quantile(ordered, 0.75),
        maximum=ordered[-1],
    )
    return AnalysisReport("bootstrap", seed, tuple(rows), ("sample",), summary)
