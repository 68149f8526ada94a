"""EM training and Viterbi decoding for lexical translation models.

Two model kinds share one code path:

* ``ibm1``: uniform distortion, the classic lexical-translation model.
* ``diag``: a diagonal-prior reparameterization with tension ``lambda`` and
  an explicit NULL-link mass ``p0``.  Position weights follow

      delta(i=0 | j, n, m) = p0
      delta(i   | j, n, m) = (1 - p0) * exp(lambda * h(i,j,n,m)) / Z(j,n,m)
      h(i, j, n, m)        = -| i/n - j/m |

  with Z summing exp(lambda * h) over i = 1..n.  ``ibm1`` is exactly the
  ``lambda = 0`` case, and both kinds run through the same arithmetic so
  that they agree bitwise when lambda is zero.

The E-step posterior is gamma(i|j) proportional to t(f_j|e_i) * delta(i,j,n,m);
the M-step applies add-alpha smoothing, t(f|e) = (c(e,f) + alpha) / (c(e) +
alpha * V_f) over the target vocabulary V_f.  Pairs never seen in training
fall back to the smoothing floor alpha / row-denominator, never to a crash.
When enabled, lambda is re-fit after each E-step by maximizing the expected
distortion log-likelihood with a golden-section search on [0, 20]; the new
value is kept only if it does not lower that objective, which preserves the
generalized-EM guarantee that the likelihood trace never decreases.

Determinism contract: expected counts are accumulated in float64 through
fixed-order segmented reductions over arrays whose layout depends only on
the corpus, so any worker count reproduces the single-worker result bit for
bit.  Workers parallelize only the elementwise arithmetic.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np
from sklearn.base import BaseEstimator

from .corpus import AlignmentSet, ParallelCorpus, ParseError

__all__ = [
    "NULL_TOKEN",
    "ModelKind",
    "Direction",
    "TrainConfig",
    "DiagonalParams",
    "TranslationTable",
    "diag_weight",
    "train",
    "decode",
    "serialize_model",
    "parse_model",
    "save_model",
    "load_model",
    "IbmAligner",
]

NULL_TOKEN = "<NULL>"

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_LAMBDA_LO, _LAMBDA_HI = 0.0, 20.0
_LAMBDA_TOL = 1e-3


class ModelKind(str, Enum):
    MODEL1 = "ibm1"
    DIAGONAL = "diag"


class Direction(str, Enum):
    FORWARD = "fwd"
    REVERSE = "rev"


@dataclass(frozen=True)
class TrainConfig:
    """Training knobs.  ``seed`` is recorded for provenance; EM itself is
    deterministic (uniform initialization, no stochastic step)."""

    iterations: int = 5
    smoothing_alpha: float = 0.01
    initial_lambda: float = 4.0
    p0: float = 0.08
    lambda_search: bool = True
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.smoothing_alpha < 0:
            raise ValueError("smoothing_alpha must be >= 0")
        if not 0.0 <= self.p0 < 1.0:
            raise ValueError("p0 must be in [0, 1)")
        if self.initial_lambda < 0:
            raise ValueError("initial_lambda must be >= 0")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass(frozen=True)
class DiagonalParams:
    """Distortion parameters; ``lam`` is ignored for MODEL1 (uniform)."""

    lam: float
    p0: float
    kind: ModelKind

    @property
    def effective_lambda(self) -> float:
        return 0.0 if self.kind is ModelKind.MODEL1 else self.lam


def diag_weight(i: int, j: int, n: int, m: int, params: DiagonalParams) -> float:
    """Position weight delta(i | j, n, m); ``i = 0`` is the NULL word."""
    if not 1 <= j <= m:
        raise ValueError(f"j={j} out of range 1..{m}")
    if not 0 <= i <= n:
        raise ValueError(f"i={i} out of range 0..{n}")
    if i == 0:
        return params.p0
    lam = params.effective_lambda
    z = 0.0
    for k in range(1, n + 1):
        z += math.exp(lam * -abs(k / n - j / m))
    return (1.0 - params.p0) * math.exp(lam * -abs(i / n - j / m)) / z


def _delta_matrix(n: int, m: int, lam: float, p0: float) -> np.ndarray:
    """Distortion matrix of shape (n+1, m); row 0 is the NULL word."""
    i_norm = np.arange(1, n + 1, dtype=np.float64) / n
    j_norm = np.arange(1, m + 1, dtype=np.float64) / m
    ez = np.exp(lam * -np.abs(i_norm[:, None] - j_norm[None, :]))
    body = (1.0 - p0) * ez / ez.sum(axis=0)
    return np.vstack([np.full((1, m), p0), body])


# --------------------------------------------------------------------------
# Translation table


class TranslationTable:
    """Sparse conditional lexicon t(f|e) over co-occurring word pairs.

    Rows are stored for every source word (including NULL) against the
    target words it co-occurred with; the remaining target-vocabulary mass
    sits implicitly at the smoothing floor alpha / denominator, so each row
    sums to 1 over the full target vocabulary.
    """

    def __init__(
        self,
        src_words: list[str],
        tgt_words: list[str],
        keys: np.ndarray,
        probs: np.ndarray,
        denoms: np.ndarray,
        alpha: float,
    ):
        self.src_words = src_words
        self.tgt_words = tgt_words
        self.src_index = {w: k for k, w in enumerate(src_words)}
        self.tgt_index = {w: k for k, w in enumerate(tgt_words)}
        self.keys = keys        # packed e * V_f + f, sorted ascending
        self.probs = probs
        self.denoms = denoms    # per source id, c(e) + alpha * V_f
        self.alpha = float(alpha)
        self.row_starts = np.searchsorted(keys // len(tgt_words), np.arange(len(src_words)))

    @property
    def n_entries(self) -> int:
        return len(self.keys)

    @property
    def tgt_vocab_size(self) -> int:
        return len(self.tgt_words)

    def floor(self, e: str) -> float:
        """Probability mass for a target word never seen with ``e``."""
        eid = self.src_index.get(e)
        if eid is None:
            return 1.0 / len(self.tgt_words) if self.alpha > 0 else 0.0
        den = self.denoms[eid]
        return self.alpha / den if den > 0 else 0.0

    def prob(self, e: str, f: str) -> float:
        eid = self.src_index.get(e)
        fid = self.tgt_index.get(f)
        if eid is None or fid is None:
            return self.floor(e)
        packed = eid * len(self.tgt_words) + fid
        pos = int(np.searchsorted(self.keys, packed))
        if pos < len(self.keys) and self.keys[pos] == packed:
            return float(self.probs[pos])
        return self.floor(e)

    def row(self, e: str) -> dict[str, float]:
        """Stored entries of one source row."""
        eid = self.src_index.get(e)
        if eid is None:
            return {}
        lo = self.row_starts[eid]
        hi = self.row_starts[eid + 1] if eid + 1 < len(self.src_words) else len(self.keys)
        vf = len(self.tgt_words)
        return {
            self.tgt_words[int(k % vf)]: float(p)
            for k, p in zip(self.keys[lo:hi], self.probs[lo:hi])
        }

    def row_sum(self, e: str) -> float:
        """Row total over the full target vocabulary, floor mass included."""
        eid = self.src_index.get(e)
        if eid is None:
            return 1.0 if self.alpha > 0 else 0.0
        lo = self.row_starts[eid]
        hi = self.row_starts[eid + 1] if eid + 1 < len(self.src_words) else len(self.keys)
        stored = float(self.probs[lo:hi].sum())
        return stored + self.floor(e) * (len(self.tgt_words) - (hi - lo))


# --------------------------------------------------------------------------
# Training

# Flat-array layout: for every pair, cells are laid out column-major, one
# column per target position j holding i = 0 (NULL) first and then i = 1..n.
# Column boundaries therefore never straddle pairs, the NULL cell is always
# the first cell of its column, and every segmented reduction below runs in
# a fixed left-to-right order independent of the worker count.


class _FlatCorpus:
    def __init__(self, pairs: list[tuple[tuple[str, ...], tuple[str, ...]]]):
        src_index: dict[str, int] = {NULL_TOKEN: 0}
        tgt_index: dict[str, int] = {}
        e_ids_per_pair = []
        f_ids_per_pair = []
        for src, tgt in pairs:
            for side in (src, tgt):
                if NULL_TOKEN in side:
                    raise ValueError(f"corpus contains reserved token {NULL_TOKEN!r}")
            e_ids_per_pair.append(
                np.array([src_index.setdefault(w, len(src_index)) for w in src], dtype=np.int64)
            )
            f_ids_per_pair.append(
                np.array([tgt_index.setdefault(w, len(tgt_index)) for w in tgt], dtype=np.int64)
            )
        self.src_words = list(src_index)
        self.tgt_words = list(tgt_index)
        vf = len(self.tgt_words)

        key_chunks = []
        h_chunks = []
        col_size_chunks = []
        group_chunks = []
        shape_groups: dict[tuple[int, int], int] = {}
        z_h_rows: list[np.ndarray] = []
        for e_ids, f_ids in zip(e_ids_per_pair, f_ids_per_pair):
            n, m = len(e_ids), len(f_ids)
            e_col = np.concatenate([np.zeros(1, dtype=np.int64), e_ids])
            key_chunks.append(np.tile(e_col, m) * vf + np.repeat(f_ids, n + 1))
            i_norm = np.concatenate([np.zeros(1), np.arange(1, n + 1) / n])
            j_norm = np.arange(1, m + 1) / m
            h = -np.abs(np.tile(i_norm, m) - np.repeat(j_norm, n + 1))
            h[:: n + 1] = 0.0  # NULL cells contribute nothing to the tension objective
            h_chunks.append(h)
            col_size_chunks.append(np.full(m, n + 1, dtype=np.int64))
            if (n, m) not in shape_groups:
                shape_groups[(n, m)] = len(z_h_rows)
                for j in range(1, m + 1):
                    z_h_rows.append(-np.abs(np.arange(1, n + 1) / n - j / m))
            base = shape_groups[(n, m)]
            group_chunks.append(np.arange(base, base + m, dtype=np.int64))

        self.col_sizes = np.concatenate(col_size_chunks)
        self.n_cols = len(self.col_sizes)
        self.col_starts = np.concatenate([[0], np.cumsum(self.col_sizes)[:-1]])
        self.n_cells = int(self.col_sizes.sum())
        self.h = np.concatenate(h_chunks)
        self.group_of_col = np.concatenate(group_chunks)
        self.z_pack = np.concatenate(z_h_rows)
        row_lengths = np.array([len(r) for r in z_h_rows], dtype=np.int64)
        self.z_starts = np.concatenate([[0], np.cumsum(row_lengths)[:-1]])

        keys = np.concatenate(key_chunks)
        uniq, inverse = np.unique(keys, return_inverse=True)
        self.uniq_keys = uniq
        self.cell_key = inverse.astype(np.int64)
        self.perm = np.argsort(self.cell_key, kind="stable")
        key_counts = np.bincount(self.cell_key, minlength=len(uniq))
        self.key_starts = np.concatenate([[0], np.cumsum(key_counts)[:-1]])
        self.e_of_key = uniq // vf
        self.n_src = len(self.src_words)
        self.n_tgt = vf
        self.row_starts = np.searchsorted(self.e_of_key, np.arange(self.n_src))
        self.row_sizes = np.diff(np.concatenate([self.row_starts, [len(uniq)]]))
        # cell -> global column index, for gathering per-column normalizers
        self.col_of_cell = np.repeat(np.arange(self.n_cols, dtype=np.int64), self.col_sizes)
        self.null_mask = np.zeros(self.n_cells, dtype=bool)
        self.null_mask[self.col_starts] = True


def _chunk_ranges(n: int, workers: int) -> list[tuple[int, int]]:
    if workers <= 1 or n < 2:
        return [(0, n)]
    step = (n + workers - 1) // workers
    return [(s, min(s + step, n)) for s in range(0, n, step)]


def _parallel(fn, ranges, workers: int) -> None:
    if len(ranges) == 1:
        fn(*ranges[0])
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        list(pool.map(lambda r: fn(*r), ranges))


def _column_z(flat: _FlatCorpus, lam: float) -> np.ndarray:
    """Normalizer Z(j, n, m) for every distinct (n, m, j) row group."""
    return np.add.reduceat(np.exp(lam * flat.z_pack), flat.z_starts)


def _delta_flat(flat: _FlatCorpus, lam: float, p0: float, out: np.ndarray) -> np.ndarray:
    z_cell = _column_z(flat, lam)[flat.group_of_col][flat.col_of_cell]
    np.exp(lam * flat.h, out=out)
    out *= (1.0 - p0) / z_cell
    out[flat.null_mask] = p0
    return out


def _tension_objective(flat: _FlatCorpus, w_group: np.ndarray, gh_sum: float, lam: float) -> float:
    return lam * gh_sum - float(np.sum(w_group * np.log(_column_z(flat, lam))))


def _golden_max(f, lo: float, hi: float, tol: float) -> float:
    c = hi - _GOLDEN * (hi - lo)
    d = lo + _GOLDEN * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol:
        if fc > fd:
            hi, d, fd = d, c, fc
            c = hi - _GOLDEN * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _GOLDEN * (hi - lo)
            fd = f(d)
    return (lo + hi) / 2.0


def train(
    corpus: ParallelCorpus,
    direction: Direction = Direction.FORWARD,
    config: TrainConfig | None = None,
    kind: ModelKind = ModelKind.DIAGONAL,
) -> tuple[TranslationTable, DiagonalParams, list[float]]:
    """Run EM and return (table, distortion params, per-iteration log-likelihood).

    ``ll_trace[k]`` is the corpus log-likelihood under the parameters in
    force at the start of iteration ``k``; it is non-decreasing.
    """
    if config is None:
        config = TrainConfig()
    if len(corpus) == 0:
        raise ValueError("empty corpus")
    pairs = [
        (p.src, p.tgt) if direction is Direction.FORWARD else (p.tgt, p.src)
        for p in corpus
    ]
    flat = _FlatCorpus(pairs)
    alpha = config.smoothing_alpha
    p0 = config.p0
    lam = 0.0 if kind is ModelKind.MODEL1 else config.initial_lambda
    search = config.lambda_search and kind is ModelKind.DIAGONAL
    vf = flat.n_tgt

    theta = (1.0 / flat.row_sizes[flat.e_of_key]).astype(np.float64)
    denoms = np.zeros(flat.n_src)
    delta = np.empty(flat.n_cells)
    work = np.empty(flat.n_cells)
    ranges = _chunk_ranges(flat.n_cells, config.workers)
    ll_trace: list[float] = []
    delta_stale = True

    for _ in range(config.iterations):
        if delta_stale:
            _delta_flat(flat, lam, p0, delta)
            delta_stale = False

        def escore(s: int, e: int) -> None:
            np.multiply(theta[flat.cell_key[s:e]], delta[s:e], out=work[s:e])

        _parallel(escore, ranges, config.workers)
        colsum = np.add.reduceat(work, flat.col_starts)
        ll_trace.append(float(np.log(colsum).sum()))
        inv = 1.0 / colsum

        def normalize(s: int, e: int) -> None:
            work[s:e] *= inv[flat.col_of_cell[s:e]]

        _parallel(normalize, ranges, config.workers)
        gamma = work  # renamed in place

        counts = np.add.reduceat(gamma[flat.perm], flat.key_starts)
        row_tot = np.add.reduceat(counts, flat.row_starts)
        denoms = row_tot + alpha * vf
        safe = np.where(denoms > 0, denoms, 1.0)
        theta = (counts + alpha) / safe[flat.e_of_key]
        theta[denoms[flat.e_of_key] <= 0] = 0.0

        if search:
            gh_sum = float(np.sum(gamma * flat.h))
            w_group = np.bincount(
                flat.group_of_col,
                weights=1.0 - gamma[flat.col_starts],
                minlength=len(flat.z_starts),
            )

            def objective(x: float) -> float:
                return _tension_objective(flat, w_group, gh_sum, x)

            candidate = _golden_max(objective, _LAMBDA_LO, _LAMBDA_HI, _LAMBDA_TOL)
            # keep the old tension if the search landed marginally worse,
            # so the likelihood trace stays monotone (generalized EM)
            if candidate != lam and objective(candidate) >= objective(lam):
                lam = candidate
                delta_stale = True

    table = TranslationTable(
        flat.src_words, flat.tgt_words, flat.uniq_keys, theta, denoms, alpha
    )
    params = DiagonalParams(lam=lam, p0=p0, kind=kind)
    return table, params, ll_trace


# --------------------------------------------------------------------------
# Decoding


def _decode_pair(
    src: tuple[str, ...],
    tgt: tuple[str, ...],
    table: TranslationTable,
    params: DiagonalParams,
) -> frozenset[tuple[int, int]]:
    n, m = len(src), len(tgt)
    vf = table.tgt_vocab_size
    e_ids = np.array([table.src_index.get(w, -1) for w in src], dtype=np.int64)
    f_ids = np.array([table.tgt_index.get(w, -1) for w in tgt], dtype=np.int64)
    e_col = np.concatenate([np.zeros(1, dtype=np.int64), e_ids])

    floors = np.empty(n + 1)
    default_floor = 1.0 / vf if table.alpha > 0 else 0.0
    for r, eid in enumerate(e_col):
        if eid < 0:
            floors[r] = default_floor
        else:
            den = table.denoms[eid]
            floors[r] = table.alpha / den if den > 0 else 0.0

    query = e_col[:, None] * vf + f_ids[None, :]
    pos = np.searchsorted(table.keys, query.ravel())
    pos_c = np.minimum(pos, len(table.keys) - 1)
    hit = (query.ravel() >= 0) & (table.keys[pos_c] == query.ravel())
    tmat = np.where(hit, table.probs[pos_c], np.repeat(floors, m)).reshape(n + 1, m)

    delta = _delta_matrix(n, m, params.effective_lambda, params.p0)
    best = (tmat * delta).argmax(axis=0)  # first max wins: ties break to smaller i
    return frozenset((int(i) - 1, j) for j, i in enumerate(best) if i > 0)


def decode(
    corpus: ParallelCorpus,
    table: TranslationTable,
    params: DiagonalParams,
    direction: Direction = Direction.FORWARD,
) -> AlignmentSet:
    """Viterbi-align each pair: a_j = argmax_i t(f_j|e_i) * delta(i,j,n,m).

    Links are emitted in (source index, target index) orientation for both
    directions; reverse-direction decoding transposes its output back.
    """
    links = []
    for pair in corpus:
        if direction is Direction.FORWARD:
            links.append(_decode_pair(pair.src, pair.tgt, table, params))
        else:
            raw = _decode_pair(pair.tgt, pair.src, table, params)
            links.append(frozenset((j, i) for i, j in raw))
    return AlignmentSet.from_sure(links)


# --------------------------------------------------------------------------
# Model persistence


def serialize_model(table: TranslationTable, params: DiagonalParams) -> str:
    """Text model dump.

    Header ``MODEL <kind> <lambda> <p0> <alpha> <tgt_vocab_size>``, then
    ``ROW <e> <denominator>`` records and ``<e> <f> <prob>`` triples, both
    sorted lexicographically.  Floats use shortest round-trip repr so a
    reloaded model reproduces decode outputs exactly.
    """
    out = [
        f"MODEL {params.kind.value} {params.lam!r} {params.p0!r} "
        f"{table.alpha!r} {table.tgt_vocab_size}\n"
    ]
    for e in sorted(table.src_words):
        out.append(f"ROW {e} {float(table.denoms[table.src_index[e]])!r}\n")
    vf = table.tgt_vocab_size
    triples = [
        (table.src_words[int(k // vf)], table.tgt_words[int(k % vf)], float(p))
        for k, p in zip(table.keys, table.probs)
    ]
    triples.sort(key=lambda t: (t[0], t[1]))
    out.extend(f"{e} {f} {p!r}\n" for e, f, p in triples)
    return "".join(out)


def parse_model(text: str) -> tuple[TranslationTable, DiagonalParams]:
    lines = text.splitlines()
    k = 0
    while k < len(lines) and lines[k].startswith("# "):
        k += 1
    if k >= len(lines):
        raise ParseError("empty model file")
    header = lines[k].split()
    if len(header) != 6 or header[0] != "MODEL":
        raise ParseError(
            "expected header 'MODEL <kind> <lambda> <p0> <alpha> <tgt_vocab_size>'",
            k + 1,
        )
    try:
        kind = ModelKind(header[1])
        lam, p0, alpha = float(header[2]), float(header[3]), float(header[4])
        vf = int(header[5])
    except ValueError as exc:
        raise ParseError(f"bad model header: {exc}", k + 1) from None

    denom_by_word: dict[str, float] = {}
    triples: list[tuple[str, str, float]] = []
    for lineno, line in enumerate(lines[k + 1:], start=k + 2):
        if not line.strip():
            continue
        fields = line.split()
        if fields[0] == "ROW":
            if len(fields) != 3:
                raise ParseError("expected 'ROW <e> <denominator>'", lineno)
            denom_by_word[fields[1]] = float(fields[2])
        elif len(fields) == 3:
            try:
                triples.append((fields[0], fields[1], float(fields[2])))
            except ValueError:
                raise ParseError(f"bad probability in {line!r}", lineno) from None
        else:
            raise ParseError(f"unrecognized model line {line!r}", lineno)

    src_words = sorted(denom_by_word)
    tgt_words = sorted({f for _, f, _ in triples})
    if len(tgt_words) != vf:
        raise ParseError(
            f"header declares {vf} target words but triples cover {len(tgt_words)}"
        )
    missing = {e for e, _, _ in triples} - denom_by_word.keys()
    if missing:
        raise ParseError(f"triple source word(s) without a ROW record: {sorted(missing)[:3]}")
    src_index = {w: i for i, w in enumerate(src_words)}
    tgt_index = {w: i for i, w in enumerate(tgt_words)}
    packed = np.array(
        [src_index[e] * vf + tgt_index[f] for e, f, _ in triples], dtype=np.int64
    )
    probs = np.array([p for _, _, p in triples])
    order = np.argsort(packed, kind="stable")
    denoms = np.array([denom_by_word[w] for w in src_words])
    return (
        TranslationTable(src_words, tgt_words, packed[order], probs[order], denoms, alpha),
        DiagonalParams(lam=lam, p0=p0, kind=kind),
    )


def save_model(table: TranslationTable, params: DiagonalParams, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_model(table, params))


def load_model(path) -> tuple[TranslationTable, DiagonalParams]:
    with open(path, encoding="utf-8") as fh:
        return parse_model(fh.read())


# --------------------------------------------------------------------------
# Estimator wrapper


class IbmAligner(BaseEstimator):
    """Bidirectional statistical aligner with a fit/predict interface.

    ``fit`` trains forward and reverse models on a parallel corpus;
    ``predict`` decodes both directions and combines them with the
    configured symmetrization heuristic.
    """

    def __init__(
        self,
        model: str = "diag",
        iterations: int = 5,
        alpha: float = 0.01,
        p0: float = 0.08,
        initial_lambda: float = 4.0,
        lambda_search: bool = True,
        heuristic: str = "grow-diag-final",
        seed: int = 0,
        workers: int = 1,
    ):
        self.model = model
        self.iterations = iterations
        self.alpha = alpha
        self.p0 = p0
        self.initial_lambda = initial_lambda
        self.lambda_search = lambda_search
        self.heuristic = heuristic
        self.seed = seed
        self.workers = workers

    def _config(self) -> TrainConfig:
        return TrainConfig(
            iterations=self.iterations,
            smoothing_alpha=self.alpha,
            initial_lambda=self.initial_lambda,
            p0=self.p0,
            lambda_search=self.lambda_search,
            seed=self.seed,
            workers=self.workers,
        )

    def fit(self, X, y=None):
        from .validation import as_corpus

        corpus = as_corpus(X)
        kind = ModelKind(self.model)
        cfg = self._config()
        self.table_fwd_, self.params_fwd_, self.ll_fwd_ = train(
            corpus, Direction.FORWARD, cfg, kind
        )
        self.table_rev_, self.params_rev_, self.ll_rev_ = train(
            corpus, Direction.REVERSE, cfg, kind
        )
        return self

    def predict(self, X) -> AlignmentSet:
        from .symmetrize import Heuristic, symmetrize_corpus
        from .validation import as_corpus

        corpus = as_corpus(X)
        fwd = decode(corpus, self.table_fwd_, self.params_fwd_, Direction.FORWARD)
        rev = decode(corpus, self.table_rev_, self.params_rev_, Direction.REVERSE)
        return symmetrize_corpus(fwd, rev, Heuristic(self.heuristic), corpus=corpus)

    def score(self, X, y) -> float:
        """1 - AER of the predicted alignments against gold ``y``."""
        from .metrics import evaluate

        return 1.0 - evaluate(self.predict(X), y).aer
